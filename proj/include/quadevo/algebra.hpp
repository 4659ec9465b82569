#pragma once

#include <Eigen/Cholesky>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quadevo/linalg.hpp"

namespace quadevo {

// Operator vector X = (D_1, D_1^dag, ..., D_N, D_N^dag). Modes and slots are
// 0-based in code: mode m owns slots 2m (annihilator) and 2m+1 (creator).
class ModeIndexing {
public:
    explicit ModeIndexing(int n_modes);

    int n_modes() const noexcept { return n_modes_; }
    int dimension() const noexcept { return 2 * n_modes_; }
    int annihilator(int mode) const;
    int creator(int mode) const;

private:
    int n_modes_;
};

enum class GeneratorClass {
    phase,
    single_squeeze_re,
    single_squeeze_im,
    beamsplit_re,
    beamsplit_im,
    two_mode_squeeze_re,
    two_mode_squeeze_im,
};

std::string_view to_string(GeneratorClass c);

bool is_passive(GeneratorClass c) noexcept;

struct GeneratorLabel {
    GeneratorClass cls;
    int mode_a;
    int mode_b;  // -1 for single-mode generators

    bool operator==(const GeneratorLabel&) const = default;
};

std::string describe(const GeneratorLabel& label);

// Hermitian 2N x 2N matrix of a quadratic operator sum_k c_k X_{a_k} X_{b_k},
// rendered in the symmetric (Weyl) ordering so that op = X^dag M X up to an
// additive constant.
struct QuadraticTerm {
    Complex coeff;
    int slot_a;
    int slot_b;
};
CMatrix quadratic_matrix(int n_modes, std::span<const QuadraticTerm> terms);

// Omega_ij = [X_i, X_j]: block diagonal with [[0,1],[-1,0]] per mode.
CMatrix symplectic_form(int n_modes);

// eta_ij = [X_i, X_j^dag] = diag(1,-1,...,1,-1).
CMatrix metric_form(int n_modes);

// Kernel K such that [X^dag A X, X^dag B X] = X^dag (A K B - B K A) X and
// U^dag X U = exp(-i F K G) X for U = exp(-i F X^dag G X). K = 2 Omega P,
// with P the annihilator/creator swap.
CMatrix commutation_kernel(int n_modes);

struct Projection {
    RVector coefficients;
    double residual = 0.0;
};

struct ComplexProjection {
    CVector coefficients;
    double residual = 0.0;
};

class GeneratorBasis {
public:
    // Canonical ordered basis: single-mode squeezing (by mode, re then im),
    // two-mode squeezing (by pair, re then im), beam splitting (by pair, re
    // then im), phase rotations (by mode).
    static GeneratorBasis build(int n_modes);

    int n_modes() const noexcept { return n_modes_; }
    int dimension() const noexcept { return 2 * n_modes_; }
    int size() const noexcept { return static_cast<int>(matrices_.size()); }

    const CMatrix& matrix(int j) const;
    const GeneratorLabel& label(int j) const;
    std::span<const CMatrix> matrices() const noexcept { return matrices_; }
    std::span<const GeneratorLabel> labels() const noexcept { return labels_; }

    const CMatrix& omega() const noexcept { return omega_; }
    const CMatrix& metric() const noexcept { return metric_; }
    const CMatrix& kernel() const noexcept { return kernel_; }

    std::optional<int> find(GeneratorClass cls, int mode_a, int mode_b = -1) const;
    int index_of(GeneratorClass cls, int mode_a, int mode_b = -1) const;

    // Least-squares expansion of a Hermitian matrix in the basis under the
    // Hilbert-Schmidt inner product. The residual includes any anti-Hermitian
    // part of m, which the real coefficients cannot represent.
    Projection project(const CMatrix& m) const;
    ComplexProjection project_complex(const CMatrix& m) const;

    CMatrix combine(const RVector& coefficients) const;

    // Matrix-level image of the operator commutator [G_i, G_j].
    CMatrix commutator(const CMatrix& a, const CMatrix& b) const {
        return a * kernel_ * b - b * kernel_ * a;
    }

    // Same basis with factors permuted: new index k holds old generator
    // order[k]. Used to study how the factor ordering enters results.
    GeneratorBasis reordered(std::span<const int> order) const;

    // Replace one generator matrix without any validation. Fault injection
    // hook for the self-check suite.
    GeneratorBasis with_replaced_generator(int j, const CMatrix& m) const;

    // Matrix of the total number operator sum_m D_m^dag D_m (one half of the
    // identity in the symmetric rendering).
    CMatrix total_number_matrix() const;

private:
    GeneratorBasis(int n_modes, std::vector<CMatrix> matrices,
                   std::vector<GeneratorLabel> labels);
    void factor_gram();

    int n_modes_ = 0;
    std::vector<CMatrix> matrices_;
    std::vector<GeneratorLabel> labels_;
    CMatrix omega_;
    CMatrix metric_;
    CMatrix kernel_;
    RMatrix gram_;
    Eigen::LDLT<RMatrix> gram_ldlt_;
};

inline GeneratorBasis build_generator_basis(int n_modes) {
    return GeneratorBasis::build(n_modes);
}

inline Projection project_onto_basis(const CMatrix& m, const GeneratorBasis& basis) {
    return basis.project(m);
}

// Dense c_ijk with [G_i, G_j] = sum_k c_ijk G_k. Entries are purely imaginary
// for a Hermitian basis.
class StructureConstants {
public:
    StructureConstants(int size, std::vector<Complex> data, double max_residual);

    int size() const noexcept { return size_; }
    Complex operator()(int i, int j, int k) const {
        return data_[(static_cast<std::size_t>(i) * size_ + j) * size_ + k];
    }
    // Largest closure residual seen while building the tensor.
    double max_residual() const noexcept { return max_residual_; }
    // max |c_ijk + c_jik|
    double antisymmetry_defect() const;

private:
    int size_;
    std::vector<Complex> data_;
    double max_residual_;
};

inline constexpr double kClosureTolerance = 1e-10;

// Throws ClosureViolation when a commutator leaves the span of the basis.
StructureConstants structure_constants(const GeneratorBasis& basis,
                                       double tolerance = kClosureTolerance);

}  // namespace quadevo
