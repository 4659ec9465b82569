#pragma once

#include <functional>

#include "quadevo/algebra.hpp"

namespace quadevo {

// Time-dependent coefficients lambda_j(t) of H(t) = sum_j lambda_j(t) G_j.
struct CouplingSchedule {
    int size = 0;  // number of generators the coefficients refer to
    double t0 = 0.0;
    double t1 = 1.0;
    std::function<RVector(double)> lambda;

    // Throws InvalidArgument on a malformed schedule or a non-finite sample.
    RVector operator()(double t) const;
    void validate(const GeneratorBasis& basis) const;
};

// Matrix H(t) = sum_j lambda_j(t) G_j.
CMatrix hamiltonian_matrix(const CouplingSchedule& schedule, const GeneratorBasis& basis,
                           double t);

struct DecompositionState {
    double t = 0.0;
    RVector F;
};

// exp(-i F K G): the Heisenberg-picture map X -> S X of exp(-i F G).
CMatrix factor_matrix(double F, const CMatrix& generator, const CMatrix& kernel);
CMatrix factor_matrix(const GeneratorBasis& basis, int j, double F);

// S = S_1 S_2 ... S_n in basis order (leftmost j = 1).
CMatrix total_symplectic(const RVector& F, const GeneratorBasis& basis);

// ||S^T Omega S - Omega||: preservation of [X_i, X_j].
double symplectic_defect(const CMatrix& s, const GeneratorBasis& basis);
// ||S^dag eta S - eta||: preservation of [X_i, X_j^dag].
double metric_defect(const CMatrix& s, const GeneratorBasis& basis);

struct DecompositionLimits {
    // The detector example peaks near 7e10 in the canonical order; a genuine
    // coordinate singularity drives cond(A) far past this.
    double condition_limit = 1e12;
    // Relative to the norm of the transformed generator.
    double closure_tolerance = 1e-10;
};

struct RhsEvaluation {
    RVector Fdot;
    double condition = 1.0;
    double closure_residual = 0.0;
};

// The coupled first-order system A(F) Fdot = lambda(t), where column j of
// A(F) holds the basis coefficients of (N_{j-1}...N_1)^dag G_j (N_{j-1}...N_1)
// and N_k = S_k^{-1} is the Schroedinger-picture image of exp(-i F_k G_k).
class DecompositionSystem {
public:
    DecompositionSystem(const GeneratorBasis& basis, CouplingSchedule schedule,
                        DecompositionLimits limits = {});

    const GeneratorBasis& basis() const noexcept { return *basis_; }
    const CouplingSchedule& schedule() const noexcept { return schedule_; }
    const DecompositionLimits& limits() const noexcept { return limits_; }

    struct Coefficients {
        RMatrix A;
        double closure_residual = 0.0;
    };
    Coefficients coefficient_matrix(const RVector& F) const;

    // Throws DecompositionSingular or ClosureViolation.
    RhsEvaluation evaluate(double t, const RVector& F) const;

    // ||sum_j Fdot_j Gtilde_j(F) - H(t)||_HS: the matrix identity the ODEs are
    // built from, checked independently of the coefficient solve.
    double hamiltonian_residual(double t, const RVector& F, const RVector& Fdot) const;

private:
    const GeneratorBasis* basis_;
    CouplingSchedule schedule_;
    DecompositionLimits limits_;
};

RVector assemble_rhs(double t, const DecompositionState& state,
                     const CouplingSchedule& schedule, const GeneratorBasis& basis,
                     const DecompositionLimits& limits = {});

}  // namespace quadevo
