#include "quadevo/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "quadevo/errors.hpp"

namespace quadevo {

ModeIndexing::ModeIndexing(int n_modes) : n_modes_(n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("n_modes must be >= 1");
    }
}

int ModeIndexing::annihilator(int mode) const {
    if (mode < 0 || mode >= n_modes_) {
        throw IndexOutOfRange("mode " + std::to_string(mode) + " out of range");
    }
    return 2 * mode;
}

int ModeIndexing::creator(int mode) const { return annihilator(mode) + 1; }

std::string_view to_string(GeneratorClass c) {
    switch (c) {
        case GeneratorClass::phase: return "phase";
        case GeneratorClass::single_squeeze_re: return "single_squeeze_re";
        case GeneratorClass::single_squeeze_im: return "single_squeeze_im";
        case GeneratorClass::beamsplit_re: return "beamsplit_re";
        case GeneratorClass::beamsplit_im: return "beamsplit_im";
        case GeneratorClass::two_mode_squeeze_re: return "two_mode_squeeze_re";
        case GeneratorClass::two_mode_squeeze_im: return "two_mode_squeeze_im";
    }
    return "unknown";
}

bool is_passive(GeneratorClass c) noexcept {
    return c == GeneratorClass::phase || c == GeneratorClass::beamsplit_re ||
           c == GeneratorClass::beamsplit_im;
}

std::string describe(const GeneratorLabel& label) {
    std::string s(to_string(label.cls));
    s += "(" + std::to_string(label.mode_a + 1);
    if (label.mode_b >= 0) {
        s += "," + std::to_string(label.mode_b + 1);
    }
    return s + ")";
}

namespace {

// Swap of annihilator and creator slots within every mode.
RMatrix slot_swap(int n_modes) {
    RMatrix p = RMatrix::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        p(2 * m, 2 * m + 1) = 1.0;
        p(2 * m + 1, 2 * m) = 1.0;
    }
    return p;
}

}  // namespace

CMatrix quadratic_matrix(int n_modes, std::span<const QuadraticTerm> terms) {
    const int dim = 2 * n_modes;
    // sum c X_a X_b = X^T K X with K symmetric; X^dag = (P X)^T gives G = P K.
    CMatrix k = CMatrix::Zero(dim, dim);
    for (const auto& t : terms) {
        if (t.slot_a < 0 || t.slot_a >= dim || t.slot_b < 0 || t.slot_b >= dim) {
            throw IndexOutOfRange("quadratic term slot out of range");
        }
        k(t.slot_a, t.slot_b) += 0.5 * t.coeff;
        k(t.slot_b, t.slot_a) += 0.5 * t.coeff;
    }
    return slot_swap(n_modes).cast<Complex>() * k;
}

CMatrix symplectic_form(int n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("n_modes must be >= 1");
    }
    CMatrix omega = CMatrix::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

CMatrix metric_form(int n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("n_modes must be >= 1");
    }
    CMatrix eta = CMatrix::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < 2 * n_modes; ++i) {
        eta(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
    }
    return eta;
}

CMatrix commutation_kernel(int n_modes) {
    return 2.0 * symplectic_form(n_modes) * slot_swap(n_modes).cast<Complex>();
}

GeneratorBasis::GeneratorBasis(int n_modes, std::vector<CMatrix> matrices,
                               std::vector<GeneratorLabel> labels)
    : n_modes_(n_modes),
      matrices_(std::move(matrices)),
      labels_(std::move(labels)),
      omega_(symplectic_form(n_modes)),
      metric_(metric_form(n_modes)),
      kernel_(commutation_kernel(n_modes)) {
    factor_gram();
}

void GeneratorBasis::factor_gram() {
    const int n = size();
    gram_.resize(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            gram_(a, b) = hs_inner(matrices_[a], matrices_[b]).real();
        }
    }
    gram_ldlt_.compute(gram_);
    const auto d = gram_ldlt_.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (gram_ldlt_.info() != Eigen::Success || d.minCoeff() <= 1e-12 * dmax) {
        throw GramSingular("generator Gram matrix is numerically singular");
    }
}

GeneratorBasis GeneratorBasis::build(int n_modes) {
    const ModeIndexing idx(n_modes);
    std::vector<CMatrix> mats;
    std::vector<GeneratorLabel> labels;
    auto add = [&](GeneratorClass cls, int a, int b,
                   std::initializer_list<QuadraticTerm> terms) {
        mats.push_back(quadratic_matrix(n_modes, std::span(terms.begin(), terms.size())));
        labels.push_back({cls, a, b});
    };

    const Complex half = 0.5;
    const Complex ihalf = 0.5 * kI;
    for (int m = 0; m < n_modes; ++m) {
        const int d = idx.annihilator(m);
        const int c = idx.creator(m);
        // (D^dag^2 + D^2)/2 and -i(D^dag^2 - D^2)/2
        add(GeneratorClass::single_squeeze_re, m, -1, {{half, c, c}, {half, d, d}});
        add(GeneratorClass::single_squeeze_im, m, -1, {{-ihalf, c, c}, {ihalf, d, d}});
    }

    std::vector<std::array<int, 2>> pairs;
    for (int a = 0; a < n_modes; ++a) {
        for (int b = a + 1; b < n_modes; ++b) {
            pairs.push_back({a, b});
        }
    }
    for (auto [a, b] : pairs) {
        const int da = idx.annihilator(a), ca = idx.creator(a);
        const int db = idx.annihilator(b), cb = idx.creator(b);
        // Da^dag Db^dag + Da Db and -i(Da Db - Da^dag Db^dag)
        add(GeneratorClass::two_mode_squeeze_re, a, b, {{1.0, ca, cb}, {1.0, da, db}});
        add(GeneratorClass::two_mode_squeeze_im, a, b, {{kI, ca, cb}, {-kI, da, db}});
    }
    for (auto [a, b] : pairs) {
        const int da = idx.annihilator(a), ca = idx.creator(a);
        const int db = idx.annihilator(b), cb = idx.creator(b);
        // Da^dag Db + Da Db^dag and -i(Da Db^dag - Da^dag Db)
        add(GeneratorClass::beamsplit_re, a, b, {{1.0, ca, db}, {1.0, da, cb}});
        add(GeneratorClass::beamsplit_im, a, b, {{kI, ca, db}, {-kI, da, cb}});
    }
    for (int m = 0; m < n_modes; ++m) {
        add(GeneratorClass::phase, m, -1,
            {{half, idx.creator(m), idx.annihilator(m)},
             {half, idx.annihilator(m), idx.creator(m)}});
    }
    return GeneratorBasis(n_modes, std::move(mats), std::move(labels));
}

const CMatrix& GeneratorBasis::matrix(int j) const {
    if (j < 0 || j >= size()) {
        throw IndexOutOfRange("generator index " + std::to_string(j) + " out of range");
    }
    return matrices_[j];
}

const GeneratorLabel& GeneratorBasis::label(int j) const {
    if (j < 0 || j >= size()) {
        throw IndexOutOfRange("generator index " + std::to_string(j) + " out of range");
    }
    return labels_[j];
}

std::optional<int> GeneratorBasis::find(GeneratorClass cls, int mode_a, int mode_b) const {
    if (mode_b >= 0 && mode_b < mode_a) {
        std::swap(mode_a, mode_b);
    }
    const GeneratorLabel key{cls, mode_a, mode_b};
    const auto it = std::find(labels_.begin(), labels_.end(), key);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - labels_.begin());
}

int GeneratorBasis::index_of(GeneratorClass cls, int mode_a, int mode_b) const {
    const auto j = find(cls, mode_a, mode_b);
    if (!j) {
        throw IndexOutOfRange("no generator " + describe({cls, mode_a, mode_b}));
    }
    return *j;
}

ComplexProjection GeneratorBasis::project_complex(const CMatrix& m) const {
    if (m.rows() != dimension() || m.cols() != dimension()) {
        throw DimensionMismatch("project: matrix is not 2N x 2N");
    }
    const int n = size();
    CVector rhs(n);
    for (int a = 0; a < n; ++a) {
        rhs(a) = hs_inner(matrices_[a], m);
    }
    // Gram matrix is real, so real and imaginary parts solve separately.
    ComplexProjection out;
    out.coefficients.resize(n);
    out.coefficients.real() = gram_ldlt_.solve(RVector(rhs.real()));
    out.coefficients.imag() = gram_ldlt_.solve(RVector(rhs.imag()));
    CMatrix rem = m;
    for (int a = 0; a < n; ++a) {
        rem -= out.coefficients(a) * matrices_[a];
    }
    out.residual = hs_norm(rem);
    return out;
}

Projection GeneratorBasis::project(const CMatrix& m) const {
    const auto cp = project_complex(m);
    Projection out;
    out.coefficients = cp.coefficients.real();
    out.residual = hs_norm(m - combine(out.coefficients));
    return out;
}

CMatrix GeneratorBasis::combine(const RVector& coefficients) const {
    if (coefficients.size() != size()) {
        throw DimensionMismatch("combine: coefficient count does not match basis");
    }
    CMatrix out = CMatrix::Zero(dimension(), dimension());
    for (int a = 0; a < size(); ++a) {
        if (coefficients(a) != 0.0) {
            out += coefficients(a) * matrices_[a];
        }
    }
    return out;
}

GeneratorBasis GeneratorBasis::reordered(std::span<const int> order) const {
    if (static_cast<int>(order.size()) != size()) {
        throw InvalidArgument("reordered: permutation has wrong length");
    }
    std::vector<int> seen(order.begin(), order.end());
    std::sort(seen.begin(), seen.end());
    for (int k = 0; k < size(); ++k) {
        if (seen[k] != k) {
            throw InvalidArgument("reordered: not a permutation");
        }
    }
    std::vector<CMatrix> mats;
    std::vector<GeneratorLabel> labels;
    for (int j : order) {
        mats.push_back(matrices_[j]);
        labels.push_back(labels_[j]);
    }
    return GeneratorBasis(n_modes_, std::move(mats), std::move(labels));
}

GeneratorBasis GeneratorBasis::with_replaced_generator(int j, const CMatrix& m) const {
    if (m.rows() != dimension() || m.cols() != dimension()) {
        throw DimensionMismatch("replacement generator has wrong shape");
    }
    auto mats = matrices_;
    mats.at(j) = m;
    return GeneratorBasis(n_modes_, std::move(mats), labels_);
}

CMatrix GeneratorBasis::total_number_matrix() const {
    return 0.5 * CMatrix::Identity(dimension(), dimension());
}

StructureConstants::StructureConstants(int size, std::vector<Complex> data,
                                       double max_residual)
    : size_(size), data_(std::move(data)), max_residual_(max_residual) {}

double StructureConstants::antisymmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) {
            for (int k = 0; k < size_; ++k) {
                worst = std::max(worst, std::abs((*this)(i, j, k) + (*this)(j, i, k)));
            }
        }
    }
    return worst;
}

StructureConstants structure_constants(const GeneratorBasis& basis, double tolerance) {
    const int n = basis.size();
    std::vector<Complex> data(static_cast<std::size_t>(n) * n * n, Complex{});
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const auto p = basis.project_complex(basis.commutator(basis.matrix(i), basis.matrix(j)));
            worst = std::max(worst, p.residual);
            if (p.residual > tolerance) {
                throw ClosureViolation("commutator [" + describe(basis.label(i)) + ", " +
                                           describe(basis.label(j)) + "] leaves the basis",
                                       p.residual);
            }
            for (int k = 0; k < n; ++k) {
                data[(static_cast<std::size_t>(i) * n + j) * n + k] = p.coefficients(k);
            }
        }
    }
    return StructureConstants(n, std::move(data), worst);
}

}  // namespace quadevo
