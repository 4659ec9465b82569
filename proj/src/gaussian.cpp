#include "quadevo/gaussian.hpp"

#include <Eigen/LU>

#include <cmath>

#include "quadevo/errors.hpp"

namespace quadevo {

namespace {

double clamp_number(double v) {
    return (v < 0.0 && v >= -kNegativeZeroClamp) ? 0.0 : v;
}

}  // namespace

CovarianceState vacuum_state(int n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("vacuum_state needs at least one mode");
    }
    return {CMatrix::Identity(2 * n_modes, 2 * n_modes)};
}

CovarianceState evolve_state(const CovarianceState& initial, const CMatrix& s) {
    if (s.rows() != s.cols() || s.rows() != initial.gamma.rows() ||
        initial.gamma.rows() != initial.gamma.cols()) {
        throw DimensionMismatch("evolve_state: covariance is " +
                                std::to_string(initial.gamma.rows()) + "x" +
                                std::to_string(initial.gamma.cols()) + ", S is " +
                                std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
    }
    CMatrix g = s * initial.gamma * s.adjoint();
    // Remove the rounding-level anti-Hermitian part.
    g = (0.5 * (g + g.adjoint())).eval();
    return {std::move(g)};
}

double detector_number(const CovarianceState& state, int mode) {
    if (mode < 0 || mode >= state.n_modes()) {
        throw IndexOutOfRange("mode " + std::to_string(mode) + " out of range");
    }
    return clamp_number(0.5 * (state.gamma(2 * mode, 2 * mode).real() - 1.0));
}

double total_number(const CovarianceState& state) {
    double total = 0.0;
    for (int m = 0; m < state.n_modes(); ++m) {
        total += 0.5 * (state.gamma(2 * m, 2 * m).real() - 1.0);
    }
    return clamp_number(total);
}

double number_from_F(const std::array<double, 4>& F) {
    double prod = 1.0;
    for (double f : F) {
        prod *= std::cosh(2.0 * f);
    }
    return clamp_number(0.5 * (prod - 1.0));
}

std::array<double, 4> active_detector_parameters(const RVector& F, const GeneratorBasis& basis,
                                                 int detector_mode, int field_mode) {
    if (F.size() != basis.size()) {
        throw DimensionMismatch("F vector does not match the basis");
    }
    const int a = std::min(detector_mode, field_mode);
    const int b = std::max(detector_mode, field_mode);
    return {F(basis.index_of(GeneratorClass::two_mode_squeeze_re, a, b)),
            F(basis.index_of(GeneratorClass::two_mode_squeeze_im, a, b)),
            F(basis.index_of(GeneratorClass::single_squeeze_re, detector_mode)),
            F(basis.index_of(GeneratorClass::single_squeeze_im, detector_mode))};
}

double number_from_F(const RVector& F, const GeneratorBasis& basis, int detector_mode,
                     int field_mode) {
    return number_from_F(active_detector_parameters(F, basis, detector_mode, field_mode));
}

BogoliubovData build_bogoliubov(const CMatrix& A, const CMatrix& B, int p) {
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n || B.rows() != n || B.cols() != n) {
        throw DimensionMismatch("Bogoliubov blocks must be square and of equal size");
    }
    if (p < 0 || p >= n) {
        throw IndexOutOfRange("distinguished mode " + std::to_string(p) + " out of range");
    }
    Eigen::FullPivLU<CMatrix> lu(A);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
        throw SingularA("Bogoliubov block A is singular");
    }
    const double defect =
        (A * A.adjoint() - B * B.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= kBogoliubovTolerance)) {
        throw NotBogoliubov("A A^dag - B B^dag deviates from the identity", defect);
    }
    BogoliubovData out;
    out.A = A;
    out.B = B;
    out.p = p;
    const CMatrix v = B.conjugate() * lu.inverse();
    out.asymmetry = (v - v.transpose()).cwiseAbs().maxCoeff();
    if (out.asymmetry > kBogoliubovTolerance * std::max(1.0, v.cwiseAbs().maxCoeff())) {
        throw NotBogoliubov("V = B^* A^-1 is not symmetric", out.asymmetry);
    }
    out.V = 0.5 * (v + v.transpose());
    return out;
}

FieldMoments bogoliubov_moments(const BogoliubovData& bog) {
    const auto& V = bog.V;
    const Eigen::Index n = V.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix vcv = V.conjugate() * V;
    FieldMoments out;
    out.n = (id - vcv).partialPivLu().solve(vcv);
    out.m = -(id - V * V.conjugate()).partialPivLu().solve(V);
    return out;
}

CovarianceState bogoliubov_state(const BogoliubovData& bog) {
    const auto mom = bogoliubov_moments(bog);
    const int nf = static_cast<int>(bog.V.rows());
    CovarianceState state = vacuum_state(nf + 1);
    auto& g = state.gamma;
    for (int a = 0; a < nf; ++a) {
        const int sa = 2 * (a + 1);
        for (int b = 0; b < nf; ++b) {
            const int sb = 2 * (b + 1);
            const double delta = a == b ? 1.0 : 0.0;
            g(sa, sb) = delta + 2.0 * mom.n(b, a);
            g(sa, sb + 1) = 2.0 * mom.m(a, b);
            g(sa + 1, sb) = 2.0 * std::conj(mom.m(a, b));
            g(sa + 1, sb + 1) = delta + 2.0 * mom.n(a, b);
        }
    }
    return state;
}

double number_from_bogoliubov(const CMatrix& s, const BogoliubovData& bog) {
    const int nf = static_cast<int>(bog.V.rows());
    if (bog.p < 0 || bog.p >= nf) {
        throw IndexOutOfRange("distinguished mode " + std::to_string(bog.p) + " out of range");
    }
    if (s.rows() != 2 * (nf + 1) || s.cols() != s.rows()) {
        throw DimensionMismatch("S must cover the detector and every field mode of V");
    }
    const auto mom = bogoliubov_moments(bog);
    const Complex n = mom.n(bog.p, bog.p);
    const Complex m = mom.m(bog.p, bog.p);
    const int slot = 2 * (bog.p + 1);
    const Complex s1 = s(0, 1);
    const Complex sa = s(0, slot);
    const Complex sb = s(0, slot + 1);
    const Complex total = std::norm(s1) + n * std::norm(sa) + (1.0 + n) * std::norm(sb) +
                          m * sa * std::conj(sb) + std::conj(m) * std::conj(sa) * sb;
    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real()))) {
        throw Error("number_from_bogoliubov: assembled value is not real");
    }
    return clamp_number(total.real());
}

}  // namespace quadevo
