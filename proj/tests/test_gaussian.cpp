#include <doctest.h>

#include <random>

#include "fock.hpp"
#include "quadevo/errors.hpp"
#include "quadevo/gaussian.hpp"
#include "quadevo/weinorman.hpp"

using namespace quadevo;

namespace {

// U |psi> for U = prod_j exp(-i F_j G_j), leftmost factor j = 0.
fock::Vec apply_product(const fock::Space& space, const GeneratorBasis& basis, const RVector& f,
                        fock::Vec psi) {
    for (int j = basis.size() - 1; j >= 0; --j) {
        if (f(j) == 0.0) continue;
        const auto& l = basis.label(j);
        psi = fock::evolve(fock::generator(space, l.cls, l.mode_a, l.mode_b), f(j), psi);
    }
    return psi;
}

double expect_number(const fock::Space& space, const fock::Vec& psi, int mode) {
    return (space.a(mode) * psi).squaredNorm() / psi.squaredNorm();
}

RVector random_vector(int n, std::mt19937& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    RVector v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

}  // namespace

TEST_CASE("vacuum covariance") {
    const auto v = vacuum_state(3);
    CHECK(v.gamma == CMatrix::Identity(6, 6));
    CHECK(detector_number(v, 0) == 0.0);
    CHECK(total_number(v) == 0.0);
    CHECK_THROWS_AS(vacuum_state(0), InvalidArgument);
    CHECK_THROWS_AS(detector_number(v, 3), IndexOutOfRange);
    CHECK_THROWS_AS(evolve_state(v, CMatrix::Identity(4, 4)), DimensionMismatch);
}

TEST_CASE("two-mode squeezing gives sinh squared") {
    const auto basis = GeneratorBasis::build(2);
    const int tms = basis.index_of(GeneratorClass::two_mode_squeeze_re, 0, 1);
    const auto state = evolve_state(vacuum_state(2), factor_matrix(basis, tms, 0.5));
    CHECK(detector_number(state, 0) == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-13));
    CHECK(detector_number(state, 1) == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-13));
    CHECK(number_from_F({0.5, 0.0, 0.0, 0.0}) == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-13));
    CHECK(detector_number(state, 0) == doctest::Approx(0.27154).epsilon(1e-5));
    CHECK(number_from_F({0.0, 0.0, 0.1, 0.0}) == doctest::Approx(0.01003338).epsilon(1e-6));
    CHECK(number_from_F({0.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("passive evolution conserves the total number") {
    const auto basis = GeneratorBasis::build(3);
    std::mt19937 rng(17);
    RVector f = RVector::Zero(basis.size());
    for (int j = 0; j < basis.size(); ++j) {
        if (is_passive(basis.label(j).cls)) f(j) = std::uniform_real_distribution<double>(-2, 2)(rng);
    }
    const CMatrix s = total_symplectic(f, basis);
    CHECK(total_number(evolve_state(vacuum_state(3), s)) == 0.0);

    RVector sq = RVector::Zero(basis.size());
    sq(basis.index_of(GeneratorClass::single_squeeze_re, 1)) = 0.6;
    const auto start = evolve_state(vacuum_state(3), total_symplectic(sq, basis));
    const auto moved = evolve_state(start, s);
    CHECK(std::abs(total_number(moved) - total_number(start)) < 1e-12);
    CHECK(detector_number(moved, 0) > 1e-3);  // the beam splitters really moved population
}

TEST_CASE("covariance route and product formula agree with Fock space") {
    const auto basis = GeneratorBasis::build(2);
    const fock::Space space(2, 30);
    std::mt19937 rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const RVector f = random_vector(basis.size(), rng, 0.25);
        const fock::Vec psi = apply_product(space, basis, f, space.vacuum());
        REQUIRE(fock::top_level_weight(space, psi, 6) < 1e-12);
        const double oracle = expect_number(space, psi, 0);
        const auto state = evolve_state(vacuum_state(2), total_symplectic(f, basis));
        CHECK(std::abs(detector_number(state, 0) - oracle) < 1e-10);
        CHECK(std::abs(number_from_F(f, basis) - oracle) < 1e-10);
        CHECK(std::abs(detector_number(state, 1) - expect_number(space, psi, 1)) < 1e-10);
    }
}

TEST_CASE("active parameters are picked by label") {
    const auto basis = GeneratorBasis::build(2);
    RVector f = RVector::LinSpaced(basis.size(), 1.0, 10.0);
    const auto p = active_detector_parameters(f, basis);
    CHECK(p[0] == f(basis.index_of(GeneratorClass::two_mode_squeeze_re, 0, 1)));
    CHECK(p[1] == f(basis.index_of(GeneratorClass::two_mode_squeeze_im, 0, 1)));
    CHECK(p[2] == f(basis.index_of(GeneratorClass::single_squeeze_re, 0)));
    CHECK(p[3] == f(basis.index_of(GeneratorClass::single_squeeze_im, 0)));
    CHECK_THROWS_AS(active_detector_parameters(RVector::Zero(3), basis), DimensionMismatch);
}

TEST_CASE("single-mode Bogoliubov data") {
    const double r = 0.4, phi = 0.9;
    CMatrix a(1, 1), b(1, 1);
    a(0, 0) = std::cosh(r);
    b(0, 0) = -std::sinh(r) * std::exp(kI * phi);
    const auto bog = build_bogoliubov(a, b);
    CHECK(std::abs(bog.V(0, 0) + std::tanh(r) * std::exp(-kI * phi)) < 1e-15);
    const auto mom = bogoliubov_moments(bog);
    CHECK(std::abs(mom.n(0, 0) - std::pow(std::sinh(r), 2)) < 1e-14);
    // <D D> for the a-vacuum: D = A^* a - B^* a^dag gives -A^* B^*.
    CHECK(std::abs(mom.m(0, 0) - (-std::conj(a(0, 0)) * std::conj(b(0, 0)))) < 1e-14);
}

TEST_CASE("Bogoliubov moments match the Fock-space squeezed vacuum") {
    // Two field modes, V = -tanh r e^{-i phi} M with M = O diag(1,-1) O^T.
    const double r = 0.35, phi = 0.4, theta = 0.6;
    RMatrix o(2, 2);
    o << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    RMatrix d = RMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const CMatrix m = (o * d * o.transpose()).cast<Complex>();
    const CMatrix a = std::cosh(r) * CMatrix::Identity(2, 2);
    const CMatrix b = -std::sinh(r) * std::exp(kI * phi) * m;
    const auto bog = build_bogoliubov(a, b, 1);
    CHECK(bog.asymmetry < 1e-15);
    CHECK((bog.V + std::tanh(r) * std::exp(-kI * phi) * m).norm() < 1e-14);

    // exp(-1/2 sum V_ij D_i^dag D_j^dag)|0> by power series.
    const fock::Space space(2, 30);
    fock::SpMat x(space.dim(), space.dim());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            x += (-0.5 * bog.V(i, j)) * fock::SpMat(space.ad(i) * space.ad(j));
        }
    }
    fock::Vec psi = space.vacuum();
    fock::Vec term = psi;
    for (int k = 1; k < 60; ++k) {
        term = (x * term) / static_cast<double>(k);
        psi += term;
    }
    REQUIRE(fock::top_level_weight(space, psi / psi.norm(), 4) < 1e-14);
    psi.normalize();

    const auto mom = bogoliubov_moments(bog);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Complex nij = psi.dot(space.ad(i) * (space.a(j) * psi));
            const Complex mij = psi.dot(space.a(i) * (space.a(j) * psi));
            CHECK(std::abs(mom.n(i, j) - nij) < 1e-10);
            CHECK(std::abs(mom.m(i, j) - mij) < 1e-10);
        }
    }
    // a_1 psi = 0 with a = A^T D + B^dag D^dag
    fock::Vec ann = fock::Vec::Zero(space.dim());
    for (int k = 0; k < 2; ++k) {
        ann += a(k, 0) * (space.a(k) * psi) + std::conj(b(k, 0)) * (space.ad(k) * psi);
    }
    // Only trust the low part of the truncated space.
    double low = 0.0;
    for (long idx = 0; idx < space.dim(); ++idx) {
        if (space.occupation(idx, 0) < 20 && space.occupation(idx, 1) < 20) {
            low = std::max(low, std::abs(ann(idx)));
        }
    }
    CHECK(low < 1e-12);
}

TEST_CASE("Bogoliubov blocks from a random symplectic map give a symmetric V") {
    const auto basis = GeneratorBasis::build(2);
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix s = total_symplectic(random_vector(basis.size(), rng, 0.8), basis);
        CMatrix p(2, 2), q(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                p(i, j) = s(2 * i, 2 * j);
                q(i, j) = s(2 * i, 2 * j + 1);
            }
        }
        // a = P D + Q D^dag = A^T D + B^dag D^dag
        const CMatrix a = p.transpose();
        const CMatrix b = q.adjoint();
        const auto bog = build_bogoliubov(a, b);
        CHECK(bog.asymmetry < 1e-12);
    }
}

TEST_CASE("detector number with a Bogoliubov field matches Fock space") {
    // Detector (mode 0) in its ground state, two field modes in the a-vacuum.
    const double r = 0.3, phi = 1.1, theta = 0.3;
    RMatrix o(2, 2);
    o << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    RMatrix dg = RMatrix::Zero(2, 2);
    dg(0, 0) = 1.0;
    dg(1, 1) = -1.0;
    const CMatrix m = (o * dg * o.transpose()).cast<Complex>();
    const CMatrix a = std::cosh(r) * CMatrix::Identity(2, 2);
    const CMatrix b = -std::sinh(r) * std::exp(kI * phi) * m;
    const auto bog = build_bogoliubov(a, b, 0);

    const fock::Space space(3, 24);
    fock::SpMat x(space.dim(), space.dim());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            x += (-0.5 * bog.V(i, j)) * fock::SpMat(space.ad(i + 1) * space.ad(j + 1));
        }
    }
    fock::Vec psi0 = space.vacuum();
    fock::Vec term = psi0;
    for (int k = 1; k < 40; ++k) {
        term = (x * term) / static_cast<double>(k);
        psi0 += term;
    }
    psi0.normalize();

    const auto basis = GeneratorBasis::build(3);
    RVector f = RVector::Zero(basis.size());
    f(basis.index_of(GeneratorClass::two_mode_squeeze_re, 0, 1)) = 0.2;
    f(basis.index_of(GeneratorClass::two_mode_squeeze_im, 0, 1)) = -0.1;
    f(basis.index_of(GeneratorClass::single_squeeze_re, 0)) = 0.15;
    f(basis.index_of(GeneratorClass::beamsplit_re, 0, 1)) = 0.3;
    f(basis.index_of(GeneratorClass::phase, 0)) = 0.7;
    const fock::Vec psi = apply_product(space, basis, f, psi0);
    REQUIRE(fock::top_level_weight(space, psi, 3) < 1e-11);
    const double oracle = expect_number(space, psi, 0);

    const CMatrix s = total_symplectic(f, basis);
    const double via_formula = number_from_bogoliubov(s, bog);
    const double via_cov = detector_number(evolve_state(bogoliubov_state(bog), s), 0);
    CHECK(std::abs(via_formula - via_cov) < 1e-12);
    CHECK(std::abs(via_cov - oracle) < 1e-9);
}

TEST_CASE("Bogoliubov input validation") {
    CMatrix a = CMatrix::Identity(2, 2);
    CMatrix b = CMatrix::Zero(2, 2);
    CHECK_NOTHROW(build_bogoliubov(a, b, 1));
    CHECK_THROWS_AS(build_bogoliubov(a, b, 2), IndexOutOfRange);
    CHECK_THROWS_AS(build_bogoliubov(a, CMatrix::Zero(3, 3)), DimensionMismatch);
    b(0, 0) = 0.5;
    CHECK_THROWS_AS(build_bogoliubov(a, b), NotBogoliubov);
    CMatrix z = CMatrix::Zero(2, 2);
    CHECK_THROWS_AS(build_bogoliubov(z, z), SingularA);
    const auto bog = build_bogoliubov(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
    CHECK_THROWS_AS(number_from_bogoliubov(CMatrix::Identity(4, 4), bog), DimensionMismatch);
}
