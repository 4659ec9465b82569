#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadevo/detector.hpp"
#include "quadevo/errors.hpp"

using namespace quadevo;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("plane-wave modes") {
    CHECK(std::abs(minkowski_mode(1.0, 0.0, 0.0) - 1.0 / (2 * kPi)) < 1e-16);
    CHECK(std::abs(minkowski_mode(-4.0, 0.0, 0.0) - 1.0 / (4 * kPi)) < 1e-16);
    // right mover: constant along x = t
    CHECK(std::abs(minkowski_mode(2.5, 3.0, 3.0) - minkowski_mode(2.5, 0.0, 0.0)) < 1e-15);
    CHECK(std::abs(minkowski_mode(2.0, 1.0, 0.0) - std::exp(Complex(0, -2.0)) / (2 * kPi * std::sqrt(2.0))) <
          1e-15);
    CHECK_THROWS_AS(minkowski_mode(0.0, 1.0, 1.0), ZeroMomentum);
}

TEST_CASE("packet distributions are orthonormal") {
    const PacketBasisSpec spec;
    CHECK(packet_orthonormality_error(spec) < 1e-12);
    CHECK(std::abs(packet_overlap(2, 3, 2, 3, spec) - 1.0) < 1e-13);
    CHECK(std::abs(packet_overlap(2, 3, 2, -5, spec)) < 1e-13);
    CHECK(packet_overlap(2, 0, 3, 0, spec) == Complex(0.0));
    CHECK(packet_distribution(1, 0, 0.5, spec) == Complex(0.0));
    CHECK(std::abs(packet_distribution(1, 1, 1.25, spec) - Complex(0.0, -1.0)) < 1e-15);

    PacketBasisSpec wide = spec;
    wide.epsilon = 0.25;
    wide.l_min = -3;
    wide.l_max = 3;
    wide.m_max = 5;
    CHECK(packet_orthonormality_error(wide) < 1e-12);
}

TEST_CASE("grid resolution rules") {
    PacketBasisSpec spec;
    CHECK(spec.points_per_bin() >= 20 * spec.max_abs_l());
    CHECK(spec.refined(2).panels() == 2 * spec.panels());
    PacketBasisSpec coarse = spec;
    coarse.panels_per_bin = 1;
    CHECK_THROWS_AS(coarse.validate(), UnresolvedGrid);
    PacketBasisSpec bad = spec;
    bad.m_min = -1;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = spec;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(spec.refined(0), InvalidArgument);

    // A fixed grid that is fine for the bin itself cannot follow the packet far away.
    PacketBasisSpec fixed = spec;
    fixed.panels_per_bin = spec.panels();
    CHECK_NOTHROW(packet_mode(1, 0, 0.0, 0.0, fixed));
    CHECK_THROWS_AS(packet_mode(1, 0, 0.0, 500.0, fixed), UnresolvedGrid);
}

TEST_CASE("packet modes at the origin") {
    const PacketBasisSpec spec;
    // int_m^{m+1} dk / (2 pi sqrt k)
    CHECK(std::abs(packet_mode(1, 0, 0.0, 0.0, spec) - (std::sqrt(2.0) - 1.0) / kPi) < 1e-13);
    CHECK(std::abs(packet_mode(0, 0, 0.0, 0.0, spec) - 1.0 / kPi) < 1e-13);
    CHECK(std::abs(packet_mode(3, 0, 5.0, 5.0, spec) - (2.0 - std::sqrt(3.0)) / kPi) < 1e-13);
    // the l-th packet is centred at x - t = 2 pi l / eps
    CHECK(std::abs(packet_mode(2, 1, 0.0, 2 * kPi, spec) - (std::sqrt(3.0) - std::sqrt(2.0)) / kPi) <
          1e-13);
    CHECK_THROWS_AS(packet_mode(-1, 0, 0.0, 0.0, spec), InvalidArgument);
}

TEST_CASE("time derivative of a packet mode") {
    const PacketBasisSpec spec;
    const double h = 1e-5;
    for (int m : {0, 1, 4}) {
        const Complex fd =
            (packet_mode(m, 2, 1.0 + h, 3.0, spec) - packet_mode(m, 2, 1.0 - h, 3.0, spec)) / (2 * h);
        CHECK(std::abs(packet_mode_dt(m, 2, 1.0, 3.0, spec) - fd) < 1e-8);
    }
}

TEST_CASE("Klein-Gordon products of packets") {
    // With the 1/(2 pi sqrt|k|) plane-wave amplitude the plane waves are
    // normalized to delta(k - k') / pi, so a packet has norm 1/pi. The spatial
    // tails fall off like 1/x, which sets the window truncation error.
    const PacketBasisSpec spec;
    const auto a = packet_mode_function(1, 0, spec);
    const auto b = packet_mode_function(1, 1, spec);
    SpatialGrid narrow{-100.0, 100.0, 400, 8};
    SpatialGrid wide{-400.0, 400.0, 1600, 8};
    const double e_narrow = std::abs(klein_gordon_inner(a, a, 0.0, narrow) - 1.0 / kPi);
    const double e_wide = std::abs(klein_gordon_inner(a, a, 0.0, wide) - 1.0 / kPi);
    CHECK(e_narrow < 5e-3);
    CHECK(e_wide < 0.5 * e_narrow);
    CHECK(std::abs(klein_gordon_inner(a, b, 0.0, wide)) < 5e-3);
    // conserved in time
    CHECK(std::abs(klein_gordon_inner(a, a, 7.0, wide) - klein_gordon_inner(a, a, 0.0, wide)) < 1e-3);
}

TEST_CASE("switching function") {
    const DetectorParams p;
    CHECK(switching_h(0.0, p) == 0.0);
    CHECK(switching_h(20.0, p) == doctest::Approx(400.0 * std::exp(-5.0)).epsilon(1e-14));
    CHECK(switching_h(20.0, p) == doctest::Approx(2.6952).epsilon(1e-4));
    CHECK(switching_h(-3.0, p) == switching_h(3.0, p));
    DetectorParams weak = p;
    weak.lambda_c = 0.5;
    CHECK(switching_h(5.0, weak) == doctest::Approx(0.5 * switching_h(5.0, p)));
}

TEST_CASE("spatial profile and single-mode overlap") {
    const DetectorParams p;
    const PacketBasisSpec spec;
    const double tau = 6.0;
    const double h = switching_h(tau, p);
    // On the light ray xi = tau with L = 0 the kernel is int_1^2 dk / (2 pi sqrt k).
    CHECK(std::abs(spatial_profile(tau, tau, p, spec) - h * (std::sqrt(2.0) - 1.0) / kPi) < 1e-12);
    CHECK(spatial_profile(0.0, 1.0, p, spec) == Complex(0.0));
    auto unit = [](double) { return 1.0; };
    CHECK(std::abs(spatial_profile(tau, tau, p, spec, unit) - (std::sqrt(2.0) - 1.0) / kPi) < 1e-12);

    // int dxi F phi~^* = h int dk / (2 pi k) over the shared bin (times the
    // packet phases), so the distinguished packet gets h ln 2 / (2 pi).
    const SpatialGrid grid{-200.0, 200.0, 800, 8};
    const Complex self = single_mode_overlap(tau, 1, 0, p, spec, grid);
    CHECK(std::abs(self - h * std::log(2.0) / (2 * kPi)) < 5e-3 * h);
    // neighbour in l: |int_1^2 exp(2 pi i k) / k dk| / (2 pi)
    const QuadratureRule rule = composite_gauss_legendre(1.0, 2.0, 40, 8);
    const Complex leak =
        integrate(rule, [](double k) { return std::exp(Complex(0, 2 * kPi * k)) / k; }) / (2 * kPi);
    const Complex next = single_mode_overlap(tau, 1, 1, p, spec, grid);
    CHECK(std::abs(std::abs(next) - h * std::abs(leak)) < 5e-3 * h);
    CHECK(std::abs(single_mode_overlap(tau, 2, 0, p, spec, grid)) < 5e-3 * h);
}

TEST_CASE("frequency distribution of a Gaussian profile") {
    const SpatialProfile g = [](double, double x) { return Complex(std::exp(-0.5 * x * x)); };
    const SpatialGrid grid{-20.0, 20.0, 200, 8};
    for (double k : {0.0, 0.5, 2.0, -3.0}) {
        const Complex want = std::sqrt(2 * kPi) * std::exp(-0.5 * k * k);
        CHECK(std::abs(frequency_distribution(g, 0.0, k, grid) - want) < 1e-12);
    }
    CHECK_THROWS_AS(frequency_distribution(g, 0.0, 100.0, grid), UnresolvedGrid);
    CHECK_THROWS_AS(frequency_distribution({}, 0.0, 1.0, grid), InvalidArgument);
}

TEST_CASE("detector example schedule") {
    const DetectorParams p;
    const auto basis = GeneratorBasis::build(2);
    const auto s = example_schedule(p, basis, 0.0, 80.0);
    const RVector at1 = s(1.0);
    const double h1 = std::exp(-1.0 / 80.0);
    CHECK(at1(basis.index_of(GeneratorClass::two_mode_squeeze_re, 0, 1)) == doctest::Approx(h1));
    CHECK(std::abs(at1(basis.index_of(GeneratorClass::two_mode_squeeze_im, 0, 1))) < 1e-14);
    CHECK(at1(basis.index_of(GeneratorClass::beamsplit_re, 0, 1)) == doctest::Approx(h1));
    CHECK(at1(basis.index_of(GeneratorClass::single_squeeze_re, 0)) == 0.0);
    CHECK(at1(basis.index_of(GeneratorClass::phase, 1)) == 0.0);

    // H = h cos(2 pi tau)(TMS_re + BS_re) + h sin(2 pi tau)(TMS_im + BS_im).
    // In X^dag H X the D_d^dag D_f coefficient is split evenly over the two
    // orderings, so entry (0, 2) is h e^{i 2 pi tau} / 2.
    for (double tau : {1.0, 1.3, 7.9}) {
        const CMatrix hm = hamiltonian_matrix(s, basis, tau);
        const Complex want = 0.5 * switching_h(tau, p) * std::exp(Complex(0, 2 * kPi * tau));
        CHECK(std::abs(hm(0, 2) - want) < 1e-13);
        CHECK(hermiticity_defect(hm) < 1e-15);
        const auto proj = basis.project(hm);
        CHECK((proj.coefficients - s(tau)).norm() < 1e-13);
    }
    for (double tau = 72.0; tau <= 80.0; tau += 0.5) {
        CHECK(s(tau).norm() < 1e-12);
    }
    CHECK_THROWS_AS(example_schedule(p, GeneratorBasis::build(3), 0.0, 1.0), DimensionMismatch);
    DetectorParams bad = p;
    bad.T = 0.0;
    CHECK_THROWS_AS(example_schedule(bad, basis, 0.0, 1.0), InvalidArgument);
}
