#include "quadevo/detector.hpp"

#include <algorithm>
#include <cmath>

#include "quadevo/errors.hpp"

namespace quadevo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPointsPerCycle = 20;

int ceil_div(double num, int den) {
    return std::max(1, static_cast<int>(std::ceil(num / den)));
}

// Integrate fn(k) over the bin (eps m, eps (m+1)). `cycles` is the number of
// oscillations of the integrand across the bin. For m = 0 the integrable
// 1/sqrt(k) endpoint singularity is removed with k = eps u^2.
template <class Fn>
Complex bin_integral(int m, double cycles, const PacketBasisSpec& spec, Fn&& fn) {
    const double eps = spec.epsilon;
    const bool substitute = (m == 0);
    const double needed = kPointsPerCycle * std::max(1.0, substitute ? 2.0 * cycles : cycles);
    int panels = spec.panels_per_bin;
    if (panels == 0) {
        panels = std::max(spec.panels(), ceil_div(needed, spec.gl_order));
    } else if (panels * spec.gl_order < needed) {
        throw UnresolvedGrid("momentum grid has " + std::to_string(panels * spec.gl_order) +
                             " points per bin, needs " + std::to_string(needed));
    }
    if (substitute) {
        const auto rule = composite_gauss_legendre(0.0, 1.0, panels, spec.gl_order);
        return integrate(rule, [&](double u) -> Complex {
            const double k = eps * u * u;
            return 2.0 * eps * u * fn(k);
        });
    }
    const auto rule = composite_gauss_legendre(eps * m, eps * (m + 1), panels, spec.gl_order);
    return integrate(rule, [&](double k) -> Complex { return fn(k); });
}

void require_right_mover(int m) {
    if (m < 0) {
        throw InvalidArgument("only right-moving packets (m >= 0) are supported");
    }
}

double packet_cycles(double eps, double l_phase, double x_minus_t) {
    // phase(k) = k (x - t) + 2 pi l_phase k / eps, with l_phase = -l for f and +l for f^*
    return std::abs(eps * x_minus_t / (2.0 * kPi) + l_phase);
}

}  // namespace

int PacketBasisSpec::max_abs_l() const {
    return std::max(std::abs(l_min), std::abs(l_max));
}

int PacketBasisSpec::panels() const {
    if (panels_per_bin > 0) {
        return panels_per_bin;
    }
    return ceil_div(kPointsPerCycle * std::max(1, max_abs_l()), gl_order);
}

void PacketBasisSpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("packet bin width epsilon must be positive");
    }
    if (m_min > m_max || l_min > l_max) {
        throw InvalidArgument("packet index ranges must be ordered");
    }
    if (m_min < 0) {
        throw InvalidArgument("only right-moving packets (m >= 0) are supported");
    }
    if (gl_order < 1 || panels_per_bin < 0) {
        throw InvalidArgument("quadrature order and panel count must be positive");
    }
    if (points_per_bin() < kPointsPerCycle * max_abs_l()) {
        throw UnresolvedGrid("momentum grid needs at least " +
                             std::to_string(kPointsPerCycle * max_abs_l()) +
                             " points per bin");
    }
}

PacketBasisSpec PacketBasisSpec::refined(int factor) const {
    if (factor < 1) {
        throw InvalidArgument("refinement factor must be positive");
    }
    PacketBasisSpec out = *this;
    out.panels_per_bin = panels() * factor;
    return out;
}

void DetectorParams::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw InvalidArgument("interaction timescale T must be positive");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("detector gap must be non-negative");
    }
    if (!std::isfinite(lambda_c)) {
        throw InvalidArgument("coupling strength must be finite");
    }
    require_right_mover(M);
}

Complex minkowski_mode(double k, double t, double x) {
    if (k == 0.0) {
        throw ZeroMomentum("plane-wave mode undefined at k = 0");
    }
    const double ak = std::abs(k);
    return std::exp(Complex(0.0, -ak * t + k * x)) / (2.0 * kPi * std::sqrt(ak));
}

Complex packet_distribution(int m, int l, double k, const PacketBasisSpec& spec) {
    const double eps = spec.epsilon;
    if (!(k > eps * m && k < eps * (m + 1))) {
        return 0.0;
    }
    return std::exp(Complex(0.0, -2.0 * kPi * l * k / eps)) / std::sqrt(eps);
}

Complex packet_overlap(int m, int l, int m2, int l2, const PacketBasisSpec& spec) {
    spec.validate();
    const double cycles = std::abs(l - l2);
    auto integrand = [&](double k) {
        return packet_distribution(m, l, k, spec) * std::conj(packet_distribution(m2, l2, k, spec));
    };
    // Integrate over the support of each factor; the product vanishes off the
    // intersection, so separate bins give an exact zero.
    const auto rule = composite_gauss_legendre(
        spec.epsilon * m, spec.epsilon * (m + 1),
        std::max(spec.panels(), ceil_div(kPointsPerCycle * std::max(1.0, cycles), spec.gl_order)),
        spec.gl_order);
    Complex acc = integrate(rule, integrand);
    if (m2 != m) {
        const auto rule2 = composite_gauss_legendre(spec.epsilon * m2, spec.epsilon * (m2 + 1),
                                                    spec.panels(), spec.gl_order);
        acc += integrate(rule2, integrand);
    }
    return acc;
}

double packet_orthonormality_error(const PacketBasisSpec& spec) {
    spec.validate();
    double worst = 0.0;
    for (int m = spec.m_min; m <= spec.m_max; ++m) {
        for (int m2 = m; m2 <= std::min(spec.m_max, m + 1); ++m2) {
            for (int l = spec.l_min; l <= spec.l_max; ++l) {
                for (int l2 = spec.l_min; l2 <= spec.l_max; ++l2) {
                    const double target = (m == m2 && l == l2) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(packet_overlap(m, l, m2, l2, spec) - target));
                }
            }
        }
    }
    return worst;
}

Complex packet_mode(int m, int l, double t, double x, const PacketBasisSpec& spec) {
    require_right_mover(m);
    const double cycles = packet_cycles(spec.epsilon, -l, x - t);
    return bin_integral(m, cycles, spec, [&](double k) {
        return packet_distribution(m, l, k, spec) * minkowski_mode(k, t, x);
    });
}

Complex packet_mode_dt(int m, int l, double t, double x, const PacketBasisSpec& spec) {
    require_right_mover(m);
    const double cycles = packet_cycles(spec.epsilon, -l, x - t);
    return bin_integral(m, cycles, spec, [&](double k) {
        return packet_distribution(m, l, k, spec) * Complex(0.0, -k) * minkowski_mode(k, t, x);
    });
}

ModeFunction packet_mode_function(int m, int l, const PacketBasisSpec& spec) {
    require_right_mover(m);
    return {[=](double t, double x) { return packet_mode(m, l, t, x, spec); },
            [=](double t, double x) { return packet_mode_dt(m, l, t, x, spec); }};
}

Complex klein_gordon_inner(const ModeFunction& a, const ModeFunction& b, double t,
                           const SpatialGrid& grid) {
    const auto rule = composite_gauss_legendre(grid.x_min, grid.x_max, grid.panels, grid.order);
    return Complex(0.0, 1.0) * integrate(rule, [&](double x) {
               return std::conj(a.value(t, x)) * b.time_derivative(t, x) -
                      std::conj(a.time_derivative(t, x)) * b.value(t, x);
           });
}

double switching_h(double tau, const DetectorParams& params) {
    return params.lambda_c * tau * tau * std::exp(-tau * tau / (params.T * params.T));
}

Complex spatial_profile(double tau, double xi, const DetectorParams& params,
                        const PacketBasisSpec& spec, const SwitchingFunction& h) {
    params.validate();
    const double amplitude = h ? h(tau) : switching_h(tau, params);
    if (amplitude == 0.0) {
        return 0.0;
    }
    const double cycles = packet_cycles(spec.epsilon, params.L, xi - tau);
    const Complex kernel = bin_integral(params.M, cycles, spec, [&](double k) {
        return std::conj(packet_distribution(params.M, params.L, k, spec)) * minkowski_mode(k, tau, xi);
    });
    return amplitude * kernel;
}

Complex single_mode_overlap(double tau, int m2, int l2, const DetectorParams& params,
                            const PacketBasisSpec& spec, const SpatialGrid& grid,
                            const SwitchingFunction& h) {
    const auto rule = composite_gauss_legendre(grid.x_min, grid.x_max, grid.panels, grid.order);
    return integrate(rule, [&](double xi) {
        return spatial_profile(tau, xi, params, spec, h) *
               std::conj(packet_mode(m2, l2, tau, xi, spec));
    });
}

Complex frequency_distribution(const SpatialProfile& profile, double tau, double k,
                               const SpatialGrid& grid) {
    if (!profile) {
        throw InvalidArgument("frequency_distribution needs a profile");
    }
    if (!(grid.x_min < grid.x_max) || grid.panels < 1 || grid.order < 1) {
        throw InvalidArgument("invalid spatial grid");
    }
    const double width = (grid.x_max - grid.x_min) / grid.panels;
    if (std::abs(k) * width > kPi) {
        throw UnresolvedGrid("spatial panels too wide for exp(-ikx) at k=" + std::to_string(k));
    }
    const auto rule = composite_gauss_legendre(grid.x_min, grid.x_max, grid.panels, grid.order);
    return integrate(rule, [&](double x) {
        return profile(tau, x) * std::exp(Complex(0.0, -k * x));
    });
}

CouplingSchedule example_schedule(const DetectorParams& params, const GeneratorBasis& basis,
                                  double t0, double t1) {
    params.validate();
    if (basis.n_modes() != 2) {
        throw DimensionMismatch("the detector example needs a two-mode basis");
    }
    const int tms_re = basis.index_of(GeneratorClass::two_mode_squeeze_re, 0, 1);
    const int tms_im = basis.index_of(GeneratorClass::two_mode_squeeze_im, 0, 1);
    const int bs_re = basis.index_of(GeneratorClass::beamsplit_re, 0, 1);
    const int bs_im = basis.index_of(GeneratorClass::beamsplit_im, 0, 1);
    const int n = basis.size();
    CouplingSchedule schedule;
    schedule.size = n;
    schedule.t0 = t0;
    schedule.t1 = t1;
    schedule.lambda = [=](double tau) {
        RVector v = RVector::Zero(n);
        const double h = switching_h(tau, params);
        const double c = h * std::cos(tau * params.delta);
        const double s = h * std::sin(tau * params.delta);
        v(tms_re) = c;
        v(tms_im) = s;
        v(bs_re) = c;
        v(bs_im) = s;
        return v;
    };
    schedule.validate(basis);
    return schedule;
}

}  // namespace quadevo
