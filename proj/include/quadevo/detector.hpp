#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "quadevo/quadrature.hpp"
#include "quadevo/weinorman.hpp"

namespace quadevo {

// Discrete wave-packet basis f_ml supported on the momentum bin
// (eps*m, eps*(m+1)), truncated to m in [m_min, m_max], l in [l_min, l_max].
struct PacketBasisSpec {
    double epsilon = 1.0;
    int m_min = 0;
    int m_max = 16;
    int l_min = -8;
    int l_max = 8;
    int gl_order = 8;
    int panels_per_bin = 0;  // 0: smallest count meeting the resolution rule

    int max_abs_l() const;
    int panels() const;
    int points_per_bin() const { return panels() * gl_order; }
    // Throws InvalidArgument on bad ranges and UnresolvedGrid when the
    // momentum grid has fewer than 20 * max|l| points per bin.
    void validate() const;
    PacketBasisSpec refined(int factor) const;
};

struct DetectorParams {
    double delta = 2.0 * std::numbers::pi;  // detector gap
    double lambda_c = 1.0;                  // coupling strength
    double T = std::sqrt(80.0);             // interaction timescale
    int M = 1;                              // distinguished packet
    int L = 0;

    void validate() const;
};

// (1 / (2 pi sqrt|k|)) exp(-i|k|t + ikx). Throws ZeroMomentum for k = 0.
Complex minkowski_mode(double k, double t, double x);

// f_ml(k): eps^-1/2 exp(-2 pi i l k / eps) inside the bin, 0 outside.
Complex packet_distribution(int m, int l, double k, const PacketBasisSpec& spec);

// Momentum-space overlap  int dk f_ml(k) f_m'l'(k)^*  by composite Gauss-Legendre.
Complex packet_overlap(int m, int l, int m2, int l2, const PacketBasisSpec& spec);

// max |overlap - delta| over every pair of the truncated basis.
double packet_orthonormality_error(const PacketBasisSpec& spec);

// phi~_ml(t, x) = int dk f_ml(k) phi_k(t, x) for right movers (m >= 0).
// Throws UnresolvedGrid when the integrand oscillates faster than the grid
// resolves at this (t, x).
Complex packet_mode(int m, int l, double t, double x, const PacketBasisSpec& spec);
Complex packet_mode_dt(int m, int l, double t, double x, const PacketBasisSpec& spec);

struct ModeFunction {
    std::function<Complex(double, double)> value;          // (t, x)
    std::function<Complex(double, double)> time_derivative;
};

ModeFunction packet_mode_function(int m, int l, const PacketBasisSpec& spec);

// Spatial quadrature window for x integrals on a constant-t slice.
struct SpatialGrid {
    double x_min = -100.0;
    double x_max = 100.0;
    int panels = 400;
    int order = 8;
};

// Klein-Gordon product  i int dx (a^* dt b - (dt a)^* b)  on the slice t.
Complex klein_gordon_inner(const ModeFunction& a, const ModeFunction& b, double t,
                           const SpatialGrid& grid);

double switching_h(double tau, const DetectorParams& params);

using SwitchingFunction = std::function<double(double)>;

// F(tau, xi) = h(tau) int dk f_ML(k)^* phi_k(tau, xi)  (inertial, t = tau, x = xi).
Complex spatial_profile(double tau, double xi, const DetectorParams& params,
                        const PacketBasisSpec& spec, const SwitchingFunction& h = {});

// int dxi F(tau, xi) phi~_m'l'(tau, xi)^*
Complex single_mode_overlap(double tau, int m2, int l2, const DetectorParams& params,
                            const PacketBasisSpec& spec, const SpatialGrid& grid,
                            const SwitchingFunction& h = {});

using SpatialProfile = std::function<Complex(double, double)>;

// Ftilde(tau, k) = int dx F(tau, x) exp(-ikx). Throws UnresolvedGrid when a
// panel spans more than half a period of exp(-ikx).
Complex frequency_distribution(const SpatialProfile& profile, double tau, double k,
                               const SpatialGrid& grid);

// Schedule on the canonical two-mode basis (mode 0 = detector d, mode 1 =
// field packet D_ML): h cos(tau Delta) on the two-mode squeezing and beam
// splitter real parts, h sin(tau Delta) on the imaginary parts.
CouplingSchedule example_schedule(const DetectorParams& params, const GeneratorBasis& basis,
                                  double t0, double t1);

}  // namespace quadevo
