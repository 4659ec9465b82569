#pragma once

#include <array>

#include "quadevo/algebra.hpp"

namespace quadevo {

// Zero-mean Gaussian state described by
//   Gamma_ij = <X_i X_j^dag + X_j^dag X_i>,
// which is the identity for the vacuum and has Gamma_{2m,2m} = 2<D_m^dag D_m> + 1.
struct CovarianceState {
    CMatrix gamma;

    int n_modes() const noexcept { return static_cast<int>(gamma.rows() / 2); }
};

CovarianceState vacuum_state(int n_modes);

// Gamma -> S Gamma S^dag for the Heisenberg map X -> S X.
CovarianceState evolve_state(const CovarianceState& initial, const CMatrix& s);

// Values in [-1e-10, 0) are reported as 0.
inline constexpr double kNegativeZeroClamp = 1e-10;

// <D_m^dag D_m> read off the diagonal of Gamma.
double detector_number(const CovarianceState& state, int mode);

double total_number(const CovarianceState& state);

// 1/2 [prod_j cosh(2 F_j) - 1] over the two two-mode squeezing parameters
// between detector and field and the two detector squeezing parameters.
double number_from_F(const std::array<double, 4>& F);

// Picks the four parameters out of a full F vector by generator label.
std::array<double, 4> active_detector_parameters(const RVector& F, const GeneratorBasis& basis,
                                                 int detector_mode = 0, int field_mode = 1);
double number_from_F(const RVector& F, const GeneratorBasis& basis, int detector_mode = 0,
                     int field_mode = 1);

// Field modes related by D = A^* a - B^* a^dag, so that the a-vacuum is
// proportional to exp(-1/2 sum_ij V_ij D_i^dag D_j^dag)|0_D> with V = B^* A^-1.
struct BogoliubovData {
    CMatrix A;
    CMatrix B;
    CMatrix V;
    int p = 0;                // distinguished field mode (0-based)
    double asymmetry = 0.0;   // max |V - V^T| before symmetrization
};

inline constexpr double kBogoliubovTolerance = 1e-8;

// Throws SingularA, NotBogoliubov, DimensionMismatch, IndexOutOfRange.
BogoliubovData build_bogoliubov(const CMatrix& A, const CMatrix& B, int p = 0);

// Second moments of the a-vacuum in the D modes:
//   n_xy = <D_x^dag D_y> = [(1 - V^* V)^-1 V^* V]_xy
//   m_xy = <D_x D_y>     = -[(1 - V V^*)^-1 V]_xy
struct FieldMoments {
    CMatrix n;
    CMatrix m;
};
FieldMoments bogoliubov_moments(const BogoliubovData& bog);

// Detector in its ground state (mode 0) times the a-vacuum of the field
// modes 1..F, as a covariance matrix over (d, d^dag, D_1, D_1^dag, ...).
CovarianceState bogoliubov_state(const BogoliubovData& bog);

// Detector excitation number after S, starting from detector ground state
// and the a-vacuum, keeping only the detector row couplings to d and to
// field mode p:
//   |S_01|^2 + n |S_0s|^2 + (1 + n)|S_0,s+1|^2 + 2 Re(m S_0s S_0,s+1^*)
// with s the annihilator slot of mode p, n = n_pp, m = m_pp.
double number_from_bogoliubov(const CMatrix& s, const BogoliubovData& bog);

}  // namespace quadevo
