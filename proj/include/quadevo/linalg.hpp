#pragma once

#include <Eigen/Dense>

#include <complex>

namespace quadevo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Hilbert-Schmidt (Frobenius) norm.
inline double hs_norm(const CMatrix& m) { return m.norm(); }

// Hilbert-Schmidt inner product tr(A^dagger B).
inline Complex hs_inner(const CMatrix& a, const CMatrix& b) {
    return (a.adjoint() * b).trace();
}

/// Matrix exponential (Eigen's scaling and squaring Pade, Higham 2005).
/// Throws on non-square or non-finite input.
CMatrix expm(const CMatrix& a);

// max |A - A^dagger|
double hermiticity_defect(const CMatrix& a);

// 2-norm condition number via SVD; +inf for exactly singular input.
double condition_number(const RMatrix& a);

}  // namespace quadevo
