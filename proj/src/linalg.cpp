#include "quadevo/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <limits>

#include "quadevo/errors.hpp"

namespace quadevo {

DecompositionSingular::DecompositionSingular(double t, double condition)
    : Error("product decomposition singular at t=" + std::to_string(t) +
            " (cond=" + std::to_string(condition) + ")"),
      t_(t),
      condition_(condition) {}

StepSizeUnderflow::StepSizeUnderflow(double t, double step)
    : Error("step size underflow at t=" + std::to_string(t) +
            " (h=" + std::to_string(step) + ")"),
      t_(t),
      step_(step) {}

CMatrix expm(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("expm: matrix must be square");
    }
    if (!a.allFinite()) {
        throw InvalidArgument("expm: non-finite entries");
    }
    return a.exp();
}

double hermiticity_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double condition_number(const RMatrix& a) {
    Eigen::JacobiSVD<RMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0) {
        return 1.0;
    }
    const double smin = s(s.size() - 1);
    if (smin == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

}  // namespace quadevo
