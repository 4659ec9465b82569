#include "quadevo/weinorman.hpp"

#include <cmath>
#include <limits>

#include "quadevo/errors.hpp"

namespace quadevo {

RVector CouplingSchedule::operator()(double t) const {
    if (!lambda) {
        throw InvalidArgument("coupling schedule has no coefficient function");
    }
    RVector v = lambda(t);
    if (v.size() != size) {
        throw DimensionMismatch("coupling schedule returned wrong number of coefficients");
    }
    if (!v.allFinite()) {
        throw InvalidArgument("coupling schedule is not finite at t=" + std::to_string(t));
    }
    return v;
}

void CouplingSchedule::validate(const GeneratorBasis& basis) const {
    if (size != basis.size()) {
        throw DimensionMismatch("schedule size " + std::to_string(size) +
                                " does not match basis size " + std::to_string(basis.size()));
    }
    if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw InvalidArgument("schedule time span must satisfy t0 < t1");
    }
    if (!lambda) {
        throw InvalidArgument("coupling schedule has no coefficient function");
    }
}

CMatrix hamiltonian_matrix(const CouplingSchedule& schedule, const GeneratorBasis& basis,
                           double t) {
    return basis.combine(schedule(t));
}

CMatrix factor_matrix(double F, const CMatrix& generator, const CMatrix& kernel) {
    if (!std::isfinite(F)) {
        throw InvalidArgument("factor_matrix: non-finite F");
    }
    if (F == 0.0) {
        return CMatrix::Identity(generator.rows(), generator.cols());
    }
    return expm((-kI * F) * kernel * generator);
}

CMatrix factor_matrix(const GeneratorBasis& basis, int j, double F) {
    return factor_matrix(F, basis.matrix(j), basis.kernel());
}

CMatrix total_symplectic(const RVector& F, const GeneratorBasis& basis) {
    if (F.size() != basis.size()) {
        throw DimensionMismatch("total_symplectic: F has wrong length");
    }
    CMatrix s = CMatrix::Identity(basis.dimension(), basis.dimension());
    for (int j = 0; j < basis.size(); ++j) {
        if (F(j) != 0.0) {
            s = s * factor_matrix(basis, j, F(j));
        }
    }
    return s;
}

double symplectic_defect(const CMatrix& s, const GeneratorBasis& basis) {
    return hs_norm(s.transpose() * basis.omega() * s - basis.omega());
}

double metric_defect(const CMatrix& s, const GeneratorBasis& basis) {
    return hs_norm(s.adjoint() * basis.metric() * s - basis.metric());
}

DecompositionSystem::DecompositionSystem(const GeneratorBasis& basis,
                                         CouplingSchedule schedule,
                                         DecompositionLimits limits)
    : basis_(&basis), schedule_(std::move(schedule)), limits_(limits) {
    schedule_.validate(basis);
}

DecompositionSystem::Coefficients DecompositionSystem::coefficient_matrix(
    const RVector& F) const {
    const auto& basis = *basis_;
    const int n = basis.size();
    if (F.size() != n) {
        throw DimensionMismatch("decomposition state has wrong length");
    }
    Coefficients out;
    out.A.resize(n, n);
    CMatrix prefix = CMatrix::Identity(basis.dimension(), basis.dimension());
    for (int j = 0; j < n; ++j) {
        const CMatrix transformed = prefix.adjoint() * basis.matrix(j) * prefix;
        const auto p = basis.project(transformed);
        const double rel = p.residual / std::max(1.0, hs_norm(transformed));
        out.closure_residual = std::max(out.closure_residual, rel);
        if (rel > limits_.closure_tolerance) {
            throw ClosureViolation("transformed generator " + describe(basis.label(j)) +
                                       " leaves the basis",
                                   rel);
        }
        out.A.col(j) = p.coefficients;
        if (F(j) != 0.0) {
            prefix = factor_matrix(-F(j), basis.matrix(j), basis.kernel()) * prefix;
        }
    }
    return out;
}

RhsEvaluation DecompositionSystem::evaluate(double t, const RVector& F) const {
    const auto coeffs = coefficient_matrix(F);
    const RVector lambda = schedule_(t);

    Eigen::JacobiSVD<RMatrix> svd(coeffs.A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= limits_.condition_limit)) {
        throw DecompositionSingular(t, cond);
    }
    RhsEvaluation out;
    out.Fdot = svd.solve(lambda);
    out.condition = cond;
    out.closure_residual = coeffs.closure_residual;
    return out;
}

double DecompositionSystem::hamiltonian_residual(double t, const RVector& F,
                                                 const RVector& Fdot) const {
    const auto& basis = *basis_;
    CMatrix rebuilt = CMatrix::Zero(basis.dimension(), basis.dimension());
    CMatrix prefix = CMatrix::Identity(basis.dimension(), basis.dimension());
    for (int j = 0; j < basis.size(); ++j) {
        rebuilt += Fdot(j) * (prefix.adjoint() * basis.matrix(j) * prefix);
        if (F(j) != 0.0) {
            prefix = factor_matrix(-F(j), basis.matrix(j), basis.kernel()) * prefix;
        }
    }
    return hs_norm(rebuilt - hamiltonian_matrix(schedule_, basis, t));
}

RVector assemble_rhs(double t, const DecompositionState& state,
                     const CouplingSchedule& schedule, const GeneratorBasis& basis,
                     const DecompositionLimits& limits) {
    return DecompositionSystem(basis, schedule, limits).evaluate(t, state.F).Fdot;
}

}  // namespace quadevo
