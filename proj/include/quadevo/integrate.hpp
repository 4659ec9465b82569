#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "quadevo/weinorman.hpp"

namespace quadevo {

struct IntegratorConfig {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 selects a starting step automatically
    std::size_t max_steps = 5'000'000;
    // Sample times for dense output. Empty: record every accepted step.
    std::vector<double> dense_output_times;
};

struct StepRecord {
    double t = 0.0;
    double h = 0.0;
    double error = 0.0;  // scaled local error estimate, accepted when <= 1
};

// Embedded Dormand-Prince 5(4) pair with PI step-size control and the
// standard fourth-order continuous extension.
class DormandPrince45 {
public:
    using Rhs = std::function<RVector(double, const RVector&)>;
    // Called after every accepted step with (t, y, y'(t)).
    using StepObserver = std::function<void(const StepRecord&, const RVector&, const RVector&)>;

    DormandPrince45(Rhs rhs, IntegratorConfig config);

    struct Result {
        std::vector<double> times;
        std::vector<RVector> states;
        std::size_t accepted = 0;
        std::size_t rejected = 0;
        std::size_t evaluations = 0;
    };

    Result integrate(double t0, const RVector& y0, double t1,
                     const StepObserver& observer = {}) const;

private:
    double initial_step(double t0, const RVector& y0, const RVector& f0, double t1,
                        std::size_t& evaluations) const;

    Rhs rhs_;
    IntegratorConfig config_;
};

struct TrajectoryDiagnostics {
    std::vector<double> step_times;
    std::vector<double> step_residuals;  // hamiltonian_residual at each accepted step
    double max_residual = 0.0;
    double max_condition = 1.0;
    double max_closure_residual = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
};

struct Trajectory {
    std::vector<double> times;
    RMatrix F_samples;  // rows: sample times, columns: generators
    TrajectoryDiagnostics diagnostics;

    RVector final_F() const { return F_samples.row(F_samples.rows() - 1).transpose(); }
    RVector F_at(std::size_t i) const { return F_samples.row(static_cast<Eigen::Index>(i)).transpose(); }
};

// Integrate Fdot = A(F)^{-1} lambda(t) from F(t0) = 0 over the schedule span.
// Propagates DecompositionSingular / ClosureViolation / StepSizeUnderflow.
Trajectory integrate_decomposition(const CouplingSchedule& schedule,
                                   const GeneratorBasis& basis,
                                   const IntegratorConfig& config,
                                   const DecompositionLimits& limits = {});

// Difference of final F between rtol and rtol/2 runs (max norm).
double tolerance_halving_change(const CouplingSchedule& schedule,
                                const GeneratorBasis& basis,
                                const IntegratorConfig& config,
                                const DecompositionLimits& limits = {});

// Product of midpoint exponentials exp(-i K H(t_k) dt), later times on the
// left. Independent of the decomposition path; second order in dt.
CMatrix time_ordered_oracle(const CouplingSchedule& schedule, const GeneratorBasis& basis,
                            double t0, double t1, std::size_t n_steps);

// ||total_symplectic(F_final) - S_oracle||_HS
double compare_evolutions(const Trajectory& trajectory, const CMatrix& oracle,
                          const GeneratorBasis& basis);

}  // namespace quadevo
