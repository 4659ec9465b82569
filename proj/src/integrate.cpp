#include "quadevo/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "quadevo/errors.hpp"

namespace quadevo {

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.2;  // h_new >= h * kMinShrink
constexpr double kMaxGrow = 10.0;

double scaled_rms(const RVector& err, const RVector& y0, const RVector& y1, double atol,
                  double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sk = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = err(i) / sk;
        acc += r * r;
    }
    return err.size() > 0 ? std::sqrt(acc / static_cast<double>(err.size())) : 0.0;
}

}  // namespace

DormandPrince45::DormandPrince45(Rhs rhs, IntegratorConfig config)
    : rhs_(std::move(rhs)), config_(std::move(config)) {
    if (!(config_.rtol > 0.0) || !(config_.atol > 0.0)) {
        throw InvalidArgument("integrator tolerances must be positive");
    }
    if (!(config_.max_step > 0.0)) {
        throw InvalidArgument("max_step must be positive");
    }
}

double DormandPrince45::initial_step(double t0, const RVector& y0, const RVector& f0,
                                     double t1, std::size_t& evaluations) const {
    if (config_.initial_step > 0.0) {
        return std::min(config_.initial_step, t1 - t0);
    }
    // Hairer-Norsett-Wanner starting step heuristic.
    const auto sc = [&](Eigen::Index i) {
        return config_.atol + config_.rtol * std::abs(y0(i));
    };
    double dnf = 0.0, dny = 0.0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        dnf += std::pow(f0(i) / sc(i), 2);
        dny += std::pow(y0(i) / sc(i), 2);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, config_.max_step, t1 - t0});
    const RVector y1 = y0 + h * f0;
    const RVector f1 = rhs_(t0 + h, y1);
    ++evaluations;
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        der2 += std::pow((f1(i) - f0(i)) / sc(i), 2);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, config_.max_step, t1 - t0});
}

DormandPrince45::Result DormandPrince45::integrate(double t0, const RVector& y0, double t1,
                                                   const StepObserver& observer) const {
    if (!(t0 < t1)) {
        throw InvalidArgument("integration span must satisfy t0 < t1");
    }
    const auto& out_times = config_.dense_output_times;
    for (std::size_t i = 0; i < out_times.size(); ++i) {
        if (out_times[i] < t0 || out_times[i] > t1 ||
            (i > 0 && !(out_times[i] > out_times[i - 1]))) {
            throw InvalidArgument("dense output times must be ascending within the span");
        }
    }

    Result res;
    std::size_t next_out = 0;
    const bool dense = !out_times.empty();
    auto emit = [&](double t, const RVector& y) {
        res.times.push_back(t);
        res.states.push_back(y);
    };
    if (!dense) {
        emit(t0, y0);
    } else {
        while (next_out < out_times.size() && out_times[next_out] == t0) {
            emit(t0, y0);
            ++next_out;
        }
    }

    const double min_step = 1e-14 * (t1 - t0);
    double t = t0;
    RVector y = y0;
    RVector k1 = rhs_(t, y);
    ++res.evaluations;
    double h = initial_step(t0, y0, k1, t1, res.evaluations);
    double facold = 1e-4;
    bool last_rejected = false;

    while (t < t1) {
        if (res.accepted + res.rejected >= config_.max_steps) {
            throw Error("integrator exceeded max_steps at t=" + std::to_string(t));
        }
        h = std::min(h, config_.max_step);
        if (t + 1.01 * h >= t1) {
            h = t1 - t;
        }
        if (h < min_step) {
            throw StepSizeUnderflow(t, h);
        }

        const RVector k2 = rhs_(t + c2 * h, y + h * (a21 * k1));
        const RVector k3 = rhs_(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const RVector k4 = rhs_(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const RVector k5 =
            rhs_(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const RVector k6 =
            rhs_(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double t_new = (h == t1 - t) ? t1 : t + h;
        const RVector y_new =
            y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const RVector k7 = rhs_(t_new, y_new);
        res.evaluations += 6;

        const RVector err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = scaled_rms(err_vec, y, y_new, config_.atol, config_.rtol);
        if (!std::isfinite(err)) {
            throw Error("integrator produced a non-finite error estimate at t=" +
                        std::to_string(t));
        }

        const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMinShrink);
            double h_new = h / fac;
            if (last_rejected) {
                h_new = std::min(h_new, h);
            }
            facold = std::max(err, 1e-4);

            if (dense) {
                const RVector ydiff = y_new - y;
                const RVector bspl = h * k1 - ydiff;
                const RVector r4 = ydiff - h * k7 - bspl;
                const RVector r5 =
                    h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next_out < out_times.size() && out_times[next_out] <= t_new) {
                    const double tau = out_times[next_out];
                    if (tau == t_new) {
                        emit(tau, y_new);
                    } else {
                        const double th = (tau - t) / h;
                        const double th1 = 1.0 - th;
                        emit(tau, y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
                    }
                    ++next_out;
                }
            } else {
                emit(t_new, y_new);
            }

            ++res.accepted;
            if (observer) {
                observer(StepRecord{t_new, h, err}, y_new, k7);
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            h = h_new;
            last_rejected = false;
        } else {
            h = h / std::min(1.0 / kMinShrink, fac11 / kSafety);
            ++res.rejected;
            last_rejected = true;
        }
    }
    return res;
}

Trajectory integrate_decomposition(const CouplingSchedule& schedule,
                                   const GeneratorBasis& basis,
                                   const IntegratorConfig& config,
                                   const DecompositionLimits& limits) {
    const DecompositionSystem system(basis, schedule, limits);
    TrajectoryDiagnostics diag;
    auto rhs = [&](double t, const RVector& F) {
        const auto ev = system.evaluate(t, F);
        diag.max_condition = std::max(diag.max_condition, ev.condition);
        diag.max_closure_residual = std::max(diag.max_closure_residual, ev.closure_residual);
        return ev.Fdot;
    };
    auto observer = [&](const StepRecord& step, const RVector& F, const RVector& Fdot) {
        const double r = system.hamiltonian_residual(step.t, F, Fdot);
        diag.step_times.push_back(step.t);
        diag.step_residuals.push_back(r);
        diag.max_residual = std::max(diag.max_residual, r);
    };

    const DormandPrince45 solver(rhs, config);
    const RVector F0 = RVector::Zero(basis.size());
    auto res = solver.integrate(schedule.t0, F0, schedule.t1, observer);

    Trajectory traj;
    traj.times = std::move(res.times);
    traj.F_samples.resize(static_cast<Eigen::Index>(res.states.size()), basis.size());
    for (std::size_t i = 0; i < res.states.size(); ++i) {
        traj.F_samples.row(static_cast<Eigen::Index>(i)) = res.states[i].transpose();
    }
    diag.accepted_steps = res.accepted;
    diag.rejected_steps = res.rejected;
    diag.rhs_evaluations = res.evaluations;
    traj.diagnostics = std::move(diag);
    return traj;
}

double tolerance_halving_change(const CouplingSchedule& schedule,
                                const GeneratorBasis& basis,
                                const IntegratorConfig& config,
                                const DecompositionLimits& limits) {
    IntegratorConfig coarse = config;
    coarse.dense_output_times.clear();
    IntegratorConfig fine = coarse;
    fine.rtol *= 0.5;
    const auto a = integrate_decomposition(schedule, basis, coarse, limits);
    const auto b = integrate_decomposition(schedule, basis, fine, limits);
    return (a.final_F() - b.final_F()).cwiseAbs().maxCoeff();
}

CMatrix time_ordered_oracle(const CouplingSchedule& schedule, const GeneratorBasis& basis,
                            double t0, double t1, std::size_t n_steps) {
    if (n_steps < 1) {
        throw InvalidArgument("oracle needs at least one step");
    }
    if (!(t0 < t1)) {
        throw InvalidArgument("oracle span must satisfy t0 < t1");
    }
    const double dt = (t1 - t0) / static_cast<double>(n_steps);
    const CMatrix scaled_kernel = (-kI * dt) * basis.kernel();
    CMatrix s = CMatrix::Identity(basis.dimension(), basis.dimension());
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double tk = t0 + (static_cast<double>(k) + 0.5) * dt;
        const CMatrix h = hamiltonian_matrix(schedule, basis, tk);
        s = expm(scaled_kernel * h) * s;
    }
    return s;
}

double compare_evolutions(const Trajectory& trajectory, const CMatrix& oracle,
                          const GeneratorBasis& basis) {
    const CMatrix s = total_symplectic(trajectory.final_F(), basis);
    if (s.rows() != oracle.rows() || s.cols() != oracle.cols()) {
        throw DimensionMismatch("compare_evolutions: oracle has wrong shape");
    }
    return hs_norm(s - oracle);
}

}  // namespace quadevo
