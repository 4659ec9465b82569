#include "quadevo/simulation.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "quadevo/errors.hpp"

namespace quadevo {

namespace {

double evaluate_shape(const ScheduleTerm& term, const DetectorParams& detector, double t) {
    const auto& p = term.parameters;
    if (term.shape == "constant") {
        return p[0];
    }
    if (term.shape == "pulse") {
        const double z = (t - p[1]) / p[2];
        return p[0] * std::exp(-0.5 * z * z);
    }
    if (term.shape == "cosine") {
        return p[0] * std::cos(p[1] * t + p[2]);
    }
    if (term.shape == "switched") {
        return p[0] * switching_h(t, detector) * std::cos(p[1] * t + p[2]);
    }
    throw ConfigError("unknown shape '" + term.shape + "'");
}

std::vector<double> sample_times(const RunConfig& config) {
    std::vector<double> times(static_cast<std::size_t>(config.n_output));
    const double span = config.t1 - config.t0;
    for (int i = 0; i < config.n_output; ++i) {
        times[static_cast<std::size_t>(i)] =
            config.t0 + span * static_cast<double>(i) / (config.n_output - 1);
    }
    times.back() = config.t1;
    return times;
}

BogoliubovData scenario_bogoliubov(const RunConfig& config) {
    CMatrix A(1, 1), B(1, 1);
    A(0, 0) = std::cosh(config.squeeze_r);
    B(0, 0) = -std::sinh(config.squeeze_r) * std::exp(Complex(0.0, config.squeeze_phase));
    return build_bogoliubov(A, B, 0);
}

int basis_modes(const RunConfig& config) {
    return config.scenario == Scenario::custom_schedule ? config.n_modes : 2;
}

}  // namespace

CouplingSchedule build_schedule(const RunConfig& config, const GeneratorBasis& basis) {
    if (config.scenario != Scenario::custom_schedule) {
        return example_schedule(config.detector, basis, config.t0, config.t1);
    }
    std::vector<std::pair<int, ScheduleTerm>> terms;
    for (const auto& term : config.terms) {
        const auto j = basis.find(term.generator.cls, term.generator.mode_a, term.generator.mode_b);
        if (!j) {
            throw ConfigError("no generator " + describe(term.generator) + " for " +
                              std::to_string(basis.n_modes()) + " modes");
        }
        terms.emplace_back(*j, term);
    }
    CouplingSchedule schedule;
    schedule.size = basis.size();
    schedule.t0 = config.t0;
    schedule.t1 = config.t1;
    const DetectorParams detector = config.detector;
    const int n = basis.size();
    schedule.lambda = [terms, detector, n](double t) {
        RVector v = RVector::Zero(n);
        for (const auto& [j, term] : terms) {
            v(j) += evaluate_shape(term, detector, t);
        }
        return v;
    };
    return schedule;
}

RunResult run_simulation(const RunConfig& config) {
    config.validate();
    RunResult result{GeneratorBasis::build(basis_modes(config)), {}, {}, {}, {}, std::nullopt};
    const auto& basis = result.basis;
    const CouplingSchedule schedule = build_schedule(config, basis);

    IntegratorConfig integrator = config.integrator;
    integrator.dense_output_times = sample_times(config);
    result.trajectory = integrate_decomposition(schedule, basis, integrator, config.limits);

    std::optional<BogoliubovData> bog;
    CovarianceState initial = vacuum_state(basis.n_modes());
    if (config.scenario == Scenario::bogoliubov_initial) {
        bog = scenario_bogoliubov(config);
        initial = bogoliubov_state(*bog);
    }

    const auto& traj = result.trajectory;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const RVector F = traj.F_at(i);
        const CMatrix s = total_symplectic(F, basis);
        result.nd_covariance.push_back(detector_number(evolve_state(initial, s), 0));
        if (bog) {
            result.nd_formula.push_back(number_from_bogoliubov(s, *bog));
        } else if (basis.n_modes() >= 2) {
            result.nd_formula.push_back(number_from_F(F, basis));
        } else {
            result.nd_formula.push_back(number_from_F(
                {0.0, 0.0, F(basis.index_of(GeneratorClass::single_squeeze_re, 0)),
                 F(basis.index_of(GeneratorClass::single_squeeze_im, 0))}));
        }
        result.symplectic_defects.push_back(symplectic_defect(s, basis));
    }

    if (config.oracle_enabled) {
        const CMatrix oracle =
            time_ordered_oracle(schedule, basis, config.t0, config.t1, config.oracle_steps);
        result.oracle_discrepancy = compare_evolutions(traj, oracle, basis);
    }
    return result;
}

void write_csv(std::ostream& out, const RunResult& result) {
    const auto& traj = result.trajectory;
    const int n = static_cast<int>(traj.F_samples.cols());
    out << "tau";
    for (int j = 1; j <= n; ++j) {
        out << ",F_" << j;
    }
    out << ",N_d_formula,N_d_covariance\n";
    std::ostringstream row;
    row << std::setprecision(17);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        row.str("");
        row << traj.times[i];
        for (int j = 0; j < n; ++j) {
            row << ',' << traj.F_samples(static_cast<Eigen::Index>(i), j);
        }
        row << ',' << result.nd_formula[i] << ',' << result.nd_covariance[i] << '\n';
        out << row.str();
    }
}

std::string resolve_output_directory(const RunConfig& config) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return config.output_directory;
}

int run_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    RunResult result{GeneratorBasis::build(1), {}, {}, {}, {}, std::nullopt};
    try {
        result = run_simulation(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DecompositionSingular& e) {
        err << "decomposition singular at tau=" << std::setprecision(17) << e.time()
            << " (cond=" << std::setprecision(6) << e.condition() << ")\n";
        return 3;
    } catch (const Error& e) {
        err << "run failed: " << e.what() << '\n';
        return 1;
    }

    namespace fs = std::filesystem;
    const fs::path dir = resolve_output_directory(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path csv = dir / config.csv_name;
    std::ofstream file(csv);
    if (!file) {
        err << "cannot write " << csv.string() << '\n';
        return 1;
    }
    write_csv(file, result);
    file.close();

    const auto& d = result.trajectory.diagnostics;
    out << "scenario        " << to_string(config.scenario) << '\n'
        << "samples         " << result.trajectory.times.size() << '\n'
        << "accepted steps  " << d.accepted_steps << " (rejected " << d.rejected_steps << ")\n"
        << std::setprecision(6) << "max cond(A)     " << d.max_condition << '\n'
        << "max residual    " << d.max_residual << '\n'
        << std::setprecision(17) << "final N_d       " << result.nd_covariance.back() << '\n'
        << "csv             " << csv.string() << '\n';
    if (result.oracle_discrepancy) {
        out << std::setprecision(6) << "oracle |dS|     " << *result.oracle_discrepancy
            << " (threshold " << config.oracle_threshold << ")\n";
        if (!(*result.oracle_discrepancy <= config.oracle_threshold)) {
            err << "oracle mismatch: " << *result.oracle_discrepancy << " > "
                << config.oracle_threshold << '\n';
            return 4;
        }
    }
    return 0;
}

}  // namespace quadevo
