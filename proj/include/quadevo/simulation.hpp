#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quadevo/detector.hpp"
#include "quadevo/gaussian.hpp"
#include "quadevo/integrate.hpp"

namespace quadevo {

enum class Scenario { detector_example, custom_schedule, bogoliubov_initial };

Scenario parse_scenario(const std::string& name);
std::string_view to_string(Scenario s);

// One term lambda(t) G of a custom schedule. Shapes:
//   constant a
//   pulse    a t_c sigma   a exp(-(t - t_c)^2 / (2 sigma^2))
//   cosine   a omega phi   a cos(omega t + phi)
//   switched a omega phi   h(t) cos(omega t + phi) with the detector switching h
struct ScheduleTerm {
    GeneratorLabel generator;
    std::string shape;
    std::vector<double> parameters;
};

struct RunConfig {
    Scenario scenario = Scenario::detector_example;
    DetectorParams detector;
    int n_modes = 2;                    // custom_schedule only
    std::vector<ScheduleTerm> terms;    // custom_schedule only
    double squeeze_r = 0.0;             // bogoliubov_initial only
    double squeeze_phase = 0.0;
    IntegratorConfig integrator;
    DecompositionLimits limits;
    double t0 = 0.0;
    double t1 = 80.0;
    int n_output = 1601;
    bool oracle_enabled = false;
    std::size_t oracle_steps = std::size_t{1} << 20;
    double oracle_threshold = 1e-6;
    std::string output_directory = "output";
    std::string csv_name = "run.csv";

    void validate() const;  // throws ConfigError
};

// Environment variable that replaces [output] directory when set.
inline constexpr const char* kOutputDirEnv = "QUADEVO_OUTPUT_DIR";

// INI file with sections [scenario] [detector] [time] [integrator] [oracle]
// [output] and, for custom schedules, [custom]. Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in);

struct RunResult {
    GeneratorBasis basis;
    Trajectory trajectory;
    std::vector<double> nd_formula;
    std::vector<double> nd_covariance;
    std::vector<double> symplectic_defects;
    std::optional<double> oracle_discrepancy;
};

CouplingSchedule build_schedule(const RunConfig& config, const GeneratorBasis& basis);

// Integrates, evaluates the detector number by both routes at every output
// sample and, when enabled, compares with the time-ordered oracle.
RunResult run_simulation(const RunConfig& config);

// Header: tau,F_1,...,F_n,N_d_formula,N_d_covariance; 17 significant digits.
void write_csv(std::ostream& out, const RunResult& result);

std::string resolve_output_directory(const RunConfig& config);

// CLI entry point. Exit codes: 0 ok, 1 other failure, 2 config error,
// 3 decomposition singular, 4 oracle mismatch.
int run_command(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace quadevo
