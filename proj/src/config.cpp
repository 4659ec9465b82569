#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "quadevo/errors.hpp"
#include "quadevo/simulation.hpp"

namespace quadevo {

namespace pt = boost::property_tree;

namespace {

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
    // get(key, fallback) would silently return the fallback on unparsable text
    if (!tree.get_child_optional(key)) {
        return fallback;
    }
    try {
        return tree.get<T>(key);
    } catch (const pt::ptree_bad_data& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

GeneratorClass parse_class(const std::string& name) {
    for (auto c : {GeneratorClass::phase, GeneratorClass::single_squeeze_re,
                   GeneratorClass::single_squeeze_im, GeneratorClass::beamsplit_re,
                   GeneratorClass::beamsplit_im, GeneratorClass::two_mode_squeeze_re,
                   GeneratorClass::two_mode_squeeze_im}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown generator class '" + name + "'");
}

// "<class> <mode_a> [<mode_b>] : <shape> <p1> <p2> ...", modes 1-based
ScheduleTerm parse_term(const std::string& key, const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(key + ": expected '<generator> <modes> : <shape> <params>'");
    }
    std::istringstream lhs(text.substr(0, colon));
    std::istringstream rhs(text.substr(colon + 1));
    std::string cls;
    lhs >> cls;
    ScheduleTerm term;
    term.generator.cls = parse_class(cls);
    term.generator.mode_b = -1;
    if (!(lhs >> term.generator.mode_a)) {
        throw ConfigError(key + ": missing mode index");
    }
    const bool two_mode = term.generator.cls == GeneratorClass::beamsplit_re ||
                          term.generator.cls == GeneratorClass::beamsplit_im ||
                          term.generator.cls == GeneratorClass::two_mode_squeeze_re ||
                          term.generator.cls == GeneratorClass::two_mode_squeeze_im;
    if (two_mode && !(lhs >> term.generator.mode_b)) {
        throw ConfigError(key + ": two-mode generator needs two mode indices");
    }
    // Modes are numbered from 1 in config files.
    term.generator.mode_a -= 1;
    if (two_mode) {
        term.generator.mode_b -= 1;
    }
    if (term.generator.mode_a < 0 || (two_mode && term.generator.mode_b < 0)) {
        throw ConfigError(key + ": mode indices start at 1");
    }
    rhs >> term.shape;
    double v = 0.0;
    while (rhs >> v) {
        term.parameters.push_back(v);
    }
    if (!rhs.eof()) {
        throw ConfigError(key + ": could not parse shape parameters");
    }
    const std::size_t want = term.shape == "constant" ? 1
                             : (term.shape == "pulse" || term.shape == "cosine" ||
                                term.shape == "switched")
                                 ? 3
                                 : 0;
    if (want == 0) {
        throw ConfigError(key + ": unknown shape '" + term.shape + "'");
    }
    if (term.parameters.size() != want) {
        throw ConfigError(key + ": shape '" + term.shape + "' takes " + std::to_string(want) +
                          " parameters");
    }
    return term;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
    if (name == "detector_example") return Scenario::detector_example;
    if (name == "custom_schedule") return Scenario::custom_schedule;
    if (name == "bogoliubov_initial") return Scenario::bogoliubov_initial;
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::detector_example: return "detector_example";
        case Scenario::custom_schedule: return "custom_schedule";
        case Scenario::bogoliubov_initial: return "bogoliubov_initial";
    }
    return "?";
}

void RunConfig::validate() const {
    if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw ConfigError("time span must satisfy t0 < t1");
    }
    if (n_output < 2) {
        throw ConfigError("n_output must be at least 2");
    }
    if (!(integrator.rtol > 0.0) || !(integrator.atol > 0.0)) {
        throw ConfigError("rtol and atol must be positive");
    }
    if (!(integrator.max_step > 0.0)) {
        throw ConfigError("max_step must be positive");
    }
    if (!(limits.condition_limit > 1.0)) {
        throw ConfigError("condition_limit must exceed 1");
    }
    if (oracle_enabled && (oracle_steps < 1 || !(oracle_threshold > 0.0))) {
        throw ConfigError("oracle needs n_steps >= 1 and a positive threshold");
    }
    try {
        detector.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (scenario == Scenario::custom_schedule) {
        if (n_modes < 1) {
            throw ConfigError("custom schedule needs n_modes >= 1");
        }
        if (terms.empty()) {
            throw ConfigError("custom schedule has no terms");
        }
    }
    if (scenario == Scenario::bogoliubov_initial && !(squeeze_r >= 0.0)) {
        throw ConfigError("squeeze_r must be non-negative");
    }
    if (csv_name.empty()) {
        throw ConfigError("output csv name is empty");
    }
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }

    RunConfig c;
    c.scenario = parse_scenario(get<std::string>(tree, "scenario.type", "detector_example"));

    c.detector.lambda_c = get(tree, "detector.lambda", c.detector.lambda_c);
    const double t_squared = get(tree, "detector.T_squared", c.detector.T * c.detector.T);
    if (!(t_squared > 0.0)) {
        throw ConfigError("detector.T_squared must be positive");
    }
    c.detector.T = std::sqrt(t_squared);
    c.detector.delta = get(tree, "detector.delta", c.detector.delta);
    c.detector.M = get(tree, "detector.M", c.detector.M);
    c.detector.L = get(tree, "detector.L", c.detector.L);

    c.t0 = get(tree, "time.t0", c.t0);
    c.t1 = get(tree, "time.t1", c.t1);
    c.n_output = get(tree, "time.n_output", c.n_output);

    c.integrator.rtol = get(tree, "integrator.rtol", c.integrator.rtol);
    c.integrator.atol = get(tree, "integrator.atol", c.integrator.atol);
    const double max_step = get(tree, "integrator.max_step", 0.0);
    if (max_step > 0.0) {
        c.integrator.max_step = max_step;
    } else if (max_step < 0.0) {
        throw ConfigError("integrator.max_step must be positive (0 for unlimited)");
    }
    c.limits.condition_limit = get(tree, "integrator.condition_limit", c.limits.condition_limit);

    c.oracle_enabled = get(tree, "oracle.enabled", c.oracle_enabled);
    const long steps = get(tree, "oracle.n_steps", static_cast<long>(c.oracle_steps));
    if (steps < 1) {
        throw ConfigError("oracle.n_steps must be positive");
    }
    c.oracle_steps = static_cast<std::size_t>(steps);
    c.oracle_threshold = get(tree, "oracle.threshold", c.oracle_threshold);

    c.output_directory = get(tree, "output.directory", c.output_directory);
    c.csv_name = get(tree, "output.csv", c.csv_name);

    if (c.scenario == Scenario::custom_schedule) {
        c.n_modes = get(tree, "custom.n_modes", c.n_modes);
        if (auto custom = tree.get_child_optional("custom")) {
            for (const auto& [key, value] : *custom) {
                if (key.rfind("term", 0) == 0) {
                    c.terms.push_back(parse_term(key, value.get_value<std::string>()));
                }
            }
        }
    }
    if (c.scenario == Scenario::bogoliubov_initial) {
        c.squeeze_r = get(tree, "bogoliubov.squeeze_r", c.squeeze_r);
        c.squeeze_phase = get(tree, "bogoliubov.phase", c.squeeze_phase);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

}  // namespace quadevo
