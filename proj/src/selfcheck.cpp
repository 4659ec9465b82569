#include "quadevo/selfcheck.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "quadevo/detector.hpp"
#include "quadevo/errors.hpp"
#include "quadevo/gaussian.hpp"
#include "quadevo/integrate.hpp"

namespace quadevo {

namespace {

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << v;
    return s.str();
}

using Check = std::function<std::pair<bool, std::string>()>;

CheckResult timed(const std::string& name, const Check& check) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{name, false, "", 0.0};
    try {
        auto [ok, detail] = check();
        r.passed = ok;
        r.detail = std::move(detail);
    } catch (const ClosureViolation& e) {
        r.detail = std::string("ClosureViolation: ") + e.what() + " (residual " +
                   sci(e.residual()) + ")";
    } catch (const std::exception& e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::pair<bool, std::string> closure_suite(bool corrupt) {
    std::ostringstream detail;
    bool ok = true;
    for (int n = 1; n <= 3; ++n) {
        GeneratorBasis basis = GeneratorBasis::build(n);
        if (corrupt) {
            // A generator whose commutators leave the span: a non-Hermitian
            // perturbation of the first squeezing generator.
            CMatrix bad = basis.matrix(0);
            bad(0, 0) += Complex(0.3, 0.7);
            basis = basis.with_replaced_generator(0, bad);
        }
        const int expected = n * (2 * n + 1);
        ok = ok && basis.size() == expected;
        const auto c = structure_constants(basis);
        const double anti = c.antisymmetry_defect();
        ok = ok && anti < 1e-12;
        detail << "N=" << n << " count " << basis.size() << " residual "
               << sci(c.max_residual()) << " antisym " << sci(anti) << "; ";
    }
    return {ok, detail.str()};
}

DetectorParams detector_params() {
    return DetectorParams{};
}

struct DetectorRun {
    GeneratorBasis basis;
    Trajectory traj;
};

DetectorRun detector_run(double t1, int samples) {
    DetectorRun run{GeneratorBasis::build(2), {}};
    const auto schedule = example_schedule(detector_params(), run.basis, 0.0, t1);
    IntegratorConfig cfg;
    for (int i = 0; i < samples; ++i) {
        cfg.dense_output_times.push_back(t1 * i / (samples - 1));
    }
    run.traj = integrate_decomposition(schedule, run.basis, cfg);
    return run;
}

}  // namespace

SelfcheckLevel parse_selfcheck_level(const std::string& name) {
    if (name == "fast") return SelfcheckLevel::fast;
    if (name == "full") return SelfcheckLevel::full;
    throw InvalidArgument("selfcheck level must be 'fast' or 'full'");
}

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
    const bool full = options.level == SelfcheckLevel::full;
    std::vector<CheckResult> out;

    out.push_back(timed("algebra closure N=1..3",
                        [&] { return closure_suite(options.corrupt_generator); }));

    out.push_back(timed("fault injection is detected", [] {
        try {
            closure_suite(true);
        } catch (const ClosureViolation& e) {
            return std::pair{true, "ClosureViolation raised (residual " + sci(e.residual()) + ")"};
        }
        return std::pair{false, std::string("corrupted basis passed the closure check")};
    }));

    const double span = full ? 80.0 : 10.0;
    const int samples = full ? 1601 : 201;
    std::optional<DetectorRun> run;
    out.push_back(timed("detector example integrates to tau=" + sci(span), [&] {
        run = detector_run(span, samples);
        const auto& d = run->traj.diagnostics;
        return std::pair{true, "steps " + std::to_string(d.accepted_steps) + ", max cond " +
                                   sci(d.max_condition) + ", max residual " +
                                   sci(d.max_residual)};
    }));

    // S is a product of exact exponentials, so any defect is rounding. Its
    // floor is eps ||S||_2^2, which exceeds 1e-9 once ||S|| passes ~2000.
    out.push_back(timed("symplectic drift < max(1e-9, 16 eps ||S||^2)", [&] {
        if (!run) throw Error("no trajectory");
        constexpr double eps = std::numeric_limits<double>::epsilon();
        double worst = 0.0, worst_ratio = 0.0, worst_norm = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < run->traj.times.size(); ++i) {
            const CMatrix s = total_symplectic(run->traj.F_at(i), run->basis);
            const double defect = symplectic_defect(s, run->basis);
            const double norm = Eigen::JacobiSVD<CMatrix>(s).singularValues()(0);
            const double floor = eps * norm * norm;
            ok = ok && (defect < 1e-9 || defect < 16.0 * floor);
            worst = std::max(worst, defect);
            worst_ratio = std::max(worst_ratio, defect / floor);
            worst_norm = std::max(worst_norm, norm);
        }
        return std::pair{ok, "max |S^T Omega S - Omega| = " + sci(worst) + " over " +
                                 std::to_string(run->traj.times.size()) + " samples, max ||S|| = " +
                                 sci(worst_norm) + ", max defect / (eps ||S||^2) = " +
                                 sci(worst_ratio)};
    }));

    out.push_back(timed("cosh-product formula = covariance number", [&] {
        if (!run) throw Error("no trajectory");
        double worst = 0.0;
        const auto vac = vacuum_state(2);
        for (std::size_t i = 0; i < run->traj.times.size(); ++i) {
            const RVector F = run->traj.F_at(i);
            const double cov =
                detector_number(evolve_state(vac, total_symplectic(F, run->basis)), 0);
            worst = std::max(worst, std::abs(number_from_F(F, run->basis) - cov));
        }
        return std::pair{worst < 1e-6, "max difference " + sci(worst)};
    }));

    out.push_back(timed("passive schedules conserve total number", [] {
        const auto basis = GeneratorBasis::build(3);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<std::tuple<int, double, double>> terms;
        for (int j = 0; j < basis.size(); ++j) {
            if (is_passive(basis.label(j).cls)) {
                terms.emplace_back(j, u(rng), 3.0 * u(rng));
            }
        }
        CouplingSchedule s;
        s.size = basis.size();
        s.t0 = 0.0;
        s.t1 = 5.0;
        s.lambda = [terms, n = basis.size()](double t) {
            RVector v = RVector::Zero(n);
            for (const auto& [j, a, w] : terms) v(j) = a * std::cos(w * t);
            return v;
        };
        const auto traj = integrate_decomposition(s, basis, IntegratorConfig{});
        // Squeezed, entangled start so that conservation is not trivially 0 = 0.
        RVector f0 = RVector::Zero(basis.size());
        f0(basis.index_of(GeneratorClass::single_squeeze_re, 0)) = 0.4;
        f0(basis.index_of(GeneratorClass::two_mode_squeeze_im, 1, 2)) = 0.3;
        const auto start = evolve_state(vacuum_state(3), total_symplectic(f0, basis));
        double worst_vac = 0.0, worst_sq = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const CMatrix s_t = total_symplectic(traj.F_at(i), basis);
            worst_vac = std::max(worst_vac, std::abs(total_number(evolve_state(vacuum_state(3), s_t))));
            worst_sq = std::max(worst_sq, std::abs(total_number(evolve_state(start, s_t)) -
                                                   total_number(start)));
        }
        return std::pair{worst_vac < 1e-9 && worst_sq < 1e-9,
                         "ground state " + sci(worst_vac) + ", squeezed start " + sci(worst_sq)};
    }));

    out.push_back(timed("packet orthonormality < 1e-6", [] {
        const double err = packet_orthonormality_error(PacketBasisSpec{});
        return std::pair{err < 1e-6, "max |overlap - delta| = " + sci(err)};
    }));

    out.push_back(timed("decomposition vs extrapolated oracle, tau in [0,2]", [] {
        const auto basis = GeneratorBasis::build(2);
        const auto schedule = example_schedule(detector_params(), basis, 0.0, 2.0);
        const auto traj = integrate_decomposition(schedule, basis, IntegratorConfig{});
        const CMatrix o1 = time_ordered_oracle(schedule, basis, 0.0, 2.0, 1 << 12);
        const CMatrix o2 = time_ordered_oracle(schedule, basis, 0.0, 2.0, 1 << 13);
        const CMatrix extrapolated = (4.0 * o2 - o1) / 3.0;
        const double diff = compare_evolutions(traj, extrapolated, basis);
        return std::pair{diff < 1e-6, "|dS| = " + sci(diff)};
    }));

    if (full) {
        out.push_back(timed("decomposition vs oracle(2^20), tau in [0,30], < 1e-6", [] {
            const auto basis = GeneratorBasis::build(2);
            const auto schedule = example_schedule(detector_params(), basis, 0.0, 30.0);
            const auto traj = integrate_decomposition(schedule, basis, IntegratorConfig{});
            const CMatrix oracle = time_ordered_oracle(schedule, basis, 0.0, 30.0, 1 << 20);
            const double diff = compare_evolutions(traj, oracle, basis);
            return std::pair{diff < 1e-6, "|dS| = " + sci(diff)};
        }));
    }
    return out;
}

void print_report(std::ostream& out, const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(52) << r.name
            << std::right << std::fixed << std::setprecision(2) << std::setw(8) << r.seconds
            << "s  " << r.detail << '\n';
    }
}

int selfcheck_command(const SelfcheckOptions& options, std::ostream& out) {
    const auto results = run_selfcheck(options);
    print_report(out, results);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
        << '\n';
    return failed == 0 ? 0 : 1;
}

}  // namespace quadevo
