#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quadevo {

enum class SelfcheckLevel { fast, full };

SelfcheckLevel parse_selfcheck_level(const std::string& name);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelfcheckOptions {
    SelfcheckLevel level = SelfcheckLevel::fast;
    // Test hook: run the closure suite on a basis with one corrupted generator.
    bool corrupt_generator = false;
};

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options);

void print_report(std::ostream& out, const std::vector<CheckResult>& results);

// 0 when every check passes, 1 otherwise.
int selfcheck_command(const SelfcheckOptions& options, std::ostream& out);

}  // namespace quadevo
