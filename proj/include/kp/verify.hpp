#pragma once

#include <string>
#include <vector>

namespace kp {

struct CheckResult {
    std::string name;
    int criterion = 0;  // acceptance criterion the check belongs to, 0 for module invariants
    bool pass = false;
    std::string measured;
    std::string tolerance;
    double seconds = 0;
};

struct SuiteOptions {
    unsigned seed = 7;
    // compare against the printed fixtures as printed; otherwise logged corrections are applied
    bool strict = false;
    // test hook: corrupt one free-energy fixture coefficient
    bool inject_fault = false;
    bool parallel = true;
    // skip module invariants that belong to no acceptance criterion
    bool criteria_only = false;
};

// every check, ordered by name
std::vector<CheckResult> run_suite(const SuiteOptions& opt);
std::string check_json_line(const CheckResult& r);

}  // namespace kp
