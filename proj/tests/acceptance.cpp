#include <cstdio>
#include <map>
#include <string>

#include "kp/verify.hpp"

using namespace kp;

int main() {
    struct Criterion {
        const char* title;
        double budget;
    };
    const std::map<int, Criterion> crit = {
        {1, {"free-energy table through weight 9/2", 60}},
        {2, {"k = 0 reduction", 5}},
        {3, {"moment tables", 30}},
        {4, {"replica checkpoints", 10}},
        {5, {"one- and two-point correlators", 30}},
        {6, {"six-term check", 10}},
        {7, {"large-N identities", 10}},
        {8, {"saddle numerics", 30}},
        {9, {"Virasoro structure", 120}},
        {10, {"eigenvalue derivative operators", 30}},
        {11, {"numeric asymptotics", 60}},
    };
    SuiteOptions opt;
    opt.strict = true;
    opt.parallel = false;
    opt.criteria_only = true;
    auto res = run_suite(opt);

    int failed = 0;
    for (auto& [n, c] : crit) {
        bool pass = true;
        double secs = 0;
        std::string detail;
        for (auto& r : res) {
            if (r.criterion != n) continue;
            pass = pass && r.pass;
            secs += r.seconds;
            if (!r.pass) detail += " | " + r.name + ": " + r.measured + " (tolerance " + r.tolerance + ")";
        }
        if (secs > c.budget) {
            pass = false;
            detail += " | over time budget";
        }
        failed += !pass;
        std::printf("criterion %2d %s  %-36s %7.2fs / %.0fs%s\n", n, pass ? "PASS" : "FAIL", c.title, secs, c.budget,
                    detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, crit.size());
    return failed ? 1 : 0;
}
