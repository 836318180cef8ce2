// Acceptance suite: runs every registered check at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all criteria pass.
#include <cstdio>
#include <map>

#include "ybx/suite.hpp"

using namespace ybx;

namespace {

// wall-clock budgets (seconds) where a criterion states one
const std::map<int, double> kRuntimeBudget = {{1, 30.0}, {3, 60.0}, {9, 300.0}, {14, 600.0}};

const std::map<int, const char*> kCriterionTitle = {
    {1, "rational three-route equality (exact)"},
    {2, "rational printed-instance conformance (exact)"},
    {3, "rational Yang-Baxter equation (exact zero)"},
    {4, "sl2 invariance of the restricted operator (exact)"},
    {5, "generating identity numeric check (< 1e-10)"},
    {6, "q-binomial (< 1e-12) and D-function relations (< 1e-11)"},
    {7, "printed M matrices after the u + m omega' shift (< 1e-10)"},
    {8, "dbar symmetry (< 1e-12) and d_jk product oracle (< 1e-10)"},
    {9, "trig route equality (< 1e-11) and YBE (< 1e-8)"},
    {10, "elliptic special-function identities (< 1e-10 / 1e-12)"},
    {11, "Sklyanin commutation relations (< 1e-8)"},
    {12, "intertwiner branch independence and printed D, V (< 1e-9)"},
    {13, "elliptic route equality, scalar-normalized (< 1e-8)"},
    {14, "elliptic Yang-Baxter equation (< 1e-7)"},
};

}  // namespace

int main(int argc, char** argv) {
    SuiteConfig cfg;
    if (const char* env = std::getenv("YBX_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);

    std::printf("acceptance suite (seed %llu)\n", (unsigned long long)cfg.seed);
    bool all_ok = true;
    for (const auto& def : all_checks()) {
        if (def.criterion == 0) continue;
        ResidualReport rep = def.fn(cfg);
        double secs = rep.runtime_ms / 1000.0;
        bool ok = rep.passed;
        auto budget = kRuntimeBudget.find(def.criterion);
        bool in_budget = budget == kRuntimeBudget.end() || secs < budget->second;
        ok = ok && in_budget;
        all_ok = all_ok && ok;
        std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", def.criterion,
                    kCriterionTitle.at(def.criterion));
        std::printf("         check %-34s residual %-11.3e %s runtime %.2fs%s\n",
                    def.name.c_str(), rep.relative,
                    rep.exact_zero ? "(exact zero)" : "            ", secs,
                    in_budget ? "" : "  ** over budget **");
    }
    std::printf("%s\n", all_ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return all_ok ? 0 : 1;
}
