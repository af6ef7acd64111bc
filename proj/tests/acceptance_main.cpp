// Acceptance suite: runs every criterion and prints one pass/fail line each.
// Exit code 0 iff all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "extlab/acceptance.hpp"

int main(int argc, char** argv) {
    unsigned seed = 1;
    unsigned jobs = 2;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) jobs = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only.push_back(std::atoi(argv[++i]));
    }
    std::vector<extlab::CriterionResult> results = extlab::run_acceptance(seed, jobs, only);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
    }
    std::printf("%s: %zu/%zu criteria passed\n", all ? "OK" : "FAILURES",
                static_cast<size_t>(std::count_if(results.begin(), results.end(),
                                                  [](const extlab::CriterionResult& r) { return r.pass; })),
                results.size());
    return all ? 0 : 1;
}
