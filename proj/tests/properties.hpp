#pragma once

#include <cstdint>
#include <string>

#include "wfreach/decide.hpp"

namespace wfreach::testing {

struct CheckResult {
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void pass() { ++checked; }
    void fail(const std::string& what);
    void expect(bool ok, const std::string& what) { ok ? pass() : fail(what); }
    void merge(const CheckResult& other);
    bool ok() const { return failures == 0; }
};

struct EquivalenceResult {
    CheckResult exact;
    CheckResult cover;
    CheckResult witnesses;
    CheckResult union_agreement;  // divinfo accumulation vs reachability-based union
    std::size_t positives = 0;
};

// Supports of size 1-3 over a random sample of `sample_places` places, plus
// `random_quads` random size-4 supports, in both modes.
EquivalenceResult check_oracle_equivalence(const NetAnalysis& a, const ReachabilityGraph& g,
                                           std::uint64_t seed, std::size_t sample_places = 12,
                                           std::size_t random_quads = 50);

CheckResult check_concurrency_vs_brute(const NetAnalysis& a, const ReachabilityGraph& g);
CheckResult check_postdom_vs_brute(const NetAnalysis& a);
// Path-free target sets only; see the README for the comparison class.
CheckResult check_divpoints_vs_definition(const NetAnalysis& a, std::uint64_t seed,
                                          std::size_t samples);

CheckResult check_path_token_bound(const WorkflowNet& wf, const ReachabilityGraph& g,
                                   std::uint64_t seed);
CheckResult check_safeness(const ReachabilityGraph& g);
CheckResult check_concurrency_laws(const NetAnalysis& a);
CheckResult check_transition_join(const NetAnalysis& a, std::uint64_t seed, std::size_t samples);
CheckResult check_comparable_branches(const NetAnalysis& a, const ReachabilityGraph& g,
                                      std::uint64_t seed, std::size_t samples);
CheckResult check_reachable_are_maximum(const NetAnalysis& a, const ReachabilityGraph& g);

}  // namespace wfreach::testing
