#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "wfreach/concurrency.hpp"
#include "wfreach/net.hpp"

namespace wfreach {

inline constexpr std::size_t default_state_cap = 1'000'000;

// WFREACH_CAP if set and positive, else the default.
std::size_t state_cap_from_env();

std::vector<NodeId> enabled(const PetriNet& net, const Marking& m);
Marking fire(const PetriNet& net, const Marking& m, NodeId t);

struct ReachabilityGraph {
    std::vector<Marking> states;
    std::vector<NodeSet> supports;
    std::vector<std::tuple<std::uint32_t, NodeId, std::uint32_t>> edges;
    std::uint32_t initial = 0;

    bool safe() const;
};

ReachabilityGraph explore(const PetriNet& net, const Marking& initial, std::size_t cap);
ReachabilityGraph explore(const WorkflowNet& wf, std::size_t cap);

struct SoundnessResult {
    bool sound = false;
    int violated_clause = 0;  // 1 completion, 2 proper completion, 3 dead transition
    std::string detail;
    std::optional<Marking> counterexample_state;
    std::optional<NodeId> dead_transition;
    std::size_t states = 0;
    bool safe = false;
};

SoundnessResult check_soundness(const WorkflowNet& wf, std::size_t cap);
SoundnessResult check_soundness(const WorkflowNet& wf, const ReachabilityGraph& g);

ConcurrencyRelation brute_concurrency(const PetriNet& net, const ReachabilityGraph& g);
bool brute_reachable(const ReachabilityGraph& g, const Marking& m);
bool brute_coverable(const ReachabilityGraph& g, const Marking& m);
std::optional<std::vector<NodeId>> brute_firing_sequence(const PetriNet& net,
                                                         const ReachabilityGraph& g,
                                                         const Marking& m, bool cover);

struct BrutePostDom {
    std::vector<NodeSet> dominators;  // dominators[x] = nodes on every path x ->* sink
    std::vector<std::int64_t> ipdom;
    std::vector<NodeSet> frontier;
};

BrutePostDom brute_postdom(const PetriNet& net, NodeId sink);

// Nodes with two outputs that start disjoint paths to two distinct members of targets.
NodeSet brute_divpoints(const PetriNet& net, const NodeSet& targets);
// Members of targets reachable from some output of node.
NodeSet brute_divinfo(const PetriNet& net, NodeId node, const NodeSet& targets);

struct GeneratorParams {
    std::size_t min_places = 10;
    std::size_t max_places = 40;
    std::size_t max_depth = 6;
    std::size_t and_width = 3;
    std::size_t xor_width = 3;
    bool free_form_regions = true;  // multi-lane choices and unnested concurrent regions
};

WorkflowNet generate_sound_afw(std::uint64_t seed, const GeneratorParams& params = {});

struct PathToEndResult {
    bool holds = true;
    std::size_t paths_checked = 0;
    std::optional<std::vector<NodeId>> violating_path;
    std::optional<Marking> violating_state;
};

PathToEndResult verify_path_to_end(const WorkflowNet& wf, const ReachabilityGraph& g,
                                   std::size_t samples, std::uint64_t seed);

// Random walk from node along outputs until a node without outputs.
std::vector<NodeId> random_path(const PetriNet& net, NodeId from, std::mt19937_64& rng);

}  // namespace wfreach
