#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfreach/net.hpp"
#include "wfreach/structure.hpp"

namespace wfreach {

// conc[x] = nodes concurrent to x. Symmetric, irreflexive.
using ConcurrencyRelation = std::vector<NodeSet>;

ConcurrencyRelation determine_concurrency(const PetriNet& net, const ReachSets& reach);

enum class Admissibility { maximum_admissible, admissible, not_admissible };

const char* admissibility_name(Admissibility a);

struct AdmissibilityResult {
    Admissibility verdict = Admissibility::not_admissible;
    NodeSet candidates;   // places compatible with every marked place
    NodeSet missing;      // candidates \ supp
    NodeSet conflicting;  // supp \ candidates, plus places holding >= 2 tokens
    NodeSet unsafe;       // places holding >= 2 tokens
};

AdmissibilityResult check_admissibility(const PetriNet& net, const ConcurrencyRelation& conc,
                                        const Marking& m);

enum class ConflictKind { forward_path, backward_path, exclusive };

const char* conflict_kind_name(ConflictKind k);

struct ConflictExplanation {
    ConflictKind kind = ConflictKind::forward_path;
    NodeId x;
    NodeId y;
    std::vector<NodeId> path;                 // forward/backward: the connecting path
    std::optional<NodeId> decision_place;     // exclusive only
    std::vector<NodeId> path_to_x, path_to_y; // exclusive only
};

class NetAnalysis;

ConflictExplanation classify_conflict(const NetAnalysis& a, NodeId x, NodeId y);

}  // namespace wfreach
