#pragma once

#include <map>

#include "wfreach/net.hpp"
#include "wfreach/postdom.hpp"

namespace wfreach {

enum class WorklistMode { change_gated, literal };

struct DivergeData {
    NodeSet points;                      // after pruning
    NodeSet candidates;                  // before pruning
    std::map<NodeId, NodeSet> divinfo;   // marked places below each candidate
    std::map<NodeId, NodeSet> reaches;   // surviving points, pruned members spliced out
    std::map<NodeId, NodeSet> raw_reaches;
    std::size_t dequeues = 0;
};

// Requires at least two marked places.
DivergeData compute_diverging_points(const PetriNet& net, const PostDomData& pd,
                                     const NodeSet& marked,
                                     WorklistMode mode = WorklistMode::change_gated);

}  // namespace wfreach
