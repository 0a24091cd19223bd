#pragma once

#include <cstdint>
#include <vector>

#include "wfreach/net.hpp"
#include "wfreach/structure.hpp"

namespace wfreach {

inline constexpr std::int64_t no_ipdom = -1;

struct PostDomData {
    std::vector<std::int64_t> ipdom;   // no_ipdom when undefined
    std::vector<NodeSet> frontier;
    std::size_t passes = 0;

    NodeId ipdom_of(NodeId n) const;
    bool has_ipdom(NodeId n) const { return ipdom[n.index] != no_ipdom; }
    // a post-dominates b (reflexive)
    bool post_dominates(NodeId a, NodeId b) const;
};

// shuffle_seed != 0 picks the starting output pseudo-randomly instead of by smallest index.
std::vector<std::int64_t> compute_immediate_post_dominators(const PetriNet& net,
                                                            const TopoOrder& topo,
                                                            std::uint64_t shuffle_seed = 0,
                                                            std::size_t* passes = nullptr);

NodeId com_imm_post_dom(const std::vector<std::int64_t>& ipdom, const TopoOrder& topo, NodeId a,
                        NodeId b);

std::vector<NodeSet> post_dominance_frontier(const PetriNet& net,
                                             const std::vector<std::int64_t>& ipdom);

PostDomData compute_post_dominance(const PetriNet& net, const TopoOrder& topo);

// Least fixpoint of D' = frontier(D + D'), over the net with an extra source->sink edge.
NodeSet iterated_pdf(const PetriNet& net, const PostDomData& pd, NodeId source, NodeId sink,
                     const NodeSet& nodes);

}  // namespace wfreach
