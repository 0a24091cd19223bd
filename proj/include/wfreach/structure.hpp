#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfreach/net.hpp"

namespace wfreach {

struct Violation {
    std::string code;
    std::string message;
    std::vector<NodeId> nodes;
    bool blocking = true;
};

struct StructureReport {
    bool is_workflow = false;
    bool is_acyclic = false;
    bool is_extended_free_choice = false;
    bool is_simple_free_choice = false;
    std::vector<Violation> violations;
    std::vector<NodeId> cycle;

    bool analyzable() const { return is_workflow && is_acyclic && is_extended_free_choice; }
};

class StructureError : public Error {
public:
    explicit StructureError(StructureReport report);
    const StructureReport& report() const { return report_; }

private:
    StructureReport report_;
};

StructureReport validate_structure(const WorkflowNet& wf);

// Shortest closed node sequence (first node repeated at the end), if any.
std::optional<std::vector<NodeId>> find_cycle(const PetriNet& net);

// Places p with |p*| >= 2 whose outputs have some other input.
std::vector<NodeId> simple_free_choice_violations(const PetriNet& net);
// Places whose output transitions do not share one preset.
std::vector<NodeId> extended_free_choice_violations(const PetriNet& net);

struct InsertedCluster {
    NodeId tau;
    NodeId mid;
    std::vector<NodeId> preset;
    std::vector<NodeId> members;
};

struct SimpleForm {
    WorkflowNet wf;
    std::size_t original_size = 0;
    std::vector<InsertedCluster> clusters;

    bool is_inserted(NodeId n) const { return n.index >= original_size; }
    const InsertedCluster& cluster_of(NodeId inserted) const;
};

// New nodes are appended, so original nodes keep their indices.
SimpleForm to_simple_free_choice(const WorkflowNet& wf);

struct TopoOrder {
    std::vector<NodeId> order;          // sink first
    std::vector<std::uint32_t> rank;    // larger means closer to the sink
};

// Kahn on reversed flow, smallest index first among ready nodes.
TopoOrder reverse_topological_order(const PetriNet& net);

// reach[x] = nodes y with a (possibly empty) path x ->* y.
using ReachSets = std::vector<NodeSet>;
ReachSets compute_has_path(const PetriNet& net, const TopoOrder& topo);

std::vector<NodeId> shortest_path(const PetriNet& net, NodeId from, NodeId to);

// Paths from `from` to each target (same order), pairwise sharing only `from`.
// Empty when no such family exists. `within` restricts intermediate nodes.
std::vector<std::vector<NodeId>> disjoint_paths(const PetriNet& net, NodeId from,
                                                const std::vector<NodeId>& targets,
                                                const NodeSet* within = nullptr);

}  // namespace wfreach
