#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfreach/concurrency.hpp"
#include "wfreach/diverge.hpp"
#include "wfreach/formats.hpp"
#include "wfreach/net.hpp"
#include "wfreach/oracle.hpp"
#include "wfreach/postdom.hpp"
#include "wfreach/structure.hpp"

namespace wfreach {

enum class Mode { exact, cover };
enum class Verdict { reachable, coverable, not_reachable };

const char* mode_name(Mode m);
Mode parse_mode(std::string_view s);
const char* verdict_name(Verdict v);

struct AnalysisOptions {
    bool assume_sound = false;
    std::size_t state_cap = default_state_cap;
};

// Everything computed once per net; immutable afterwards.
class NetAnalysis {
public:
    static NetAnalysis build(const WorkflowNet& wf, const AnalysisOptions& options = {});

    const WorkflowNet& original() const { return original_; }
    const SimpleForm& simple() const { return simple_; }
    const PetriNet& net() const { return simple_.wf.net; }
    NodeId source() const { return simple_.wf.source; }
    NodeId sink() const { return simple_.wf.sink; }
    const StructureReport& structure() const { return structure_; }
    const TopoOrder& topo() const { return topo_; }
    const ReachSets& reach() const { return reach_; }
    const ConcurrencyRelation& concurrency() const { return conc_; }
    const PostDomData& postdom() const { return postdom_; }
    // "verified" or "assumed"
    const std::string& soundness() const { return soundness_; }

    // Maps working-net nodes back to original nodes; inserted nodes become their cluster preset.
    NodeSet to_original(const NodeSet& s) const;
    std::vector<NodeId> path_to_original(const std::vector<NodeId>& path) const;

private:
    WorkflowNet original_;
    SimpleForm simple_;
    StructureReport structure_;
    TopoOrder topo_;
    ReachSets reach_;
    ConcurrencyRelation conc_;
    PostDomData postdom_;
    std::string soundness_;
};

struct Witness {
    std::vector<NodeId> sequence;
    std::vector<Marking> markings;  // markings[0] = [source], markings[k] after sequence[k-1]
    std::vector<NodeId> subnet_nodes;
    std::vector<Edge> subnet_edges;
};

struct AnalysisReport {
    Mode mode = Mode::exact;
    Marking marking;
    Verdict verdict = Verdict::not_reachable;
    std::string engine = "structural";
    std::string soundness;
    AdmissibilityResult admissibility;
    std::optional<NodeId> chosen_delta;
    DivergeData diverging;
    std::vector<ConflictExplanation> conflicts;
    std::vector<NodeId> union_mismatches;
    std::optional<Witness> witness;
    std::vector<std::string> notes;
    RoleMap roles;
};

// All node ids in the result refer to the original net.
AnalysisReport is_reachable(const NetAnalysis& a, const Marking& m, Mode mode);

// Marking must be reachable (exact) or coverable (cover); throws otherwise.
Witness build_witness(const NetAnalysis& a, const Marking& m, Mode mode);

// Replays the sequence from the source marking; true when it ends at (or covers) m.
bool replay_witness(const PetriNet& net, NodeId source, const Witness& w, const Marking& m,
                    Mode mode);

RoleMap assign_roles(const NetAnalysis& a, const AnalysisReport& report,
                     bool include_witness = false);

// State-space fallback for nets outside the structural preconditions.
AnalysisReport oracle_verdict(const WorkflowNet& wf, const Marking& m, Mode mode,
                              std::size_t cap);

}  // namespace wfreach
