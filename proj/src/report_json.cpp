#include "wfreach/report_json.hpp"

namespace wfreach {

namespace {

Json labels(const PetriNet& net, const NodeSet& s) {
    auto arr = Json::array();
    s.for_each([&](NodeId n) { arr.push_back(net.label(n)); });
    return arr;
}

Json labels(const PetriNet& net, const std::vector<NodeId>& v) {
    auto arr = Json::array();
    for (auto n : v) arr.push_back(net.label(n));
    return arr;
}

Json node_map(const PetriNet& net, const std::map<NodeId, NodeSet>& m) {
    auto obj = Json::object();
    for (const auto& [k, v] : m) obj[net.label(k)] = labels(net, v);
    return obj;
}

Json marking_json(const PetriNet& net, const Marking& m) {
    auto obj = Json::object();
    for (const auto& [p, c] : m.tokens()) obj[net.label(p)] = c;
    return obj;
}

}  // namespace

Json net_json(const WorkflowNet& wf) {
    const auto& net = wf.net;
    Json j;
    auto nodes = Json::array();
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        nodes.push_back({{"id", net.label(n)},
                         {"index", i},
                         {"kind", net.is_place(n) ? "place" : "transition"}});
    }
    auto arcs = Json::array();
    for (const auto& [a, b] : net.arcs()) arcs.push_back({{"from", net.label(a)}, {"to", net.label(b)}});
    j["nodes"] = nodes;
    j["arcs"] = arcs;
    j["source"] = net.label(wf.source);
    j["sink"] = net.label(wf.sink);
    return j;
}

Json structure_json(const PetriNet& net, const StructureReport& r) {
    Json j;
    j["isWorkflowNet"] = r.is_workflow;
    j["isAcyclic"] = r.is_acyclic;
    j["isExtendedFreeChoice"] = r.is_extended_free_choice;
    j["isSimpleFreeChoice"] = r.is_simple_free_choice;
    j["analyzable"] = r.analyzable();
    auto vs = Json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"code", v.code},
                      {"message", v.message},
                      {"blocking", v.blocking},
                      {"nodes", labels(net, v.nodes)}});
    j["violations"] = vs;
    j["cycle"] = labels(net, r.cycle);
    return j;
}

Json soundness_json(const PetriNet& net, const SoundnessResult& s) {
    Json j;
    j["sound"] = s.sound;
    j["safe"] = s.safe;
    j["states"] = s.states;
    j["violatedClause"] = s.violated_clause;
    j["detail"] = s.detail;
    j["counterexample"] =
        s.counterexample_state ? Json(format_marking(net, *s.counterexample_state)) : Json();
    j["deadTransition"] = s.dead_transition ? Json(net.label(*s.dead_transition)) : Json();
    return j;
}

Json witness_json(const PetriNet& net, const Witness& w) {
    Json j;
    j["sequence"] = labels(net, w.sequence);
    auto ms = Json::array();
    for (const auto& m : w.markings) ms.push_back(marking_json(net, m));
    j["markings"] = ms;
    j["subnetNodes"] = labels(net, w.subnet_nodes);
    auto es = Json::array();
    for (const auto& [a, b] : w.subnet_edges) es.push_back({net.label(a), net.label(b)});
    j["subnetEdges"] = es;
    return j;
}

Json roles_json(const PetriNet& net, const RoleMap& roles) {
    Json j;
    auto nodes = Json::object();
    for (const auto& [n, r] : roles.nodes) nodes[net.label(n)] = role_name(r);
    auto edges = Json::array();
    for (const auto& [e, r] : roles.edges)
        edges.push_back({{"from", net.label(e.first)}, {"to", net.label(e.second)}, {"role", role_name(r)}});
    j["nodes"] = nodes;
    j["edges"] = edges;
    return j;
}

Json report_json(const PetriNet& net, const AnalysisReport& r) {
    Json j;
    j["verdict"] = verdict_name(r.verdict);
    j["mode"] = mode_name(r.mode);
    j["marking"] = format_marking(net, r.marking);
    j["engine"] = r.engine;
    j["soundness"] = r.soundness;
    j["admissibility"] = admissibility_name(r.admissibility.verdict);
    j["candidates"] = labels(net, r.admissibility.candidates);
    j["missing"] = labels(net, r.admissibility.missing);
    j["conflicting"] = labels(net, r.admissibility.conflicting);
    j["unsafe"] = labels(net, r.admissibility.unsafe);
    j["chosenDelta"] = r.chosen_delta ? Json(net.label(*r.chosen_delta)) : Json();
    j["divergingPoints"] = r.diverging.points.universe() ? labels(net, r.diverging.points) : Json::array();
    j["divinfo"] = node_map(net, r.diverging.divinfo);
    j["reaches"] = node_map(net, r.diverging.reaches);
    auto cs = Json::array();
    for (const auto& c : r.conflicts) {
        Json cj;
        cj["kind"] = conflict_kind_name(c.kind);
        cj["x"] = net.label(c.x);
        cj["y"] = net.label(c.y);
        cj["path"] = labels(net, c.path);
        cj["decisionPlace"] = c.decision_place ? Json(net.label(*c.decision_place)) : Json();
        cj["pathToX"] = labels(net, c.path_to_x);
        cj["pathToY"] = labels(net, c.path_to_y);
        cs.push_back(cj);
    }
    j["conflicts"] = cs;
    j["unionMismatches"] = labels(net, r.union_mismatches);
    j["witness"] = r.witness ? witness_json(net, *r.witness) : Json();
    j["notes"] = r.notes;
    j["roles"] = roles_json(net, r.roles);
    return j;
}

Json concurrency_json(const PetriNet& net, const ConcurrencyRelation& conc) {
    auto j = Json::object();
    for (auto p : net.places()) {
        auto arr = Json::array();
        conc[p.index].for_each([&](NodeId q) {
            if (q.index < net.size() && net.is_place(q)) arr.push_back(net.label(q));
        });
        j[net.label(p)] = arr;
    }
    return j;
}

Json postdom_json(const PetriNet& net, const PostDomData& pd) {
    Json j;
    auto ip = Json::object();
    auto fr = Json::object();
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        ip[net.label(n)] = pd.has_ipdom(n) ? Json(net.label(pd.ipdom_of(n))) : Json();
        fr[net.label(n)] = labels(net, pd.frontier[i]);
    }
    j["ipdom"] = ip;
    j["pdf"] = fr;
    return j;
}

Json error_json(const Error& e) {
    Json j;
    j["error"] = {{"code", e.code()}, {"message", e.what()}};
    return j;
}

}  // namespace wfreach
