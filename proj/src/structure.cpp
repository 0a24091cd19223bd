#include "wfreach/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace wfreach {

namespace {

std::string describe(const StructureReport& r) {
    std::string msg = "net is not an acyclic free-choice workflow net";
    for (const auto& v : r.violations)
        if (v.blocking) {
            msg += ": " + v.code;
            break;
        }
    return msg;
}

NodeSet forward_closure(const PetriNet& net, NodeId start, bool reverse) {
    NodeSet seen(net.size());
    std::vector<NodeId> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : reverse ? net.inputs(x) : net.outputs(x))
            if (!seen.contains(y)) {
                seen.insert(y);
                stack.push_back(y);
            }
    }
    return seen;
}

}  // namespace

StructureError::StructureError(StructureReport report)
    : Error("STRUCTURE", describe(report)), report_(std::move(report)) {}

StructureReport validate_structure(const WorkflowNet& wf) {
    const auto& net = wf.net;
    StructureReport r;
    auto add = [&](std::string code, std::string msg, std::vector<NodeId> nodes,
                   bool blocking = true) {
        r.violations.push_back({std::move(code), std::move(msg), std::move(nodes), blocking});
    };

    bool wf_ok = true;
    if (net.transition_count() == 0) {
        add("WF_NO_TRANSITIONS", "net has no transitions", {});
        wf_ok = false;
    }
    if (wf.source == wf.sink) {
        add("WF_SOURCE_IS_SINK", "source and sink are the same place", {wf.source});
        wf_ok = false;
    }
    if (!net.inputs(wf.source).empty()) {
        add("WF_SOURCE_HAS_PRESET", "source place " + net.label(wf.source) + " has inputs",
            {wf.source});
        wf_ok = false;
    }
    if (!net.outputs(wf.sink).empty()) {
        add("WF_SINK_HAS_POSTSET", "sink place " + net.label(wf.sink) + " has outputs", {wf.sink});
        wf_ok = false;
    }
    std::vector<NodeId> improper;
    for (auto t : net.transitions())
        if (net.inputs(t).empty() || net.outputs(t).empty()) improper.push_back(t);
    if (!improper.empty()) {
        add("WF_IMPROPER_TRANSITION", "transitions with empty preset or postset", improper);
        wf_ok = false;
    }
    auto from_source = forward_closure(net, wf.source, false);
    auto to_sink = forward_closure(net, wf.sink, true);
    std::vector<NodeId> unreachable, dead_end;
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        if (!from_source.contains(n)) unreachable.push_back(n);
        if (!to_sink.contains(n)) dead_end.push_back(n);
    }
    if (!unreachable.empty()) {
        add("WF_UNREACHABLE_NODE", "nodes not on a path from the source", unreachable);
        wf_ok = false;
    }
    if (!dead_end.empty()) {
        add("WF_DEAD_END_NODE", "nodes without a path to the sink", dead_end);
        wf_ok = false;
    }
    r.is_workflow = wf_ok;

    if (auto cyc = find_cycle(net)) {
        r.cycle = *cyc;
        add("ACYCLIC_CYCLE", "flow relation has a cycle", *cyc);
    } else {
        r.is_acyclic = true;
    }

    auto ext = extended_free_choice_violations(net);
    r.is_extended_free_choice = ext.empty();
    if (!ext.empty())
        add("FC_EXTENDED_VIOLATION", "places whose output transitions have differing presets", ext);
    auto simple = simple_free_choice_violations(net);
    r.is_simple_free_choice = simple.empty();
    if (!simple.empty())
        add("FC_SIMPLE_VIOLATION", "choice places whose outputs have other inputs", simple,
            !ext.empty());
    return r;
}

std::optional<std::vector<NodeId>> find_cycle(const PetriNet& net) {
    std::vector<std::size_t> outdeg(net.size());
    std::vector<NodeId> ready;
    for (std::size_t i = 0; i < net.size(); ++i) {
        outdeg[i] = net.outputs(NodeId(i)).size();
        if (outdeg[i] == 0) ready.push_back(NodeId(i));
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        auto x = ready.back();
        ready.pop_back();
        ++removed;
        for (auto p : net.inputs(x))
            if (--outdeg[p.index] == 0) ready.push_back(p);
    }
    if (removed == net.size()) return std::nullopt;

    // Nodes left over lie on or before a cycle; BFS back to each one.
    std::optional<std::vector<NodeId>> best;
    std::vector<std::int64_t> parent(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (outdeg[i] == 0) continue;
        NodeId start(i);
        std::fill(parent.begin(), parent.end(), -1);
        std::deque<NodeId> q{start};
        bool found = false;
        NodeId last;
        while (!q.empty() && !found) {
            auto x = q.front();
            q.pop_front();
            for (auto y : net.outputs(x)) {
                if (outdeg[y.index] == 0) continue;
                if (y == start) {
                    found = true;
                    last = x;
                    break;
                }
                if (parent[y.index] < 0) {
                    parent[y.index] = x.index;
                    q.push_back(y);
                }
            }
        }
        if (!found) continue;
        std::vector<NodeId> cyc{start};
        for (auto x = last; x != start; x = NodeId(static_cast<std::uint32_t>(parent[x.index])))
            cyc.push_back(x);
        cyc.push_back(start);
        std::reverse(cyc.begin() + 1, cyc.end() - 1);
        if (!best || cyc.size() < best->size()) best = cyc;
        if (best->size() == 3) break;
    }
    return best;
}

std::vector<NodeId> simple_free_choice_violations(const PetriNet& net) {
    std::vector<NodeId> out;
    for (auto p : net.places()) {
        if (net.outputs(p).size() < 2) continue;
        for (auto t : net.outputs(p))
            if (net.inputs(t).size() != 1) {
                out.push_back(p);
                break;
            }
    }
    return out;
}

std::vector<NodeId> extended_free_choice_violations(const PetriNet& net) {
    std::vector<NodeId> out;
    for (auto p : net.places()) {
        auto outs = net.outputs(p);
        if (outs.size() < 2) continue;
        auto first = net.inputs(outs[0]);
        for (std::size_t k = 1; k < outs.size(); ++k) {
            auto other = net.inputs(outs[k]);
            if (!std::equal(first.begin(), first.end(), other.begin(), other.end())) {
                out.push_back(p);
                break;
            }
        }
    }
    return out;
}

const InsertedCluster& SimpleForm::cluster_of(NodeId inserted) const {
    for (const auto& c : clusters)
        if (c.tau == inserted || c.mid == inserted) return c;
    throw Error("INTERNAL", "node is not an inserted node");
}

SimpleForm to_simple_free_choice(const WorkflowNet& wf) {
    const auto& net = wf.net;
    if (!extended_free_choice_violations(net).empty())
        throw Error("NOT_EXTENDED_FREE_CHOICE", "net is not extended free-choice");

    // A cluster needs rewiring when it shares a multi-place preset among several transitions.
    std::map<std::vector<NodeId>, std::vector<NodeId>> by_preset;
    for (auto t : net.transitions()) {
        auto in = net.inputs(t);
        if (in.size() >= 2) by_preset[std::vector<NodeId>(in.begin(), in.end())].push_back(t);
    }
    std::vector<std::pair<std::vector<NodeId>, std::vector<NodeId>>> todo;
    for (auto& [pre, members] : by_preset)
        if (members.size() >= 2) todo.emplace_back(pre, members);
    std::sort(todo.begin(), todo.end(),
              [](const auto& a, const auto& b) { return a.second.front() < b.second.front(); });

    NetBuilder b;
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        if (net.is_place(n))
            b.add_place(net.label(n));
        else
            b.add_transition(net.label(n));
    }
    SimpleForm out;
    out.original_size = net.size();
    std::vector<std::int64_t> rewired(net.size(), -1);
    for (const auto& [pre, members] : todo) {
        std::string base;
        for (auto p : pre) base += (base.empty() ? "" : "_") + net.label(p);
        auto fresh = [&](std::string name) {
            while (b.contains(name)) name += "'";
            return name;
        };
        InsertedCluster c;
        c.tau = b.add_transition(fresh(base + "_tau"));
        c.mid = b.add_place(fresh(base + "_mid"));
        c.preset = pre;
        c.members = members;
        for (auto t : members) rewired[t.index] = static_cast<std::int64_t>(out.clusters.size());
        out.clusters.push_back(c);
    }
    for (const auto& [x, y] : net.arcs()) {
        if (net.is_transition(y) && rewired[y.index] >= 0) continue;
        b.add_arc(x, y);
    }
    for (const auto& c : out.clusters) {
        for (auto p : c.preset) b.add_arc(p, c.tau);
        b.add_arc(c.tau, c.mid);
        for (auto t : c.members) b.add_arc(c.mid, t);
    }
    out.wf = WorkflowNet{b.build(), wf.source, wf.sink};
    return out;
}

TopoOrder reverse_topological_order(const PetriNet& net) {
    TopoOrder topo;
    std::vector<std::size_t> outdeg(net.size());
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < net.size(); ++i) {
        outdeg[i] = net.outputs(NodeId(i)).size();
        if (outdeg[i] == 0) ready.push(static_cast<std::uint32_t>(i));
    }
    while (!ready.empty()) {
        NodeId x(ready.top());
        ready.pop();
        topo.order.push_back(x);
        for (auto p : net.inputs(x))
            if (--outdeg[p.index] == 0) ready.push(p.index);
    }
    if (topo.order.size() != net.size())
        throw Error("STRUCTURE", "flow relation has a cycle; no topological order");
    topo.rank.assign(net.size(), 0);
    auto n = static_cast<std::uint32_t>(net.size());
    for (std::uint32_t k = 0; k < n; ++k) topo.rank[topo.order[k].index] = n - 1 - k;
    return topo;
}

ReachSets compute_has_path(const PetriNet& net, const TopoOrder& topo) {
    ReachSets reach(net.size(), NodeSet(net.size()));
    for (auto x : topo.order) {
        auto& rx = reach[x.index];
        rx.insert(x);
        for (auto y : net.outputs(x)) rx |= reach[y.index];
    }
    return reach;
}

std::vector<NodeId> shortest_path(const PetriNet& net, NodeId from, NodeId to) {
    std::vector<std::int64_t> parent(net.size(), -1);
    parent[from.index] = from.index;
    std::deque<NodeId> q{from};
    while (!q.empty()) {
        auto x = q.front();
        q.pop_front();
        if (x == to) break;
        for (auto y : net.outputs(x))
            if (parent[y.index] < 0) {
                parent[y.index] = x.index;
                q.push_back(y);
            }
    }
    if (parent[to.index] < 0) return {};
    std::vector<NodeId> path{to};
    for (auto x = to; x != from;) {
        x = NodeId(static_cast<std::uint32_t>(parent[x.index]));
        path.push_back(x);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace wfreach

namespace wfreach {

std::vector<std::vector<NodeId>> disjoint_paths(const PetriNet& net, NodeId from,
                                                const std::vector<NodeId>& targets,
                                                const NodeSet* within) {
    struct FlowEdge {
        std::uint32_t to;
        int cap;
        std::uint32_t rev;
        bool real;
    };
    const auto n = net.size();
    const auto sink = static_cast<std::uint32_t>(2 * n);
    std::vector<std::vector<FlowEdge>> g(2 * n + 1);
    auto link = [&](std::uint32_t a, std::uint32_t b) {
        g[a].push_back({b, 1, static_cast<std::uint32_t>(g[b].size()), true});
        g[b].push_back({a, 0, static_cast<std::uint32_t>(g[a].size() - 1), false});
    };
    auto allowed = [&](NodeId v) { return v == from || !within || within->contains(v); };

    for (auto t : targets)
        if (t == from || !allowed(t)) return {};
    for (std::size_t i = 0; i < n; ++i) {
        NodeId v(i);
        if (!allowed(v)) continue;
        if (v != from) link(2 * v.index, 2 * v.index + 1);
        for (auto w : net.outputs(v))
            if (w != from && allowed(w)) link(2 * v.index + 1, 2 * w.index);
    }
    for (auto t : targets) {
        for (const auto& e : g[2 * t.index + 1])
            if (e.to == sink && e.real) return {};  // duplicate target
        link(2 * t.index + 1, sink);
    }

    const std::uint32_t start = 2 * from.index + 1;
    std::vector<std::int64_t> prev_node(g.size()), prev_edge(g.size());
    for (std::size_t unit = 0; unit < targets.size(); ++unit) {
        std::fill(prev_node.begin(), prev_node.end(), -1);
        prev_node[start] = start;
        std::deque<std::uint32_t> q{start};
        while (!q.empty() && prev_node[sink] < 0) {
            auto u = q.front();
            q.pop_front();
            for (std::size_t k = 0; k < g[u].size(); ++k) {
                const auto& e = g[u][k];
                if (e.cap > 0 && prev_node[e.to] < 0) {
                    prev_node[e.to] = u;
                    prev_edge[e.to] = static_cast<std::int64_t>(k);
                    q.push_back(e.to);
                }
            }
        }
        if (prev_node[sink] < 0) return {};
        for (auto v = sink; v != start;) {
            auto u = static_cast<std::uint32_t>(prev_node[v]);
            auto& e = g[u][static_cast<std::size_t>(prev_edge[v])];
            e.cap -= 1;
            g[v][e.rev].cap += 1;
            v = u;
        }
    }

    std::vector<std::vector<NodeId>> paths(targets.size());
    for (std::size_t unit = 0; unit < targets.size(); ++unit) {
        std::vector<NodeId> path{from};
        auto cur = start;
        while (true) {
            FlowEdge* next = nullptr;
            for (auto& e : g[cur])
                if (e.real && e.cap == 0) {
                    next = &e;
                    break;
                }
            if (!next) throw Error("INTERNAL", "flow decomposition failed");
            next->cap = -1;  // consumed
            if (next->to == sink) break;
            auto v = next->to / 2;
            path.push_back(NodeId(v));
            cur = 2 * v + 1;
        }
        auto it = std::find(targets.begin(), targets.end(), path.back());
        paths[static_cast<std::size_t>(it - targets.begin())] = std::move(path);
    }
    return paths;
}

}  // namespace wfreach
