#include "wfreach/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <unordered_map>

namespace wfreach {

std::size_t state_cap_from_env() {
    if (const char* v = std::getenv("WFREACH_CAP")) {
        char* end = nullptr;
        auto n = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return default_state_cap;
}

std::vector<NodeId> enabled(const PetriNet& net, const Marking& m) {
    std::vector<NodeId> out;
    for (auto t : net.transitions()) {
        bool ok = true;
        for (auto p : net.inputs(t))
            if (m.count(p) == 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(t);
    }
    return out;
}

Marking fire(const PetriNet& net, const Marking& m, NodeId t) {
    if (t.index >= net.size() || !net.is_transition(t))
        throw Error("NOT_A_TRANSITION", "cannot fire a non-transition");
    for (auto p : net.inputs(t))
        if (m.count(p) == 0)
            throw Error("NOT_ENABLED", "transition " + net.label(t) + " is not enabled");
    Marking next = m;
    for (auto p : net.inputs(t)) next.remove(p);
    for (auto p : net.outputs(t)) next.add(p);
    return next;
}

bool ReachabilityGraph::safe() const {
    for (const auto& s : states)
        if (s.max_multiplicity() > 1) return false;
    return true;
}

namespace {

using Counts = std::vector<std::uint32_t>;

struct CountsHash {
    std::size_t operator()(const Counts& c) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : c) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

ReachabilityGraph explore(const PetriNet& net, const Marking& initial, std::size_t cap) {
    if (cap == 0) throw Error("INVALID_ARGUMENT", "state cap must be positive");
    std::vector<std::uint32_t> ord(net.size(), 0);
    for (std::size_t k = 0; k < net.places().size(); ++k) ord[net.places()[k].index] = static_cast<std::uint32_t>(k);

    struct Step {
        std::vector<std::uint32_t> in, out;
    };
    std::vector<Step> steps;
    for (auto t : net.transitions()) {
        Step s;
        for (auto p : net.inputs(t)) s.in.push_back(ord[p.index]);
        for (auto p : net.outputs(t)) s.out.push_back(ord[p.index]);
        steps.push_back(std::move(s));
    }

    Counts start(net.place_count(), 0);
    for (const auto& [p, c] : initial.tokens()) {
        if (p.index >= net.size() || !net.is_place(p))
            throw Error("UNKNOWN_PLACE", "initial marking names a non-place");
        start[ord[p.index]] = c;
    }

    ReachabilityGraph g;
    std::vector<Counts> states{start};
    std::unordered_map<Counts, std::uint32_t, CountsHash> index{{start, 0}};
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto& s = steps[k];
            const auto& from = states[cur];
            bool ok = true;
            for (auto p : s.in)
                if (from[p] == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Counts next = from;
            for (auto p : s.in) --next[p];
            for (auto p : s.out) ++next[p];
            auto [it, fresh] = index.try_emplace(next, static_cast<std::uint32_t>(states.size()));
            if (fresh) {
                if (states.size() >= cap)
                    throw Error("CAP_EXCEEDED",
                                "state space exceeds cap of " + std::to_string(cap) + " states");
                states.push_back(std::move(next));
            }
            g.edges.emplace_back(static_cast<std::uint32_t>(cur), net.transitions()[k], it->second);
        }
    }
    g.states.reserve(states.size());
    g.supports.reserve(states.size());
    for (const auto& c : states) {
        Marking m;
        NodeSet s(net.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k]) {
                m.add(net.places()[k], c[k]);
                s.insert(net.places()[k]);
            }
        g.states.push_back(std::move(m));
        g.supports.push_back(std::move(s));
    }
    return g;
}

ReachabilityGraph explore(const WorkflowNet& wf, std::size_t cap) {
    return explore(wf.net, Marking::single(wf.source), cap);
}

SoundnessResult check_soundness(const WorkflowNet& wf, std::size_t cap) {
    return check_soundness(wf, explore(wf, cap));
}

SoundnessResult check_soundness(const WorkflowNet& wf, const ReachabilityGraph& g) {
    const auto& net = wf.net;
    SoundnessResult r;
    r.states = g.states.size();
    r.safe = g.safe();
    auto final_state = Marking::single(wf.sink);

    std::vector<std::vector<std::uint32_t>> back(g.states.size());
    for (const auto& [a, t, b] : g.edges) back[b].push_back(a);
    std::vector<bool> completes(g.states.size(), false);
    std::deque<std::uint32_t> q;
    for (std::uint32_t k = 0; k < g.states.size(); ++k)
        if (g.states[k] == final_state) {
            completes[k] = true;
            q.push_back(k);
        }
    while (!q.empty()) {
        auto k = q.front();
        q.pop_front();
        for (auto a : back[k])
            if (!completes[a]) {
                completes[a] = true;
                q.push_back(a);
            }
    }
    for (std::uint32_t k = 0; k < g.states.size(); ++k)
        if (!completes[k]) {
            r.violated_clause = 1;
            r.detail = "state " + format_marking(net, g.states[k]) + " cannot reach the final marking";
            r.counterexample_state = g.states[k];
            return r;
        }
    for (const auto& s : g.states)
        if (s.count(wf.sink) > 0 && !(s == final_state)) {
            r.violated_clause = 2;
            r.detail = "state " + format_marking(net, s) + " marks the sink alongside other tokens";
            r.counterexample_state = s;
            return r;
        }
    NodeSet fired(net.size());
    for (const auto& [a, t, b] : g.edges) fired.insert(t);
    for (auto t : net.transitions())
        if (!fired.contains(t)) {
            r.violated_clause = 3;
            r.detail = "transition " + net.label(t) + " is dead";
            r.dead_transition = t;
            return r;
        }
    r.sound = true;
    return r;
}

ConcurrencyRelation brute_concurrency(const PetriNet& net, const ReachabilityGraph& g) {
    ConcurrencyRelation conc(net.size(), NodeSet(net.size()));
    for (std::size_t k = 0; k < g.states.size(); ++k) {
        const auto& s = g.states[k];
        for (const auto& [x, cx] : s.tokens()) {
            auto others = g.supports[k];
            others.erase(x);
            conc[x.index] |= others;
            if (cx >= 2) conc[x.index].insert(x);
        }
    }
    return conc;
}

bool brute_reachable(const ReachabilityGraph& g, const Marking& m) {
    for (std::size_t k = 0; k < g.states.size(); ++k)
        if (g.states[k] == m) return true;
    return false;
}

bool brute_coverable(const ReachabilityGraph& g, const Marking& m) {
    for (const auto& s : g.states)
        if (s.covers(m)) return true;
    return false;
}

std::optional<std::vector<NodeId>> brute_firing_sequence(const PetriNet& net,
                                                         const ReachabilityGraph& g,
                                                         const Marking& m, bool cover) {
    (void)net;
    std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> succ(g.states.size());
    for (const auto& [a, t, b] : g.edges) succ[a].emplace_back(t, b);
    std::vector<std::int64_t> parent(g.states.size(), -1);
    std::vector<NodeId> via(g.states.size());
    parent[g.initial] = g.initial;
    std::deque<std::uint32_t> q{g.initial};
    while (!q.empty()) {
        auto k = q.front();
        q.pop_front();
        if (cover ? g.states[k].covers(m) : g.states[k] == m) {
            std::vector<NodeId> seq;
            for (auto cur = k; cur != g.initial; cur = static_cast<std::uint32_t>(parent[cur]))
                seq.push_back(via[cur]);
            std::reverse(seq.begin(), seq.end());
            return seq;
        }
        for (const auto& [t, b] : succ[k])
            if (parent[b] < 0) {
                parent[b] = k;
                via[b] = t;
                q.push_back(b);
            }
    }
    return std::nullopt;
}

BrutePostDom brute_postdom(const PetriNet& net, NodeId sink) {
    const auto n = net.size();
    BrutePostDom r;
    r.dominators.assign(n, NodeSet(n));
    // escape[y] = nodes with a path to the sink that avoids y
    for (std::size_t yi = 0; yi < n; ++yi) {
        NodeId y(yi);
        NodeSet escape(n);
        if (y != sink) {
            std::vector<NodeId> stack{sink};
            escape.insert(sink);
            while (!stack.empty()) {
                auto x = stack.back();
                stack.pop_back();
                for (auto p : net.inputs(x))
                    if (p != y && !escape.contains(p)) {
                        escape.insert(p);
                        stack.push_back(p);
                    }
            }
        }
        for (std::size_t xi = 0; xi < n; ++xi)
            if (!escape.contains(NodeId(xi))) r.dominators[xi].insert(y);
    }
    r.ipdom.assign(n, -1);
    for (std::size_t xi = 0; xi < n; ++xi) {
        NodeId x(xi);
        if (x == sink) {
            r.ipdom[xi] = sink.index;
            continue;
        }
        auto strict = r.dominators[xi];
        strict.erase(x);
        strict.for_each([&](NodeId z) {
            if (strict.subset_of(r.dominators[z.index])) r.ipdom[xi] = z.index;
        });
    }
    r.frontier.assign(n, NodeSet(n));
    for (std::size_t yi = 0; yi < n; ++yi) {
        NodeId y(yi);
        for (std::size_t xi = 0; xi < n; ++xi) {
            NodeId x(xi);
            bool strictly = x != y && r.dominators[xi].contains(y);
            if (strictly) continue;
            for (auto s : net.outputs(x))
                if (r.dominators[s.index].contains(y)) {
                    r.frontier[yi].insert(x);
                    break;
                }
        }
    }
    return r;
}

namespace {

bool path_avoiding(const PetriNet& net, NodeId from, NodeId to, const NodeSet& blocked) {
    if (blocked.contains(from)) return false;
    NodeSet seen(net.size());
    std::vector<NodeId> stack{from};
    seen.insert(from);
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        if (x == to) return true;
        for (auto y : net.outputs(x))
            if (!seen.contains(y) && !blocked.contains(y)) {
                seen.insert(y);
                stack.push_back(y);
            }
    }
    return false;
}

}  // namespace

NodeSet brute_divpoints(const PetriNet& net, const NodeSet& targets) {
    NodeSet out(net.size());
    auto members = targets.to_vector();
    for (std::size_t di = 0; di < net.size(); ++di) {
        NodeId delta(di);
        auto outs = net.outputs(delta);
        if (outs.size() < 2) continue;
        bool found = false;
        for (auto o1 : outs) {
            for (auto d1 : members) {
                // enumerate every path o1 ->* d1, look for a disjoint partner path
                NodeSet leads(net.size());
                std::vector<NodeId> stack{d1};
                leads.insert(d1);
                while (!stack.empty()) {
                    auto x = stack.back();
                    stack.pop_back();
                    for (auto p : net.inputs(x))
                        if (!leads.contains(p)) {
                            leads.insert(p);
                            stack.push_back(p);
                        }
                }
                if (!leads.contains(o1)) continue;
                NodeSet on_path(net.size());
                std::function<void(NodeId)> walk = [&](NodeId x) {
                    if (found) return;
                    on_path.insert(x);
                    if (x == d1) {
                        for (auto o2 : outs) {
                            if (o2 == o1) continue;
                            for (auto d2 : members)
                                if (d2 != d1 && path_avoiding(net, o2, d2, on_path)) found = true;
                        }
                    } else {
                        for (auto y : net.outputs(x))
                            if (leads.contains(y)) walk(y);
                    }
                    on_path.erase(x);
                };
                walk(o1);
                if (found) break;
            }
            if (found) break;
        }
        if (found) out.insert(delta);
    }
    return out;
}

NodeSet brute_divinfo(const PetriNet& net, NodeId node, const NodeSet& targets) {
    NodeSet out(net.size());
    NodeSet none(net.size());
    for (auto o : net.outputs(node))
        targets.for_each([&](NodeId d) {
            if (path_avoiding(net, o, d, none)) out.insert(d);
        });
    return out;
}

std::vector<NodeId> random_path(const PetriNet& net, NodeId from, std::mt19937_64& rng) {
    std::vector<NodeId> path{from};
    while (!net.outputs(path.back()).empty()) {
        auto outs = net.outputs(path.back());
        path.push_back(outs[rng() % outs.size()]);
    }
    return path;
}

PathToEndResult verify_path_to_end(const WorkflowNet& wf, const ReachabilityGraph& g,
                                   std::size_t samples, std::uint64_t seed) {
    const auto& net = wf.net;
    std::mt19937_64 rng(seed);
    PathToEndResult r;
    for (std::size_t k = 0; k < samples; ++k) {
        auto start = net.places()[rng() % net.place_count()];
        auto path = random_path(net, start, rng);
        NodeSet nodes(net.size());
        for (auto x : path) nodes.insert(x);
        ++r.paths_checked;
        for (std::size_t s = 0; s < g.states.size(); ++s) {
            std::size_t tokens = 0;
            for (const auto& [p, c] : g.states[s].tokens())
                if (nodes.contains(p)) tokens += c;
            if (tokens > 1) {
                r.holds = false;
                r.violating_path = path;
                r.violating_state = g.states[s];
                return r;
            }
        }
    }
    return r;
}

}  // namespace wfreach
