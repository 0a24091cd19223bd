#include "wfreach/decide.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace wfreach {

const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "cover"; }

Mode parse_mode(std::string_view s) {
    if (s == "exact") return Mode::exact;
    if (s == "cover") return Mode::cover;
    throw Error("INVALID_ARGUMENT", "mode must be 'exact' or 'cover'");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::reachable: return "reachable";
        case Verdict::coverable: return "coverable";
        case Verdict::not_reachable: return "not-reachable";
    }
    return "not-reachable";
}

NetAnalysis NetAnalysis::build(const WorkflowNet& wf, const AnalysisOptions& options) {
    NetAnalysis a;
    a.original_ = wf;
    a.structure_ = validate_structure(wf);
    if (!a.structure_.analyzable()) throw StructureError(a.structure_);

    if (options.assume_sound) {
        a.soundness_ = "assumed";
    } else {
        SoundnessResult s;
        try {
            s = check_soundness(wf, options.state_cap);
        } catch (const Error& e) {
            if (e.code() != "CAP_EXCEEDED") throw;
            throw Error("SOUNDNESS_UNVERIFIED",
                        std::string(e.what()) + "; soundness cannot be verified, use --assume-sound");
        }
        if (!s.sound) throw Error("UNSOUND", "net is not sound: " + s.detail);
        a.soundness_ = "verified";
    }

    if (a.structure_.is_simple_free_choice)
        a.simple_ = SimpleForm{wf, wf.net.size(), {}};
    else
        a.simple_ = to_simple_free_choice(wf);
    const auto& net = a.simple_.wf.net;
    a.topo_ = reverse_topological_order(net);
    a.reach_ = compute_has_path(net, a.topo_);
    a.conc_ = determine_concurrency(net, a.reach_);
    a.postdom_ = compute_post_dominance(net, a.topo_);
    return a;
}

NodeSet NetAnalysis::to_original(const NodeSet& s) const {
    NodeSet out(original_.net.size());
    s.for_each([&](NodeId n) {
        if (!simple_.is_inserted(n)) {
            out.insert(n);
            return;
        }
        for (auto p : simple_.cluster_of(n).preset) out.insert(p);
    });
    return out;
}

std::vector<NodeId> NetAnalysis::path_to_original(const std::vector<NodeId>& path) const {
    std::vector<NodeId> out;
    for (auto n : path)
        if (!simple_.is_inserted(n)) out.push_back(n);
    return out;
}

ConflictExplanation classify_conflict(const NetAnalysis& a, NodeId x, NodeId y) {
    const auto& net = a.net();
    for (auto n : {x, y})
        if (n.index >= net.size() || !net.is_place(n))
            throw Error("NOT_A_PLACE", "conflicts are classified between places");
    if (x == y || a.concurrency()[x.index].contains(y))
        throw Error("NOT_CONFLICTING", net.label(x) + " and " + net.label(y) + " are concurrent");
    ConflictExplanation c;
    c.x = x;
    c.y = y;
    if (a.reach()[x.index].contains(y)) {
        c.kind = ConflictKind::forward_path;
        c.path = shortest_path(net, x, y);
        return c;
    }
    if (a.reach()[y.index].contains(x)) {
        c.kind = ConflictKind::backward_path;
        c.path = shortest_path(net, y, x);
        return c;
    }
    c.kind = ConflictKind::exclusive;
    NodeSet pair(net.size());
    pair.insert(x);
    pair.insert(y);
    auto d = compute_diverging_points(net, a.postdom(), pair);
    std::optional<NodeId> best;
    auto consider = [&](const NodeSet& pool) {
        pool.for_each([&](NodeId n) {
            if (!net.is_place(n)) return;
            if (!best || a.topo().rank[n.index] > a.topo().rank[best->index]) best = n;
        });
    };
    consider(d.points);
    if (!best) consider(d.candidates);
    if (best) {
        c.decision_place = best;
        auto paths = disjoint_paths(net, *best, {x, y});
        if (paths.size() == 2) {
            c.path_to_x = paths[0];
            c.path_to_y = paths[1];
        } else {
            c.path_to_x = shortest_path(net, *best, x);
            c.path_to_y = shortest_path(net, *best, y);
        }
    }
    return c;
}

namespace {

NodeSet original_places_mask(const NetAnalysis& a) {
    NodeSet s(a.net().size());
    for (auto p : a.original().net.places()) s.insert(p);
    return s;
}

NodeSet resize_to(const NodeSet& s, std::size_t universe) {
    NodeSet out(universe);
    s.for_each([&](NodeId n) {
        if (n.index < universe) out.insert(n);
    });
    return out;
}

Witness translate_witness(const NetAnalysis& a, const Witness& w) {
    const auto& onet = a.original().net;
    Witness out;
    Marking cur = Marking::single(a.original().source);
    out.markings.push_back(cur);
    NodeSet nodes(onet.size());
    for (auto t : w.sequence) {
        if (a.simple().is_inserted(t)) continue;
        cur = fire(onet, cur, t);
        out.sequence.push_back(t);
        out.markings.push_back(cur);
        nodes.insert(t);
        for (auto p : onet.inputs(t)) nodes.insert(p);
        for (auto p : onet.outputs(t)) nodes.insert(p);
    }
    if (out.sequence.empty()) nodes.insert(a.original().source);
    out.subnet_nodes = nodes.to_vector();
    for (auto t : out.sequence) {
        for (auto p : onet.inputs(t)) out.subnet_edges.emplace_back(p, t);
        for (auto p : onet.outputs(t)) out.subnet_edges.emplace_back(t, p);
    }
    std::sort(out.subnet_edges.begin(), out.subnet_edges.end());
    return out;
}

Witness raw_witness(const NetAnalysis& a, const Marking& m, Mode mode) {
    const auto& net = a.net();
    const auto& reach = a.reach();
    auto targets = m.support(net.size());
    Witness w;
    Marking cur = Marking::single(a.source());
    w.markings.push_back(cur);
    auto done = [&] { return mode == Mode::exact ? cur == m : cur.covers(m); };
    const auto limit = net.transition_count() * net.place_count();
    for (std::size_t step = 0; !done(); ++step) {
        if (step >= limit) throw Error("INTERNAL", "witness search exceeded its step bound");
        auto marked = cur.support(net.size());
        auto remaining = targets - marked;
        auto choice_of = [&](NodeId p) {
            auto outs = net.outputs(p);
            NodeId best = outs.front();
            std::size_t best_gain = reach[best.index].intersection_count(remaining);
            for (auto t : outs.subspan(1)) {
                auto gain = reach[t.index].intersection_count(remaining);
                if (gain > best_gain) {
                    best = t;
                    best_gain = gain;
                }
            }
            return best;
        };
        std::optional<NodeId> next;
        for (auto t : net.transitions()) {
            bool ok = !net.inputs(t).empty();
            for (auto p : net.inputs(t)) {
                if (!marked.contains(p) || targets.contains(p) ||
                    (net.outputs(p).size() >= 2 && choice_of(p) != t)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                next = t;
                break;
            }
        }
        if (!next) throw Error("INTERNAL", "witness search found no admissible step");
        cur = fire(net, cur, *next);
        w.sequence.push_back(*next);
        w.markings.push_back(cur);
    }
    if (!replay_witness(net, a.source(), w, m, mode))
        throw Error("INTERNAL", "witness failed replay validation");
    return w;
}

}  // namespace

bool replay_witness(const PetriNet& net, NodeId source, const Witness& w, const Marking& m,
                    Mode mode) {
    Marking cur = Marking::single(source);
    if (w.markings.size() != w.sequence.size() + 1 || !(w.markings.front() == cur)) return false;
    for (std::size_t k = 0; k < w.sequence.size(); ++k) {
        try {
            cur = fire(net, cur, w.sequence[k]);
        } catch (const Error&) {
            return false;
        }
        if (!(cur == w.markings[k + 1])) return false;
    }
    return mode == Mode::exact ? cur == m : cur.covers(m);
}

Witness build_witness(const NetAnalysis& a, const Marking& m, Mode mode) {
    require_valid_marking(a.original().net, m);
    auto w = translate_witness(a, raw_witness(a, m, mode));
    if (!replay_witness(a.original().net, a.original().source, w, m, mode))
        throw Error("INTERNAL", "translated witness failed replay validation");
    return w;
}

AnalysisReport is_reachable(const NetAnalysis& a, const Marking& m, Mode mode) {
    const auto& onet = a.original().net;
    require_valid_marking(onet, m);
    const auto& net = a.net();
    AnalysisReport r;
    r.mode = mode;
    r.marking = m;
    r.soundness = a.soundness();

    auto supp = m.support(net.size());
    auto adm = check_admissibility(net, a.concurrency(), m);
    auto originals = original_places_mask(a);
    adm.candidates &= originals;
    adm.missing &= originals;
    if (adm.verdict != Admissibility::not_admissible)
        adm.verdict = adm.missing.empty() ? Admissibility::maximum_admissible
                                          : Admissibility::admissible;

    DivergeData div;
    if (supp.count() >= 2) div = compute_diverging_points(net, a.postdom(), supp);

    bool positive = false;
    if (!adm.unsafe.empty()) {
        adm.unsafe.for_each([&](NodeId p) {
            r.notes.push_back("unsafe multiplicity: " + net.label(p) + " holds " +
                              std::to_string(m.count(p)) + " tokens");
        });
    } else if (adm.verdict != Admissibility::not_admissible) {
        bool wanted = mode == Mode::cover || adm.verdict == Admissibility::maximum_admissible;
        if (mode == Mode::exact && adm.verdict == Admissibility::admissible)
            r.notes.push_back("marking is admissible but not maximum; missing places would be marked too");
        if (supp.count() == 1) {
            positive = wanted;
        } else {
            auto ts = div.points & net.all_transitions();
            ts.for_each([&](NodeId t) {
                auto reached = a.reach()[t.index];
                reached.erase(t);
                reached &= supp;
                auto it = div.divinfo.find(t);
                if (it == div.divinfo.end() || !(it->second == reached))
                    r.union_mismatches.push_back(t);
                if (!r.chosen_delta && reached == supp) r.chosen_delta = t;
            });
            positive = wanted && r.chosen_delta.has_value();
            if (!r.chosen_delta)
                r.notes.push_back("no diverging transition reaches every marked place");
        }
    }
    if (positive) r.verdict = mode == Mode::exact ? Verdict::reachable : Verdict::coverable;

    if (adm.verdict == Admissibility::not_admissible) {
        auto places = supp.to_vector();
        for (std::size_t i = 0; i < places.size(); ++i)
            for (std::size_t j = i + 1; j < places.size(); ++j) {
                if (a.concurrency()[places[i].index].contains(places[j])) continue;
                auto c = classify_conflict(a, places[i], places[j]);
                c.path = a.path_to_original(c.path);
                c.path_to_x = a.path_to_original(c.path_to_x);
                c.path_to_y = a.path_to_original(c.path_to_y);
                if (c.decision_place && a.simple().is_inserted(*c.decision_place))
                    c.decision_place = a.simple().cluster_of(*c.decision_place).preset.front();
                r.conflicts.push_back(std::move(c));
            }
    }

    if (positive) r.witness = translate_witness(a, raw_witness(a, m, mode));

    // back to original ids
    const auto osize = onet.size();
    r.admissibility.verdict = adm.verdict;
    r.admissibility.candidates = resize_to(adm.candidates, osize);
    r.admissibility.missing = resize_to(adm.missing, osize);
    r.admissibility.conflicting = resize_to(adm.conflicting, osize);
    r.admissibility.unsafe = resize_to(adm.unsafe, osize);
    r.diverging.points = a.to_original(div.points);
    r.diverging.candidates = div.candidates.universe() ? a.to_original(div.candidates) : NodeSet(osize);
    r.diverging.dequeues = div.dequeues;
    auto remap = [&](const std::map<NodeId, NodeSet>& in, std::map<NodeId, NodeSet>& out) {
        for (const auto& [k, v] : in) {
            NodeSet key(net.size());
            key.insert(k);
            a.to_original(key).for_each([&](NodeId ok) {
                auto& slot = out.try_emplace(ok, osize).first->second;
                slot |= a.to_original(v);
            });
        }
    };
    remap(div.divinfo, r.diverging.divinfo);
    remap(div.reaches, r.diverging.reaches);
    remap(div.raw_reaches, r.diverging.raw_reaches);
    r.roles = assign_roles(a, r);
    return r;
}

namespace {

int role_rank(ColorRole r) {
    switch (r) {
        case ColorRole::conflicting: return 8;
        case ColorRole::marked: return 7;
        case ColorRole::missing: return 6;
        case ColorRole::diverging_place: return 5;
        case ColorRole::diverging_primary: return 4;
        case ColorRole::diverging_secondary: return 3;
        case ColorRole::conflict_path: return 2;
        case ColorRole::witness_path: return 1;
        case ColorRole::neutral: return 0;
    }
    return 0;
}

}  // namespace

RoleMap assign_roles(const NetAnalysis& a, const AnalysisReport& report, bool include_witness) {
    const auto& net = a.original().net;
    RoleMap roles;
    auto node = [&](NodeId n, ColorRole r) {
        auto [it, fresh] = roles.nodes.try_emplace(n, r);
        if (!fresh && role_rank(r) > role_rank(it->second)) it->second = r;
    };
    auto edge = [&](NodeId x, NodeId y, ColorRole r) {
        if (!net.has_arc(x, y)) return;
        auto [it, fresh] = roles.edges.try_emplace(Edge{x, y}, r);
        if (!fresh && role_rank(r) > role_rank(it->second)) it->second = r;
    };
    auto path = [&](const std::vector<NodeId>& p, ColorRole r) {
        for (std::size_t k = 0; k + 1 < p.size(); ++k) edge(p[k], p[k + 1], r);
        for (std::size_t k = 1; k + 1 < p.size(); ++k) node(p[k], r);
    };

    for (const auto& [p, c] : report.marking.tokens()) node(p, ColorRole::marked);
    report.admissibility.missing.for_each([&](NodeId p) { node(p, ColorRole::missing); });
    report.admissibility.conflicting.for_each([&](NodeId p) { node(p, ColorRole::conflicting); });
    for (const auto& c : report.conflicts) {
        path(c.path, ColorRole::conflict_path);
        path(c.path_to_x, ColorRole::conflict_path);
        path(c.path_to_y, ColorRole::conflict_path);
        if (c.decision_place) node(*c.decision_place, ColorRole::diverging_place);
    }

    if (report.chosen_delta && report.verdict != Verdict::not_reachable) {
        std::deque<std::pair<NodeId, int>> work{{*report.chosen_delta, 0}};
        std::set<NodeId> seen{*report.chosen_delta};
        while (!work.empty()) {
            auto [d, depth] = work.front();
            work.pop_front();
            auto r = net.is_place(d) ? ColorRole::diverging_place
                     : depth % 2 == 0 ? ColorRole::diverging_primary
                                      : ColorRole::diverging_secondary;
            node(d, r);
            auto it = report.diverging.reaches.find(d);
            if (it == report.diverging.reaches.end()) continue;
            auto members = it->second.to_vector();
            auto paths = disjoint_paths(net, d, members);
            if (paths.empty())
                for (auto t : members) paths.push_back(shortest_path(net, d, t));
            for (const auto& p : paths) path(p, r);
            for (auto t : members)
                if (report.diverging.points.contains(t) && seen.insert(t).second)
                    work.emplace_back(t, depth + 1);
        }
    }

    if (include_witness && report.witness) {
        for (const auto& [x, y] : report.witness->subnet_edges) edge(x, y, ColorRole::witness_path);
        for (auto n : report.witness->subnet_nodes) node(n, ColorRole::witness_path);
    }
    return roles;
}

AnalysisReport oracle_verdict(const WorkflowNet& wf, const Marking& m, Mode mode,
                              std::size_t cap) {
    const auto& net = wf.net;
    require_valid_marking(net, m);
    auto g = explore(wf, cap);
    AnalysisReport r;
    r.mode = mode;
    r.marking = m;
    r.engine = "oracle";
    r.soundness = "not required";
    auto conc = brute_concurrency(net, g);
    r.admissibility = check_admissibility(net, conc, m);
    bool cover = mode == Mode::cover;
    if (auto seq = brute_firing_sequence(net, g, m, cover)) {
        r.verdict = cover ? Verdict::coverable : Verdict::reachable;
        Witness w;
        Marking cur = Marking::single(wf.source);
        w.markings.push_back(cur);
        NodeSet nodes(net.size());
        nodes.insert(wf.source);
        for (auto t : *seq) {
            cur = fire(net, cur, t);
            w.sequence.push_back(t);
            w.markings.push_back(cur);
            nodes.insert(t);
            for (auto p : net.inputs(t)) {
                nodes.insert(p);
                w.subnet_edges.emplace_back(p, t);
            }
            for (auto p : net.outputs(t)) {
                nodes.insert(p);
                w.subnet_edges.emplace_back(t, p);
            }
        }
        std::sort(w.subnet_edges.begin(), w.subnet_edges.end());
        w.subnet_nodes = nodes.to_vector();
        r.witness = std::move(w);
    }
    r.notes.push_back("verdict computed by state-space exploration (" +
                      std::to_string(g.states.size()) + " states)");
    for (const auto& [p, c] : m.tokens()) r.roles.nodes[p] = ColorRole::marked;
    return r;
}

}  // namespace wfreach
