#include "wfreach/concurrency.hpp"

#include <map>

namespace wfreach {

ConcurrencyRelation determine_concurrency(const PetriNet& net, const ReachSets& reach) {
    // siblings[x] = other outputs of the transitions that output x
    std::map<NodeId, NodeSet> siblings;
    for (auto t : net.transitions()) {
        auto outs = net.outputs(t);
        if (outs.size() < 2) continue;
        for (auto x : outs) {
            auto& s = siblings.try_emplace(x, net.size()).first->second;
            for (auto y : outs)
                if (y != x) s.insert(y);
        }
    }
    ConcurrencyRelation conc(net.size(), NodeSet(net.size()));
    for (const auto& [x, ys] : siblings) {
        ys.for_each([&](NodeId y) {
            auto only_x = reach[x.index] - reach[y.index];
            only_x.for_each([&](NodeId a) { conc[a.index] |= reach[y.index] - reach[a.index]; });
        });
    }
    return conc;
}

const char* admissibility_name(Admissibility a) {
    switch (a) {
        case Admissibility::maximum_admissible: return "maximum-admissible";
        case Admissibility::admissible: return "admissible";
        case Admissibility::not_admissible: return "not-admissible";
    }
    return "not-admissible";
}

AdmissibilityResult check_admissibility(const PetriNet& net, const ConcurrencyRelation& conc,
                                        const Marking& m) {
    require_valid_marking(net, m);
    AdmissibilityResult r;
    auto supp = m.support(net.size());
    r.candidates = net.all_places();
    r.unsafe = NodeSet(net.size());
    for (const auto& [p, c] : m.tokens()) {
        auto compatible = conc[p.index];
        compatible.insert(p);
        r.candidates &= compatible;
        if (c >= 2) r.unsafe.insert(p);
    }
    r.missing = r.candidates - supp;
    r.conflicting = (supp - r.candidates) | r.unsafe;
    if (!r.conflicting.empty())
        r.verdict = Admissibility::not_admissible;
    else if (r.missing.empty())
        r.verdict = Admissibility::maximum_admissible;
    else
        r.verdict = Admissibility::admissible;
    return r;
}

const char* conflict_kind_name(ConflictKind k) {
    switch (k) {
        case ConflictKind::forward_path: return "forward-path";
        case ConflictKind::backward_path: return "backward-path";
        case ConflictKind::exclusive: return "exclusive";
    }
    return "exclusive";
}

}  // namespace wfreach
