#include "wfreach/diverge.hpp"

#include <deque>
#include <functional>

namespace wfreach {

DivergeData compute_diverging_points(const PetriNet& net, const PostDomData& pd,
                                     const NodeSet& marked, WorklistMode mode) {
    if (marked.count() < 2)
        throw Error("INVALID_ARGUMENT", "diverging points need at least two marked places");
    const auto n = net.size();
    DivergeData d;
    d.candidates = NodeSet(n);

    auto info_of = [&](NodeId x) -> NodeSet& {
        return d.divinfo.try_emplace(x, n).first->second;
    };
    std::deque<NodeId> work;
    marked.for_each([&](NodeId x) {
        info_of(x).insert(x);
        work.push_back(x);
    });

    const std::size_t literal_limit = 50'000'000;
    while (!work.empty()) {
        auto x = work.front();
        work.pop_front();
        if (++d.dequeues > literal_limit)
            throw Error("LIMIT_EXCEEDED", "literal worklist exceeded its step limit");
        const auto from = info_of(x);
        pd.frontier[x.index].for_each([&](NodeId delta) {
            d.candidates.insert(delta);
            bool changed = info_of(delta).merge(from);
            auto& r = d.raw_reaches.try_emplace(delta, n).first->second;
            if (!r.contains(x)) {
                r.insert(x);
                changed = true;
            }
            if (changed || mode == WorklistMode::literal) work.push_back(delta);
        });
    }

    // Marked places keep their self entry only when they are candidates too.
    for (auto it = d.divinfo.begin(); it != d.divinfo.end();) {
        if (!d.candidates.contains(it->first))
            it = d.divinfo.erase(it);
        else
            ++it;
    }

    d.points = NodeSet(n);
    d.candidates.for_each([&](NodeId c) {
        if (d.raw_reaches.at(c).count() >= 2) d.points.insert(c);
    });

    std::map<NodeId, NodeSet> expanded;
    std::function<const NodeSet&(NodeId)> expand = [&](NodeId x) -> const NodeSet& {
        if (auto it = expanded.find(x); it != expanded.end()) return it->second;
        NodeSet out(n);
        if (d.points.contains(x) || marked.contains(x) || !d.raw_reaches.count(x)) {
            out.insert(x);
        } else {
            d.raw_reaches.at(x).for_each([&](NodeId y) { out |= expand(y); });
        }
        return expanded.emplace(x, std::move(out)).first->second;
    };
    d.points.for_each([&](NodeId p) {
        NodeSet out(n);
        d.raw_reaches.at(p).for_each([&](NodeId y) { out |= expand(y); });
        d.reaches.emplace(p, std::move(out));
    });
    return d;
}

}  // namespace wfreach
