#include "wfreach/postdom.hpp"

#include <cassert>
#include <deque>
#include <random>

namespace wfreach {

NodeId PostDomData::ipdom_of(NodeId n) const {
    auto v = ipdom[n.index];
    if (v == no_ipdom) throw Error("INTERNAL", "immediate post-dominator undefined");
    return NodeId(static_cast<std::uint32_t>(v));
}

bool PostDomData::post_dominates(NodeId a, NodeId b) const {
    auto cur = b;
    while (true) {
        if (cur == a) return true;
        auto next = ipdom[cur.index];
        if (next == no_ipdom || NodeId(static_cast<std::uint32_t>(next)) == cur) return false;
        cur = NodeId(static_cast<std::uint32_t>(next));
    }
}

NodeId com_imm_post_dom(const std::vector<std::int64_t>& ipdom, const TopoOrder& topo, NodeId a,
                        NodeId b) {
    auto up = [&](NodeId n) {
        auto v = ipdom[n.index];
        if (v == no_ipdom) throw Error("INTERNAL", "climb through undefined post-dominator");
        return NodeId(static_cast<std::uint32_t>(v));
    };
    while (a != b) {
        while (topo.rank[a.index] < topo.rank[b.index]) a = up(a);
        while (topo.rank[b.index] < topo.rank[a.index]) b = up(b);
    }
    return a;
}

std::vector<std::int64_t> compute_immediate_post_dominators(const PetriNet& net,
                                                            const TopoOrder& topo,
                                                            std::uint64_t shuffle_seed,
                                                            std::size_t* passes) {
    std::vector<std::int64_t> ipdom(net.size(), no_ipdom);
    std::mt19937_64 rng(shuffle_seed);
    for (auto x : topo.order)
        if (net.outputs(x).empty()) ipdom[x.index] = x.index;

    bool changed = true;
    std::size_t productive = 0, rounds = 0;
    while (changed) {
        changed = false;
        ++rounds;
        for (auto x : topo.order) {
            auto outs = net.outputs(x);
            if (outs.empty()) continue;
            std::vector<NodeId> defined;
            for (auto s : outs)
                if (ipdom[s.index] != no_ipdom) defined.push_back(s);
            if (defined.empty()) continue;
            auto first = defined.front();
            if (shuffle_seed != 0) first = defined[rng() % defined.size()];
            auto cur = first;
            for (auto s : defined)
                if (s != first) cur = com_imm_post_dom(ipdom, topo, s, cur);
            if (ipdom[x.index] != cur.index) {
                ipdom[x.index] = cur.index;
                changed = true;
            }
        }
        if (changed) ++productive;
    }
    assert(productive <= 1);
    if (passes) *passes = rounds;
    return ipdom;
}

std::vector<NodeSet> post_dominance_frontier(const PetriNet& net,
                                             const std::vector<std::int64_t>& ipdom) {
    std::vector<NodeSet> pdf(net.size(), NodeSet(net.size()));
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId x(i);
        auto outs = net.outputs(x);
        if (outs.size() < 2 || ipdom[i] == no_ipdom) continue;
        auto stop = ipdom[i];
        for (auto s : outs) {
            auto runner = s;
            while (static_cast<std::int64_t>(runner.index) != stop) {
                pdf[runner.index].insert(x);
                auto next = ipdom[runner.index];
                if (next == no_ipdom || next == runner.index) break;
                runner = NodeId(static_cast<std::uint32_t>(next));
            }
        }
    }
    return pdf;
}

PostDomData compute_post_dominance(const PetriNet& net, const TopoOrder& topo) {
    PostDomData pd;
    pd.ipdom = compute_immediate_post_dominators(net, topo, 0, &pd.passes);
    pd.frontier = post_dominance_frontier(net, pd.ipdom);
    return pd;
}

NodeSet iterated_pdf(const PetriNet& net, const PostDomData& pd, NodeId source, NodeId sink,
                     const NodeSet& nodes) {
    // With the extra edge, the source joins the frontier of its strict post-dominators below the sink.
    NodeSet above_source(net.size());
    for (auto cur = source; pd.has_ipdom(cur);) {
        auto next = pd.ipdom_of(cur);
        if (next == cur || next == sink) break;
        above_source.insert(next);
        cur = next;
    }

    NodeSet result(net.size());
    std::deque<NodeId> work;
    nodes.for_each([&](NodeId n) { work.push_back(n); });
    NodeSet queued = nodes;
    while (!work.empty()) {
        auto x = work.front();
        work.pop_front();
        auto front = pd.frontier[x.index];
        if (above_source.contains(x)) front.insert(source);
        front.for_each([&](NodeId d) {
            result.insert(d);
            if (!queued.contains(d)) {
                queued.insert(d);
                work.push_back(d);
            }
        });
    }
    return result;
}

}  // namespace wfreach
