#include "wfreach/oracle.hpp"

#include <algorithm>

namespace wfreach {

namespace {

class Composer {
public:
    Composer(std::uint64_t seed, const GeneratorParams& params) : rng_(seed), params_(params) {}

    WorkflowNet run() {
        auto lo = std::max<std::size_t>(params_.min_places, 2);
        auto hi = std::max(lo, params_.max_places);
        auto total = pick(lo, hi);
        auto source = builder_.add_place("i");
        auto sink = builder_.add_place("o");
        block(source, sink, total - 2, 0);
        return WorkflowNet{builder_.build(), source, sink};
    }

private:
    std::size_t pick(std::size_t lo, std::size_t hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
    }
    bool chance(unsigned percent) { return rng_() % 100 < percent; }

    NodeId place() { return builder_.add_place("p" + std::to_string(++places_)); }
    NodeId trans() { return builder_.add_transition("t" + std::to_string(++transitions_)); }

    // Random composition of total into k non-negative parts.
    std::vector<std::size_t> split(std::size_t total, std::size_t k) {
        std::vector<std::size_t> cuts;
        for (std::size_t j = 0; j + 1 < k; ++j) cuts.push_back(pick(0, total));
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::size_t> parts;
        std::size_t prev = 0;
        for (auto c : cuts) {
            parts.push_back(c - prev);
            prev = c;
        }
        parts.push_back(total - prev);
        return parts;
    }

    void chain(NodeId entry, NodeId exit, std::size_t budget) {
        auto cur = entry;
        for (std::size_t k = 0; k < budget; ++k) {
            auto t = trans();
            auto p = place();
            builder_.add_arc(cur, t);
            builder_.add_arc(t, p);
            cur = p;
        }
        auto t = trans();
        builder_.add_arc(cur, t);
        builder_.add_arc(t, exit);
    }

    // A place-to-place fragment from entry to exit creating exactly budget inner places.
    void block(NodeId entry, NodeId exit, std::size_t budget, std::size_t depth) {
        if (depth >= params_.max_depth || budget == 0) {
            if (budget == 0 && depth < params_.max_depth && chance(20)) {
                chain(entry, exit, 0);
                chain(entry, exit, 0);
            } else {
                chain(entry, exit, budget);
            }
            return;
        }
        enum Kind { seq, xor_, and_, lanes, region };
        std::vector<Kind> kinds{seq, seq, xor_};
        if (budget >= 2 && params_.and_width >= 2) kinds.insert(kinds.end(), {and_, and_});
        if (params_.free_form_regions && budget >= 5) kinds.push_back(lanes);
        if (params_.free_form_regions && budget >= 4 && params_.and_width >= 2)
            kinds.push_back(region);
        switch (kinds[rng_() % kinds.size()]) {
            case seq: {
                auto mid = place();
                auto parts = split(budget - 1, 2);
                block(entry, mid, parts[0], depth + 1);
                block(mid, exit, parts[1], depth + 1);
                break;
            }
            case xor_: {
                auto k = pick(2, std::max<std::size_t>(2, params_.xor_width));
                for (auto part : split(budget, k)) block(entry, exit, part, depth + 1);
                break;
            }
            case and_: {
                auto k = pick(2, std::min(params_.and_width, budget));
                auto fork = trans();
                auto join = trans();
                builder_.add_arc(entry, fork);
                builder_.add_arc(join, exit);
                auto extra = split(budget - k, k);
                for (std::size_t j = 0; j < k; ++j) branch(fork, join, 1 + extra[j], depth + 1);
                break;
            }
            case lanes: make_lanes(entry, exit, budget, depth); break;
            case region: make_region(entry, exit, budget, depth); break;
        }
    }

    // Concurrent branch from transition fork to transition join.
    void branch(NodeId fork, NodeId join, std::size_t budget, std::size_t depth) {
        if (budget == 1) {
            auto p = place();
            builder_.add_arc(fork, p);
            builder_.add_arc(p, join);
            return;
        }
        auto a = place();
        auto b = place();
        builder_.add_arc(fork, a);
        builder_.add_arc(b, join);
        block(a, b, budget - 2, depth);
    }

    // Several lanes; each choice transition puts one token on one alternative per lane.
    void make_lanes(NodeId entry, NodeId exit, std::size_t budget, std::size_t depth) {
        std::size_t n = pick(2, std::min<std::size_t>(3, budget / 2));
        std::vector<std::size_t> alts(n, 1);
        std::size_t used = 2 * n;
        for (std::size_t j = 0; j < n && used < budget; ++j)
            if (j == 0 || chance(50)) {
                ++alts[j];
                ++used;
            }
        if (used > budget) {
            chain(entry, exit, budget);
            return;
        }
        auto widest = *std::max_element(alts.begin(), alts.end());
        auto choices = std::max<std::size_t>(2, pick(widest, widest + 1));
        std::vector<std::vector<NodeId>> alt_places(n);
        std::vector<NodeId> merges;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t r = 0; r < alts[j]; ++r) alt_places[j].push_back(place());
            merges.push_back(place());
        }
        std::vector<std::size_t> offset(n);
        for (auto& o : offset) o = pick(0, 3);
        for (std::size_t k = 0; k < choices; ++k) {
            auto t = trans();
            builder_.add_arc(entry, t);
            for (std::size_t j = 0; j < n; ++j)
                builder_.add_arc(t, alt_places[j][(k + offset[j]) % alts[j]]);
        }
        std::vector<std::pair<NodeId, NodeId>> segments;
        for (std::size_t j = 0; j < n; ++j)
            for (auto a : alt_places[j]) segments.emplace_back(a, merges[j]);
        auto parts = split(budget - used, segments.size());
        for (std::size_t s = 0; s < segments.size(); ++s)
            block(segments[s].first, segments[s].second, parts[s], depth + 1);
        auto join = trans();
        for (auto m : merges) builder_.add_arc(m, join);
        builder_.add_arc(join, exit);
    }

    // Acyclic marked-graph region between a fork and a join transition.
    void make_region(NodeId entry, NodeId exit, std::size_t budget, std::size_t depth) {
        std::size_t steps = pick(3, 4);
        std::vector<std::pair<std::size_t, std::size_t>> channels;
        std::vector<bool> has_out(steps, false);
        for (std::size_t b = 1; b < steps; ++b) {
            auto a = pick(0, b - 1);
            channels.emplace_back(a, b);
            has_out[a] = true;
        }
        for (std::size_t a = 0; a + 1 < steps; ++a)
            if (!has_out[a]) channels.emplace_back(a, pick(a + 1, steps - 1));
        if (chance(50)) {
            auto a = pick(0, steps - 2);
            channels.emplace_back(a, pick(a + 1, steps - 1));
        }
        if (channels.size() > budget) {
            chain(entry, exit, budget);
            return;
        }
        std::vector<NodeId> u;
        for (std::size_t k = 0; k < steps; ++k) u.push_back(trans());
        builder_.add_arc(entry, u.front());
        builder_.add_arc(u.back(), exit);
        auto parts = split(budget - channels.size(), channels.size());
        for (std::size_t c = 0; c < channels.size(); ++c)
            branch(u[channels[c].first], u[channels[c].second], 1 + parts[c], depth + 1);
    }

    std::mt19937_64 rng_;
    GeneratorParams params_;
    NetBuilder builder_;
    std::size_t places_ = 0;
    std::size_t transitions_ = 0;
};

}  // namespace

WorkflowNet generate_sound_afw(std::uint64_t seed, const GeneratorParams& params) {
    return Composer(seed, params).run();
}

}  // namespace wfreach
