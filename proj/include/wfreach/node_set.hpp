#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace wfreach {

struct NodeId {
    std::uint32_t index = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t i) : index(i) {}
    constexpr explicit NodeId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
    constexpr explicit NodeId(int i) : index(static_cast<std::uint32_t>(i)) {}

    friend constexpr bool operator==(NodeId a, NodeId b) { return a.index == b.index; }
    friend constexpr auto operator<=>(NodeId a, NodeId b) { return a.index <=> b.index; }
};

// Fixed-universe bitset over dense node indices.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe)
        : size_(universe), words_((universe + 63) / 64, 0) {}

    std::size_t universe() const { return size_; }

    void insert(NodeId n) { words_[n.index >> 6] |= bit(n); }
    void erase(NodeId n) { words_[n.index >> 6] &= ~bit(n); }
    bool contains(NodeId n) const {
        return n.index < size_ && (words_[n.index >> 6] & bit(n)) != 0;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    NodeSet& operator|=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    NodeSet& operator&=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    NodeSet& operator-=(const NodeSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
    friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

    // |= that reports whether anything was added
    bool merge(const NodeSet& o) {
        bool changed = false;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_[i] | o.words_[i];
            changed |= (w != words_[i]);
            words_[i] = w;
        }
        return changed;
    }

    bool subset_of(const NodeSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const NodeSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    std::size_t intersection_count(const NodeSet& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }

    friend bool operator==(const NodeSet& a, const NodeSet& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits) {
                auto b = static_cast<std::size_t>(std::countr_zero(bits));
                f(NodeId(static_cast<std::uint32_t>(w * 64 + b)));
                bits &= bits - 1;
            }
        }
    }

    std::vector<NodeId> to_vector() const {
        std::vector<NodeId> out;
        for_each([&](NodeId n) { out.push_back(n); });
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    static std::uint64_t bit(NodeId n) { return std::uint64_t{1} << (n.index & 63); }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct NodeSetHash {
    std::size_t operator()(const NodeSet& s) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : s.words()) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace wfreach
