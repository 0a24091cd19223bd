#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wfreach/node_set.hpp"

namespace wfreach {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class NodeKind : std::uint8_t { place, transition };

// Immutable bipartite net. Dense indices follow declaration order.
class PetriNet {
public:
    std::size_t size() const { return labels_.size(); }
    std::size_t place_count() const { return places_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }

    NodeKind kind(NodeId n) const { return kinds_[n.index]; }
    bool is_place(NodeId n) const { return kinds_[n.index] == NodeKind::place; }
    bool is_transition(NodeId n) const { return kinds_[n.index] == NodeKind::transition; }
    const std::string& label(NodeId n) const { return labels_[n.index]; }

    std::optional<NodeId> find(std::string_view label) const;
    NodeId at(std::string_view label) const;

    std::span<const NodeId> inputs(NodeId n) const { return pre_[n.index]; }
    std::span<const NodeId> outputs(NodeId n) const { return post_[n.index]; }
    NodeSet preset(NodeId n) const;
    NodeSet postset(NodeId n) const;
    bool has_arc(NodeId from, NodeId to) const;

    const std::vector<NodeId>& places() const { return places_; }
    const std::vector<NodeId>& transitions() const { return transitions_; }
    std::vector<std::pair<NodeId, NodeId>> arcs() const;
    std::size_t arc_count() const;

    NodeSet empty_set() const { return NodeSet(size()); }
    NodeSet all_places() const;
    NodeSet all_transitions() const;

private:
    friend class NetBuilder;

    std::vector<std::string> labels_;
    std::vector<NodeKind> kinds_;
    std::vector<std::vector<NodeId>> pre_;
    std::vector<std::vector<NodeId>> post_;
    std::vector<NodeId> places_;
    std::vector<NodeId> transitions_;
    std::unordered_map<std::string, NodeId> by_label_;
};

class NetBuilder {
public:
    NodeId add_place(const std::string& label);
    NodeId add_transition(const std::string& label);
    void add_arc(NodeId from, NodeId to);
    void add_arc(std::string_view from, std::string_view to);
    bool contains(std::string_view label) const;
    NodeId id(std::string_view label) const;
    PetriNet build();

private:
    NodeId add(const std::string& label, NodeKind kind);
    PetriNet net_;
};

struct WorkflowNet {
    PetriNet net;
    NodeId source;
    NodeId sink;
};

class Marking {
public:
    Marking() = default;
    Marking(std::initializer_list<std::pair<NodeId, std::uint32_t>> init);

    void add(NodeId place, std::uint32_t count = 1);
    void remove(NodeId place, std::uint32_t count = 1);
    std::uint32_t count(NodeId place) const;
    bool empty() const { return tokens_.empty(); }
    std::size_t support_size() const { return tokens_.size(); }
    std::uint32_t max_multiplicity() const;

    NodeSet support(std::size_t universe) const;
    std::vector<NodeId> support_vector() const;
    bool covers(const Marking& other) const;

    const std::map<NodeId, std::uint32_t>& tokens() const { return tokens_; }

    friend bool operator==(const Marking&, const Marking&) = default;

    static Marking of(const NodeSet& places);
    static Marking single(NodeId place) { return Marking{{place, 1}}; }

private:
    std::map<NodeId, std::uint32_t> tokens_;
};

// Rejects empty markings and ids that are not places of net.
void require_valid_marking(const PetriNet& net, const Marking& m);

std::string format_marking(const PetriNet& net, const Marking& m);
std::vector<std::string> labels_of(const PetriNet& net, const NodeSet& s);

}  // namespace wfreach
