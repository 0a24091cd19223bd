#include "wfreach/net.hpp"

#include <algorithm>

namespace wfreach {

std::optional<NodeId> PetriNet::find(std::string_view label) const {
    auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
}

NodeId PetriNet::at(std::string_view label) const {
    auto n = find(label);
    if (!n) throw Error("UNKNOWN_NODE", "unknown node '" + std::string(label) + "'");
    return *n;
}

NodeSet PetriNet::preset(NodeId n) const {
    NodeSet s(size());
    for (auto x : pre_[n.index]) s.insert(x);
    return s;
}

NodeSet PetriNet::postset(NodeId n) const {
    NodeSet s(size());
    for (auto x : post_[n.index]) s.insert(x);
    return s;
}

bool PetriNet::has_arc(NodeId from, NodeId to) const {
    if (from.index >= size() || to.index >= size()) return false;
    const auto& out = post_[from.index];
    return std::binary_search(out.begin(), out.end(), to);
}

std::vector<std::pair<NodeId, NodeId>> PetriNet::arcs() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (auto y : post_[i]) out.emplace_back(NodeId(i), y);
    return out;
}

std::size_t PetriNet::arc_count() const {
    std::size_t c = 0;
    for (const auto& p : post_) c += p.size();
    return c;
}

NodeSet PetriNet::all_places() const {
    NodeSet s(size());
    for (auto p : places_) s.insert(p);
    return s;
}

NodeSet PetriNet::all_transitions() const {
    NodeSet s(size());
    for (auto t : transitions_) s.insert(t);
    return s;
}

NodeId NetBuilder::add(const std::string& label, NodeKind kind) {
    if (label.empty()) throw Error("PARSE_ERROR", "empty node label");
    if (net_.by_label_.count(label))
        throw Error("DUPLICATE_NODE", "duplicate node '" + label + "'");
    NodeId id(net_.labels_.size());
    net_.labels_.push_back(label);
    net_.kinds_.push_back(kind);
    net_.pre_.emplace_back();
    net_.post_.emplace_back();
    (kind == NodeKind::place ? net_.places_ : net_.transitions_).push_back(id);
    net_.by_label_.emplace(label, id);
    return id;
}

NodeId NetBuilder::add_place(const std::string& label) { return add(label, NodeKind::place); }
NodeId NetBuilder::add_transition(const std::string& label) {
    return add(label, NodeKind::transition);
}

bool NetBuilder::contains(std::string_view label) const {
    return net_.by_label_.count(std::string(label)) != 0;
}

NodeId NetBuilder::id(std::string_view label) const { return net_.at(label); }

void NetBuilder::add_arc(NodeId from, NodeId to) {
    if (from.index >= net_.size() || to.index >= net_.size())
        throw Error("UNKNOWN_NODE", "arc endpoint out of range");
    if (net_.kinds_[from.index] == net_.kinds_[to.index])
        throw Error("BAD_ARC", "flow must alternate place/transition: " +
                                   net_.labels_[from.index] + " -> " + net_.labels_[to.index]);
    auto& out = net_.post_[from.index];
    if (std::find(out.begin(), out.end(), to) != out.end())
        throw Error("DUPLICATE_ARC", "duplicate arc " + net_.labels_[from.index] + " -> " +
                                         net_.labels_[to.index]);
    out.push_back(to);
    net_.pre_[to.index].push_back(from);
}

void NetBuilder::add_arc(std::string_view from, std::string_view to) {
    add_arc(net_.at(from), net_.at(to));
}

PetriNet NetBuilder::build() {
    for (auto& v : net_.pre_) std::sort(v.begin(), v.end());
    for (auto& v : net_.post_) std::sort(v.begin(), v.end());
    return std::move(net_);
}

Marking::Marking(std::initializer_list<std::pair<NodeId, std::uint32_t>> init) {
    for (const auto& [p, c] : init) add(p, c);
}

void Marking::add(NodeId place, std::uint32_t count) {
    if (count) tokens_[place] += count;
}

void Marking::remove(NodeId place, std::uint32_t count) {
    auto it = tokens_.find(place);
    if (it == tokens_.end() || it->second < count)
        throw Error("INTERNAL", "token underflow");
    it->second -= count;
    if (it->second == 0) tokens_.erase(it);
}

std::uint32_t Marking::count(NodeId place) const {
    auto it = tokens_.find(place);
    return it == tokens_.end() ? 0 : it->second;
}

std::uint32_t Marking::max_multiplicity() const {
    std::uint32_t m = 0;
    for (const auto& [p, c] : tokens_) m = std::max(m, c);
    return m;
}

NodeSet Marking::support(std::size_t universe) const {
    NodeSet s(universe);
    for (const auto& [p, c] : tokens_) s.insert(p);
    return s;
}

std::vector<NodeId> Marking::support_vector() const {
    std::vector<NodeId> out;
    for (const auto& [p, c] : tokens_) out.push_back(p);
    return out;
}

bool Marking::covers(const Marking& other) const {
    for (const auto& [p, c] : other.tokens_)
        if (count(p) < c) return false;
    return true;
}

Marking Marking::of(const NodeSet& places) {
    Marking m;
    places.for_each([&](NodeId p) { m.add(p); });
    return m;
}

void require_valid_marking(const PetriNet& net, const Marking& m) {
    if (m.empty()) throw Error("EMPTY_MARKING", "marking is empty");
    for (const auto& [p, c] : m.tokens()) {
        if (p.index >= net.size())
            throw Error("UNKNOWN_PLACE", "unknown place #" + std::to_string(p.index));
        if (!net.is_place(p))
            throw Error("NOT_A_PLACE", "'" + net.label(p) + "' is a transition, not a place");
    }
}

std::string format_marking(const PetriNet& net, const Marking& m) {
    std::string out = "[";
    bool first = true;
    for (const auto& [p, c] : m.tokens()) {
        if (!first) out += ",";
        first = false;
        out += net.label(p);
        if (c != 1) out += "^" + std::to_string(c);
    }
    return out + "]";
}

std::vector<std::string> labels_of(const PetriNet& net, const NodeSet& s) {
    std::vector<std::string> out;
    s.for_each([&](NodeId n) { out.push_back(net.label(n)); });
    return out;
}

}  // namespace wfreach
