#pragma once

#include <set>
#include <string>
#include <vector>

#include "wfreach/decide.hpp"
#include "wfreach/formats.hpp"

namespace wfreach::testing {

inline WorkflowNet fixture(const std::string& name) {
    return load_net(std::string(WFREACH_FIXTURE_DIR) + "/" + name);
}

inline NodeId id(const PetriNet& net, const std::string& label) { return net.at(label); }

inline std::set<std::string> names(const PetriNet& net, const NodeSet& s) {
    auto v = labels_of(net, s);
    return {v.begin(), v.end()};
}

inline std::set<std::string> names(const PetriNet& net, const std::vector<NodeId>& v) {
    std::set<std::string> out;
    for (auto n : v) out.insert(net.label(n));
    return out;
}

inline NodeSet set_of(const PetriNet& net, const std::vector<std::string>& labels) {
    NodeSet s = net.empty_set();
    for (const auto& l : labels) s.insert(net.at(l));
    return s;
}

using Names = std::set<std::string>;

inline WorkflowNet sequence_net() {
    return parse_native("place i\nplace o\ntrans t\narc i t\narc t o\nsource i\nsink o");
}

// Small sound nets for the brute-force checks.
inline std::vector<WorkflowNet> corpus(std::size_t count, GeneratorParams params = {},
                                       std::uint64_t first_seed = 1) {
    std::vector<WorkflowNet> nets;
    for (std::uint64_t s = first_seed; nets.size() < count; ++s)
        nets.push_back(generate_sound_afw(s, params));
    return nets;
}

}  // namespace wfreach::testing
