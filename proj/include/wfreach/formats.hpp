#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "wfreach/net.hpp"

namespace wfreach {

enum class NetFormat { automatic, native, pnml };

NetFormat parse_format_name(std::string_view name);

WorkflowNet parse_native(std::string_view text);
WorkflowNet parse_pnml(std::string_view xml);
WorkflowNet parse_net(std::string_view text, NetFormat format = NetFormat::automatic);
WorkflowNet load_net(const std::filesystem::path& path, NetFormat format = NetFormat::automatic);

// Declarations are emitted in index order so a re-parse keeps every NodeId.
std::string dump_native(const WorkflowNet& wf);

// Accepts "[p3,p5,p12^2]"; brackets optional, whitespace ignored.
Marking parse_marking(const PetriNet& net, std::string_view literal);

enum class ColorRole {
    marked,
    missing,
    conflicting,
    conflict_path,
    diverging_primary,
    diverging_secondary,
    diverging_place,
    witness_path,
    neutral,
};

const char* role_name(ColorRole r);
const char* role_color(ColorRole r);

using Edge = std::pair<NodeId, NodeId>;

struct RoleMap {
    std::map<NodeId, ColorRole> nodes;
    std::map<Edge, ColorRole> edges;
};

std::string export_dot(const WorkflowNet& wf, const RoleMap& roles, bool with_legend = false);

}  // namespace wfreach
