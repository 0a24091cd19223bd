#include "wfreach/formats.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace wfreach {

namespace {

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, const std::string& msg) {
    throw Error("PARSE_ERROR",
                "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
}

bool valid_label(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (std::isspace(u) || c == ',' || c == '[' || c == ']' || c == '^' || c == '#' ||
            c == '"')
            return false;
    }
    return true;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct Token {
    std::string text;
    std::size_t col;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

}  // namespace

NetFormat parse_format_name(std::string_view name) {
    if (name == "auto" || name.empty()) return NetFormat::automatic;
    if (name == "native" || name == "wfnet") return NetFormat::native;
    if (name == "pnml") return NetFormat::pnml;
    throw Error("INVALID_ARGUMENT", "unknown format '" + std::string(name) + "'");
}

WorkflowNet parse_native(std::string_view text) {
    struct PendingArc {
        std::string from, to;
        std::size_t line, col;
    };
    NetBuilder builder;
    std::vector<PendingArc> arcs;
    std::optional<std::pair<std::string, std::pair<std::size_t, std::size_t>>> source, sink;

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const auto& kw = toks[0].text;
        auto expect = [&](std::size_t n) {
            if (toks.size() != n + 1)
                parse_fail(lineno, toks[0].col,
                           "'" + kw + "' expects " + std::to_string(n) + " argument(s)");
            for (std::size_t k = 1; k < toks.size(); ++k)
                if (!valid_label(toks[k].text))
                    parse_fail(lineno, toks[k].col, "invalid identifier '" + toks[k].text + "'");
        };
        try {
            if (kw == "place") {
                expect(1);
                builder.add_place(toks[1].text);
            } else if (kw == "trans" || kw == "transition") {
                expect(1);
                builder.add_transition(toks[1].text);
            } else if (kw == "arc") {
                expect(2);
                arcs.push_back({toks[1].text, toks[2].text, lineno, toks[1].col});
            } else if (kw == "source" || kw == "sink") {
                expect(1);
                auto& slot = kw == "source" ? source : sink;
                if (slot) parse_fail(lineno, toks[0].col, "duplicate '" + kw + "' declaration");
                slot = {toks[1].text, {lineno, toks[1].col}};
            } else {
                parse_fail(lineno, toks[0].col, "unknown directive '" + kw + "'");
            }
        } catch (const Error& e) {
            if (e.code() == "PARSE_ERROR") throw;
            parse_fail(lineno, toks[0].col, e.what());
        }
        if (nl == text.size()) break;
    }

    for (const auto& a : arcs) {
        if (!builder.contains(a.from))
            parse_fail(a.line, a.col, "undeclared node '" + a.from + "'");
        if (!builder.contains(a.to)) parse_fail(a.line, a.col, "undeclared node '" + a.to + "'");
        try {
            builder.add_arc(a.from, a.to);
        } catch (const Error& e) {
            parse_fail(a.line, a.col, e.what());
        }
    }

    auto resolve = [&](const auto& slot, const char* what) {
        if (!slot) throw Error("PARSE_ERROR", std::string("missing '") + what + "' declaration");
        const auto& [label, where] = *slot;
        if (!builder.contains(label))
            parse_fail(where.first, where.second, "undeclared node '" + label + "'");
        return label;
    };
    auto src_label = resolve(source, "source");
    auto snk_label = resolve(sink, "sink");
    auto net = builder.build();
    auto src = net.at(src_label), snk = net.at(snk_label);
    if (!net.is_place(src))
        parse_fail(source->second.first, source->second.second, "source must be a place");
    if (!net.is_place(snk))
        parse_fail(sink->second.first, sink->second.second, "sink must be a place");
    return WorkflowNet{std::move(net), src, snk};
}

WorkflowNet parse_pnml(std::string_view xml) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw Error("PARSE_ERROR", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    auto root = doc.get_child_optional("pnml");
    if (!root) throw Error("PARSE_ERROR", "missing <pnml> root element");
    const pt::ptree* net_node = nullptr;
    for (const auto& [name, child] : *root) {
        if (name != "net") continue;
        if (net_node) throw Error("PARSE_ERROR", "multiple <net> elements unsupported");
        net_node = &child;
    }
    if (!net_node) throw Error("PARSE_ERROR", "missing <net> element");

    const pt::ptree* body = net_node;
    int pages = 0;
    for (const auto& [name, child] : *net_node)
        if (name == "page") {
            ++pages;
            body = &child;
        }
    if (pages > 1) throw Error("PARSE_ERROR", "multi-page PNML unsupported");

    auto attr = [](const pt::ptree& node, const char* key) -> std::string {
        auto v = node.get_optional<std::string>(std::string("<xmlattr>.") + key);
        return v ? *v : std::string();
    };

    NetBuilder builder;
    struct PendingArc {
        std::string from, to;
    };
    std::vector<PendingArc> arcs;
    for (const auto& [name, child] : *body) {
        if (name == "page") throw Error("PARSE_ERROR", "nested pages unsupported");
        if (name == "place" || name == "transition") {
            auto id = attr(child, "id");
            if (!valid_label(id)) throw Error("PARSE_ERROR", "invalid " + name + " id '" + id + "'");
            if (name == "place")
                builder.add_place(id);
            else
                builder.add_transition(id);
        } else if (name == "arc") {
            auto from = attr(child, "source"), to = attr(child, "target");
            if (auto ins = child.get_optional<std::string>("inscription.text")) {
                if (trim(*ins) != "1") throw Error("WEIGHTED_ARC", "weighted arcs unsupported");
            }
            arcs.push_back({from, to});
        }
    }
    for (const auto& a : arcs) {
        if (!builder.contains(a.from) || !builder.contains(a.to))
            throw Error("UNKNOWN_NODE", "arc references unknown node " + a.from + " -> " + a.to);
        builder.add_arc(a.from, a.to);
    }
    auto net = builder.build();

    std::optional<NodeId> src, snk;
    for (auto p : net.places()) {
        if (net.inputs(p).empty()) {
            if (src) throw Error("AMBIGUOUS_SOURCE", "ambiguous source");
            src = p;
        }
        if (net.outputs(p).empty()) {
            if (snk) throw Error("AMBIGUOUS_SINK", "ambiguous sink");
            snk = p;
        }
    }
    if (!src) throw Error("AMBIGUOUS_SOURCE", "no source place (every place has an input)");
    if (!snk) throw Error("AMBIGUOUS_SINK", "no sink place (every place has an output)");
    return WorkflowNet{std::move(net), *src, *snk};
}

WorkflowNet parse_net(std::string_view text, NetFormat format) {
    if (format == NetFormat::automatic) {
        auto first = text.find_first_not_of(" \t\r\n");
        format = (first != std::string_view::npos && text[first] == '<') ? NetFormat::pnml
                                                                           : NetFormat::native;
    }
    return format == NetFormat::pnml ? parse_pnml(text) : parse_native(text);
}

WorkflowNet load_net(const std::filesystem::path& path, NetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO_ERROR", "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (format == NetFormat::automatic && path.extension() == ".pnml") format = NetFormat::pnml;
    return parse_net(buf.str(), format);
}

std::string dump_native(const WorkflowNet& wf) {
    const auto& net = wf.net;
    std::string out;
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        out += (net.is_place(n) ? "place " : "trans ") + net.label(n) + "\n";
    }
    for (const auto& [a, b] : net.arcs()) out += "arc " + net.label(a) + " " + net.label(b) + "\n";
    out += "source " + net.label(wf.source) + "\n";
    out += "sink " + net.label(wf.sink) + "\n";
    return out;
}

Marking parse_marking(const PetriNet& net, std::string_view literal) {
    auto s = trim(literal);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw Error("PARSE_ERROR", "marking literal missing ']'");
        s = s.substr(1, s.size() - 2);
    }
    Marking m;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        auto item = trim(std::string_view(s).substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) {
            if (comma == s.size() && m.empty() && trim(s).empty()) break;
            throw Error("PARSE_ERROR", "empty entry in marking literal");
        }
        std::uint32_t mult = 1;
        if (auto caret = item.find('^'); caret != std::string::npos) {
            auto num = trim(std::string_view(item).substr(caret + 1));
            item = trim(std::string_view(item).substr(0, caret));
            if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
                throw Error("PARSE_ERROR", "bad multiplicity '" + num + "'");
            mult = static_cast<std::uint32_t>(std::stoul(num));
            if (mult == 0) throw Error("PARSE_ERROR", "multiplicity must be positive");
        }
        auto id = net.find(item);
        if (!id) throw Error("UNKNOWN_PLACE", "unknown place '" + item + "'");
        if (!net.is_place(*id))
            throw Error("NOT_A_PLACE", "'" + item + "' is a transition, not a place");
        m.add(*id, mult);
        if (comma == s.size()) break;
    }
    return m;
}

const char* role_name(ColorRole r) {
    switch (r) {
        case ColorRole::marked: return "marked";
        case ColorRole::missing: return "missing";
        case ColorRole::conflicting: return "conflicting";
        case ColorRole::conflict_path: return "conflict-path";
        case ColorRole::diverging_primary: return "diverging-primary";
        case ColorRole::diverging_secondary: return "diverging-secondary";
        case ColorRole::diverging_place: return "diverging-place";
        case ColorRole::witness_path: return "witness-path";
        case ColorRole::neutral: return "neutral";
    }
    return "neutral";
}

const char* role_color(ColorRole r) {
    switch (r) {
        case ColorRole::marked: return "pink";
        case ColorRole::missing: return "green";
        case ColorRole::conflicting: return "orange";
        case ColorRole::conflict_path: return "orange";
        case ColorRole::diverging_primary: return "orange";
        case ColorRole::diverging_secondary: return "blue";
        case ColorRole::diverging_place: return "green";
        case ColorRole::witness_path: return "violet";
        case ColorRole::neutral: return "black";
    }
    return "black";
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string export_dot(const WorkflowNet& wf, const RoleMap& roles, bool with_legend) {
    const auto& net = wf.net;
    for (const auto& [n, r] : roles.nodes)
        if (n.index >= net.size()) throw Error("UNKNOWN_NODE", "role assigned to unknown node");
    for (const auto& [e, r] : roles.edges)
        if (!net.has_arc(e.first, e.second))
            throw Error("UNKNOWN_NODE", "role assigned to a non-existent arc");

    std::ostringstream out;
    out << "digraph wfnet {\n";
    if (with_legend) {
        out << "  comment=\"legend:";
        for (auto r : {ColorRole::marked, ColorRole::missing, ColorRole::conflicting,
                       ColorRole::conflict_path, ColorRole::diverging_primary,
                       ColorRole::diverging_secondary, ColorRole::diverging_place,
                       ColorRole::witness_path})
            out << " " << role_name(r) << "=" << role_color(r) << ";";
        out << "\";\n";
    }
    out << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        NodeId n(i);
        out << "  " << quote(net.label(n)) << " [shape=" << (net.is_place(n) ? "ellipse" : "box");
        auto it = roles.nodes.find(n);
        if (it != roles.nodes.end() && it->second != ColorRole::neutral) {
            auto r = it->second;
            if (r == ColorRole::conflicting)
                out << ", style=filled, fillcolor=pink, color=orange, penwidth=2";
            else
                out << ", style=filled, fillcolor=" << role_color(r);
        }
        out << "];\n";
    }
    for (const auto& [a, b] : net.arcs()) {
        out << "  " << quote(net.label(a)) << " -> " << quote(net.label(b));
        auto it = roles.edges.find({a, b});
        if (it != roles.edges.end() && it->second != ColorRole::neutral)
            out << " [color=" << role_color(it->second) << ", penwidth=2]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace wfreach
