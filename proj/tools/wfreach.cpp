#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "wfreach/decide.hpp"
#include "wfreach/report_json.hpp"
#include "wfreach/service.hpp"

using namespace wfreach;

namespace {

struct Config {
    std::string input;
    std::string format = "auto";
    std::string marking;
    std::string mode = "exact";
    std::string out = "text";
    bool json = false;
    bool assume_sound = false;
    std::optional<std::size_t> cap;
    std::uint64_t seed = 1;
    std::optional<std::size_t> size;
    std::optional<int> port;
    std::string host = "127.0.0.1";
};

std::size_t cap_of(const Config& c) { return c.cap ? *c.cap : state_cap_from_env(); }

std::string output_kind(const Config& c) { return c.json ? "json" : c.out; }

WorkflowNet load(const Config& c) { return load_net(c.input, parse_format_name(c.format)); }

std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += sep;
        s += v[k];
    }
    return s;
}

std::string set_text(const PetriNet& net, const NodeSet& s) {
    return "{" + join(labels_of(net, s)) + "}";
}

std::string seq_text(const PetriNet& net, const std::vector<NodeId>& v) {
    std::vector<std::string> names;
    for (auto n : v) names.push_back(net.label(n));
    return join(names, " ");
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_witness_text(const PetriNet& net, const Witness& w) {
    std::cout << "step 0: " << format_marking(net, w.markings.front()) << "\n";
    for (std::size_t k = 0; k < w.sequence.size(); ++k)
        std::cout << "step " << k + 1 << ": fire " << net.label(w.sequence[k]) << " -> "
                  << format_marking(net, w.markings[k + 1]) << "\n";
}

void print_report_text(const PetriNet& net, const AnalysisReport& r) {
    std::cout << "verdict: " << verdict_name(r.verdict) << "\n";
    std::cout << "mode: " << mode_name(r.mode) << "\n";
    std::cout << "marking: " << format_marking(net, r.marking) << "\n";
    std::cout << "engine: " << r.engine << "\n";
    std::cout << "soundness: " << r.soundness << "\n";
    std::cout << "admissibility: " << admissibility_name(r.admissibility.verdict) << "\n";
    if (!r.admissibility.missing.empty())
        std::cout << "missing: " << set_text(net, r.admissibility.missing) << "\n";
    if (!r.admissibility.conflicting.empty())
        std::cout << "conflicting: " << set_text(net, r.admissibility.conflicting) << "\n";
    if (!r.admissibility.unsafe.empty())
        std::cout << "unsafe: " << set_text(net, r.admissibility.unsafe) << "\n";
    for (const auto& c : r.conflicts) {
        std::cout << "conflict " << net.label(c.x) << " " << net.label(c.y) << ": "
                  << conflict_kind_name(c.kind);
        if (c.kind == ConflictKind::exclusive) {
            if (c.decision_place) std::cout << " at " << net.label(*c.decision_place);
            std::cout << " [" << seq_text(net, c.path_to_x) << "] [" << seq_text(net, c.path_to_y)
                      << "]";
        } else {
            std::cout << " [" << seq_text(net, c.path) << "]";
        }
        std::cout << "\n";
    }
    if (r.diverging.points.universe())
        std::cout << "diverging points: " << set_text(net, r.diverging.points) << "\n";
    for (const auto& [d, s] : r.diverging.reaches)
        std::cout << "  " << net.label(d) << " reaches " << set_text(net, s) << "\n";
    if (r.chosen_delta) std::cout << "chosen delta: " << net.label(*r.chosen_delta) << "\n";
    if (!r.union_mismatches.empty()) {
        std::vector<std::string> names;
        for (auto n : r.union_mismatches) names.push_back(net.label(n));
        std::cout << "union mismatches: {" << join(names) << "}\n";
    }
    if (r.witness) std::cout << "witness: " << seq_text(net, r.witness->sequence) << "\n";
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
}

struct Analyzed {
    WorkflowNet wf;
    std::optional<NetAnalysis> analysis;
    std::string fallback_reason;
};

Analyzed analyze_net(const Config& c) {
    Analyzed out;
    out.wf = load(c);
    AnalysisOptions opts;
    opts.assume_sound = c.assume_sound;
    opts.state_cap = cap_of(c);
    try {
        out.analysis = NetAnalysis::build(out.wf, opts);
    } catch (const StructureError& e) {
        out.fallback_reason = e.what();
    } catch (const Error& e) {
        if (e.code() != "UNSOUND") throw;
        out.fallback_reason = e.what();
    }
    return out;
}

const NetAnalysis& require_analysis(const Analyzed& a) {
    if (!a.analysis) throw Error("STRUCTURE", a.fallback_reason);
    return *a.analysis;
}

AnalysisReport run_query(const Config& c, const Analyzed& a, Mode mode, const Marking& m) {
    if (a.analysis) return is_reachable(*a.analysis, m, mode);
    std::cerr << "structural analysis unavailable (" << a.fallback_reason
              << "); using the state-space oracle\n";
    return oracle_verdict(a.wf, m, mode, cap_of(c));
}

int cmd_validate(const Config& c) {
    auto wf = load(c);
    auto report = validate_structure(wf);
    Json snd;
    bool ok = report.analyzable();
    if (ok) {
        try {
            snd = soundness_json(wf.net, check_soundness(wf, cap_of(c)));
            ok = snd["sound"].get<bool>();
        } catch (const Error& e) {
            if (e.code() != "CAP_EXCEEDED") throw;
            snd = {{"sound", nullptr}, {"detail", e.what()}};
            ok = c.assume_sound;
        }
    }
    if (output_kind(c) == "json") {
        Json j;
        j["structureReport"] = structure_json(wf.net, report);
        j["soundness"] = snd;
        print_json(j);
    } else {
        std::cout << "workflow net: " << (report.is_workflow ? "yes" : "no") << "\n";
        std::cout << "acyclic: " << (report.is_acyclic ? "yes" : "no") << "\n";
        std::cout << "extended free-choice: " << (report.is_extended_free_choice ? "yes" : "no")
                  << "\n";
        std::cout << "simple free-choice: " << (report.is_simple_free_choice ? "yes" : "no") << "\n";
        for (const auto& v : report.violations)
            std::cout << (v.blocking ? "error " : "warning ") << v.code << ": " << v.message << "\n";
        if (!snd.is_null()) {
            std::cout << "sound: "
                      << (snd["sound"].is_null() ? "unverified" : snd["sound"].get<bool>() ? "yes" : "no")
                      << "\n";
            if (!snd["detail"].get<std::string>().empty())
                std::cout << "soundness detail: " << snd["detail"].get<std::string>() << "\n";
        }
    }
    return ok ? 0 : 1;
}

int cmd_analyze(const Config& c) {
    auto a = analyze_net(c);
    auto mode = parse_mode(c.mode);
    auto m = parse_marking(a.wf.net, c.marking);
    auto r = run_query(c, a, mode, m);
    auto kind = output_kind(c);
    if (kind == "json") {
        print_json(report_json(a.wf.net, r));
    } else if (kind == "dot") {
        std::cout << export_dot(a.wf, r.roles, true);
    } else {
        print_report_text(a.wf.net, r);
    }
    return r.verdict == Verdict::not_reachable ? 2 : 0;
}

int cmd_witness(const Config& c) {
    auto a = analyze_net(c);
    auto mode = parse_mode(c.mode);
    auto m = parse_marking(a.wf.net, c.marking);
    auto r = run_query(c, a, mode, m);
    if (!r.witness) {
        std::cerr << "marking " << format_marking(a.wf.net, m) << " is " << verdict_name(r.verdict)
                  << "; no witness\n";
        return 2;
    }
    auto kind = output_kind(c);
    if (kind == "json") {
        print_json(witness_json(a.wf.net, *r.witness));
    } else if (kind == "dot") {
        auto roles = a.analysis ? assign_roles(*a.analysis, r, true) : r.roles;
        std::cout << export_dot(a.wf, roles, true);
    } else {
        print_witness_text(a.wf.net, *r.witness);
    }
    return 0;
}

int cmd_concurrency(const Config& c) {
    auto a = analyze_net(c);
    print_json(concurrency_json(a.wf.net, require_analysis(a).concurrency()));
    return 0;
}

int cmd_postdom(const Config& c) {
    auto a = analyze_net(c);
    const auto& an = require_analysis(a);
    print_json(postdom_json(an.net(), an.postdom()));
    return 0;
}

int cmd_gen(const Config& c) {
    GeneratorParams params;
    if (c.size) {
        params.min_places = *c.size;
        params.max_places = *c.size;
    }
    std::cout << dump_native(generate_sound_afw(c.seed, params));
    return 0;
}

int cmd_serve(const Config& c) {
    ServiceOptions opts;
    opts.state_cap = cap_of(c);
    int port = 8080;
    if (c.port) {
        port = *c.port;
    } else if (const char* env = std::getenv("WFREACH_PORT")) {
        port = std::atoi(env);
    }
    Service service(opts);
    std::cerr << "listening on " << c.host << ":" << port << "\n";
    if (!service.listen(c.host, port)) throw Error("IO_ERROR", "cannot listen on port " + std::to_string(port));
    return 0;
}

Json set_json(const PetriNet& net, const NodeSet& s) {
    auto arr = Json::array();
    for (const auto& l : labels_of(net, s)) arr.push_back(l);
    return arr;
}

int cmd_oracle(const std::string& what, const Config& c) {
    auto wf = load(c);
    const auto& net = wf.net;
    if (what == "explore") {
        auto g = explore(wf, cap_of(c));
        Json j;
        j["states"] = g.states.size();
        j["edges"] = g.edges.size();
        j["safe"] = g.safe();
        auto ms = Json::array();
        for (const auto& m : g.states) ms.push_back(format_marking(net, m));
        j["markings"] = ms;
        print_json(j);
        return 0;
    }
    if (what == "soundness") {
        auto s = check_soundness(wf, cap_of(c));
        print_json(soundness_json(net, s));
        return s.sound ? 0 : 2;
    }
    if (what == "concurrency") {
        print_json(concurrency_json(net, brute_concurrency(net, explore(wf, cap_of(c)))));
        return 0;
    }
    if (what == "reachable") {
        auto m = parse_marking(net, c.marking);
        require_valid_marking(net, m);
        auto mode = parse_mode(c.mode);
        auto g = explore(wf, cap_of(c));
        auto seq = brute_firing_sequence(net, g, m, mode == Mode::cover);
        Json j;
        j["marking"] = format_marking(net, m);
        j["mode"] = mode_name(mode);
        j["verdict"] = seq ? verdict_name(mode == Mode::cover ? Verdict::coverable : Verdict::reachable)
                           : verdict_name(Verdict::not_reachable);
        if (seq) {
            auto arr = Json::array();
            for (auto t : *seq) arr.push_back(net.label(t));
            j["sequence"] = arr;
        }
        print_json(j);
        return seq ? 0 : 2;
    }
    if (what == "postdom") {
        auto pd = brute_postdom(net, wf.sink);
        Json j;
        auto ip = Json::object();
        auto fr = Json::object();
        for (std::size_t i = 0; i < net.size(); ++i) {
            ip[net.label(NodeId(i))] = pd.ipdom[i] < 0 ? Json() : Json(net.label(NodeId(static_cast<std::size_t>(pd.ipdom[i]))));
            fr[net.label(NodeId(i))] = set_json(net, pd.frontier[i]);
        }
        j["ipdom"] = ip;
        j["pdf"] = fr;
        print_json(j);
        return 0;
    }
    if (what == "divpoints") {
        auto m = parse_marking(net, c.marking);
        require_valid_marking(net, m);
        auto targets = m.support(net.size());
        auto points = brute_divpoints(net, targets);
        Json j;
        j["divergingPoints"] = set_json(net, points);
        auto info = Json::object();
        points.for_each([&](NodeId d) { info[net.label(d)] = set_json(net, brute_divinfo(net, d, targets)); });
        j["divinfo"] = info;
        print_json(j);
        return 0;
    }
    throw Error("INVALID_ARGUMENT", "unknown oracle command " + what);
}

void add_input(CLI::App* sub, Config& c) {
    sub->add_option("file", c.input, "net file (.wfnet or PNML)")->required();
    sub->add_option("--format", c.format, "input format: auto, native, pnml");
    sub->add_option("--cap", c.cap, "state cap for soundness verification");
}

void add_query(CLI::App* sub, Config& c) {
    sub->add_option("-m,--marking", c.marking, "marking literal, e.g. [p3,p5^2]")->required();
    sub->add_option("--mode", c.mode, "exact or cover")->check(CLI::IsMember({"exact", "cover"}));
}

void add_output(CLI::App* sub, Config& c) {
    sub->add_option("--out", c.out, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_flag("--json", c.json, "same as --out json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reachability and coverability for sound acyclic free-choice workflow nets"};
    app.require_subcommand(1);
    Config c;

    auto* validate = app.add_subcommand("validate", "check structure and soundness");
    add_input(validate, c);
    add_output(validate, c);
    validate->add_flag("--assume-sound", c.assume_sound, "accept nets whose state space exceeds the cap");

    auto* analyze = app.add_subcommand("analyze", "decide reachability or coverability of a marking");
    add_input(analyze, c);
    add_query(analyze, c);
    add_output(analyze, c);
    analyze->add_flag("--assume-sound", c.assume_sound, "skip soundness verification");

    auto* witness = app.add_subcommand("witness", "print a firing sequence reaching the marking");
    add_input(witness, c);
    add_query(witness, c);
    add_output(witness, c);
    witness->add_flag("--assume-sound", c.assume_sound, "skip soundness verification");

    auto* conc = app.add_subcommand("concurrency", "print the concurrency relation as JSON");
    add_input(conc, c);
    conc->add_flag("--assume-sound", c.assume_sound, "skip soundness verification");

    auto* postdom = app.add_subcommand("postdom", "print immediate post-dominators and frontiers as JSON");
    add_input(postdom, c);
    postdom->add_flag("--assume-sound", c.assume_sound, "skip soundness verification");

    auto* gen = app.add_subcommand("gen", "generate a sound acyclic free-choice workflow net");
    gen->add_option("--seed", c.seed, "generator seed");
    gen->add_option("--size", c.size, "number of places")->check(CLI::Range(2, 1000000));

    auto* serve = app.add_subcommand("serve", "run the HTTP JSON service");
    serve->add_option("--port", c.port, "listen port (default WFREACH_PORT or 8080)");
    serve->add_option("--host", c.host, "listen address");
    serve->add_option("--cap", c.cap, "state cap for soundness verification");

    auto* oracle = app.add_subcommand("oracle", "brute-force state-space checks");
    oracle->require_subcommand(1);
    std::string oracle_cmd;
    for (const char* name : {"explore", "soundness", "concurrency", "postdom"}) {
        auto* sub = oracle->add_subcommand(name, std::string("brute-force ") + name);
        add_input(sub, c);
        sub->callback([&oracle_cmd, name] { oracle_cmd = name; });
    }
    for (const char* name : {"reachable", "divpoints"}) {
        auto* sub = oracle->add_subcommand(name, std::string("brute-force ") + name);
        add_input(sub, c);
        sub->add_option("-m,--marking", c.marking, "marking literal")->required();
        if (std::string(name) == "reachable")
            sub->add_option("--mode", c.mode, "exact or cover")->check(CLI::IsMember({"exact", "cover"}));
        sub->callback([&oracle_cmd, name] { oracle_cmd = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(c);
        if (*analyze) return cmd_analyze(c);
        if (*witness) return cmd_witness(c);
        if (*conc) return cmd_concurrency(c);
        if (*postdom) return cmd_postdom(c);
        if (*gen) return cmd_gen(c);
        if (*serve) return cmd_serve(c);
        if (*oracle) return cmd_oracle(oracle_cmd, c);
    } catch (const StructureError& e) {
        std::cerr << "error " << e.code() << ": " << e.what() << "\n";
        for (const auto& v : e.report().violations)
            if (v.blocking) std::cerr << "  " << v.code << ": " << v.message << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
