#include "abeldim/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "abeldim/abel_dim.hpp"
#include "abeldim/random.hpp"

namespace abeldim {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"validate", "invariants", "chi",      "minchi",    "h1-generic",
                                            "h1-pic",   "h1-rel",     "h1-natural", "dominant", "abel-dim",
                                            "b-invariant", "blowup",  "fuzz"};
const std::vector<std::string> kModes = {"generic", "h1", "relative", "section5", "tower"};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    out << text;
}

std::string rat_text(const Rational& q) { return format_rational(q); }

ojson int_list(const std::vector<std::int64_t>& v) {
    ojson a = ojson::array();
    for (auto x : v) a.push_back(x);
    return a;
}

// Everything derived from a config before a command runs.
struct Session {
    const RunConfig& config;
    GraphPtr graph;
    BoxOptions box;
    OraclePtr oracle;
    std::shared_ptr<TableOracle> table;
    ojson result = ojson::object();
    std::vector<std::string> human;
    std::vector<std::string> notes;

    explicit Session(const RunConfig& c) : config(c) {
        box.volume_cap = c.volume_cap;
        box.optimizer_cap = static_cast<std::size_t>(c.optimizer_cap);
        box.jobs = std::max(1u, c.jobs);
    }

    HypothesisMode hypothesis() const {
        return config.hypothesis == "strict" ? HypothesisMode::Strict : HypothesisMode::Warn;
    }

    void load_graph() {
        if (config.graph.empty()) throw UsageError(config.command + " needs a graph (-g)");
        graph = parse_graph(config.graph);
    }

    void load_oracle() {
        OracleOptions o;
        o.hypothesis = hypothesis();
        o.box = box;
        auto generic = std::make_shared<GenericOracle>(o);
        if (config.table.empty()) {
            oracle = generic;
            return;
        }
        table = TableOracle::load(config.table, config.table_fallback ? generic : nullptr, o);
        oracle = table;
    }

    Cycle cycle() const {
        if (config.cycle.empty()) throw UsageError(config.command + " needs a cycle (-Z)");
        return parse_cycle(graph, config.cycle);
    }

    RatCycle lprime() const {
        if (config.coords == "e") return parse_rat_cycle(graph, config.chern);
        return from_pairing(graph, parse_vertex_integers(graph, config.chern));
    }

    std::vector<std::size_t> v1() const { return parse_vertex_set(graph, config.v1); }

    RelativeContext context() const {
        RelativeOptions ro;
        ro.hypothesis = hypothesis();
        ro.box = box;
        return RelativeContext(graph, v1(), oracle, ro);
    }

    BundleDescriptor base(const RelativeContext& ctx, const RatCycle& lp) const {
        const auto& b = config.base;
        auto c1 = ctx.restrict_pairing(lp);
        if (b == "genpic") return BundleDescriptor::generic_pic(c1);
        if (b == "natural") return BundleDescriptor::natural(c1);
        if (b == "genim") return BundleDescriptor::generic_abel_image(c1);
        if (b == "trivial") return BundleDescriptor::trivial();
        if (b.rfind("table:", 0) == 0) return BundleDescriptor::table(b.substr(6));
        throw UsageError("unknown base bundle '" + b + "'");
    }

    ojson lprime_json(const RatCycle& lp) const {
        return ojson{{"e", lp.to_string()}, {"estar", int_list(pairing_vector(lp))}};
    }

    void line(const std::string& s) { human.push_back(s); }
};

std::string cycle_list(const std::vector<Cycle>& cs) {
    std::string out;
    for (std::size_t i = 0; i < cs.size(); ++i) out += (i ? "; " : "") + cs[i].to_string();
    return out;
}

ojson cycles_json(const std::vector<Cycle>& cs) {
    ojson a = ojson::array();
    for (const auto& c : cs) a.push_back(c.to_string());
    return a;
}

ojson opt_json(const OptResult& r) {
    return ojson{{"value", rat_text(r.value)},
                 {"count", r.count},
                 {"complete", r.complete()},
                 {"optimizers", cycles_json(r.optimizers)}};
}

void cmd_validate(Session& s) {
    s.load_graph();
    s.result["vertices"] = s.graph->size();
    s.result["edges"] = s.graph->edges().size();
    s.result["graph"] = s.graph->to_text();
    s.line("ok " + std::to_string(s.graph->size()) + " vertices " + std::to_string(s.graph->edges().size()) +
           " edges");
}

void cmd_invariants(Session& s) {
    s.load_graph();
    const auto& g = s.graph;
    auto zk = canonical_cycle(g);
    auto zmin = minimal_cycle(g);
    ojson minors = ojson::array();
    std::string minor_text;
    for (const auto& m : g->leading_minors()) {
        minors.push_back(m.get_str());
        minor_text += " " + m.get_str();
    }
    s.result["det"] = g->determinant().get_str();
    s.result["class_group_order"] = g->class_group_order().get_str();
    s.result["leading_minors"] = minors;
    s.result["Z_K"] = zk.to_string();
    s.result["chi_Z_K"] = rat_text(chi(zk));
    s.result["Z_min"] = zmin.to_string();
    s.result["chi_Z_min"] = chi(zmin);
    ojson dual = ojson::object();
    for (std::size_t v = 0; v < g->size(); ++v) dual[g->id(v)] = dual_cycle(g, v).to_string();
    s.result["dual_basis"] = dual;
    s.line("det " + g->determinant().get_str());
    s.line("|H| " + g->class_group_order().get_str());
    s.line("minors" + minor_text);
    s.line("Z_K " + zk.to_string());
    s.line("Z_min " + zmin.to_string());
    s.line("chi(Z_min) " + std::to_string(chi(zmin)));
    for (std::size_t v = 0; v < g->size(); ++v) s.line("E*_" + g->id(v) + " " + dual_cycle(g, v).to_string());
}

void cmd_chi(Session& s) {
    s.load_graph();
    if (s.config.cycle.empty()) throw UsageError("chi needs a cycle (-Z)");
    auto x = parse_rat_cycle(s.graph, s.config.cycle);
    auto v = chi(x);
    s.result["cycle"] = x.to_string();
    s.result["chi"] = rat_text(v);
    s.line(rat_text(v));
}

void cmd_minchi(Session& s) {
    s.load_graph();
    auto upper = s.cycle();
    Cycle lower = s.config.lower.empty() ? Cycle(s.graph) : parse_cycle(s.graph, s.config.lower);
    if (!lower.leq(upper)) throw Error(ErrorKind::InvalidArgument, "lower corner exceeds the upper corner");
    auto r = minimize_box(BoxProblem(lower, upper, Objective::chi_zero(s.graph)), s.box);
    s.result["lower"] = lower.to_string();
    s.result["upper"] = upper.to_string();
    s.result["min"] = opt_json(r);
    s.line(rat_text(r.value));
    s.line("minimizers " + std::to_string(r.count) + (r.complete() ? "" : " (truncated)"));
    for (const auto& c : r.optimizers) s.line("  " + c.to_string());
}

void cmd_h1_generic(Session& s) {
    s.load_graph();
    auto z = s.cycle();
    auto v = h1_O_generic(z, s.box);
    s.result["cycle"] = z.to_string();
    s.result["h1"] = v;
    s.line(std::to_string(v));
}

void cmd_h1_pic(Session& s) {
    s.load_graph();
    auto z = s.cycle();
    auto lp = s.lprime();
    if (!in_neg_lipman(lp)) throw Error(ErrorKind::NotNegLipman, "l' = " + lp.to_string() + " is not in -S'");
    auto v = h1_pic_generic(z, lp, s.box);
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    s.result["h1"] = v;
    s.line(std::to_string(v));
}

void cmd_h1_rel(Session& s) {
    s.load_graph();
    s.load_oracle();
    auto z = s.cycle();
    auto lp = s.lprime();
    auto ctx = s.context();
    auto base = s.base(ctx, lp);
    auto r = h1_rel_generic(ctx, z, lp, base);
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    s.result["base"] = serialize_descriptor(base, s.graph);
    s.result["h1"] = r.value;
    s.result["min"] = opt_json(r.minimizers);
    s.line(std::to_string(r.value));
    s.line("minimizers " + cycle_list(r.minimizers.optimizers));
}

void cmd_h1_natural(Session& s) {
    s.load_graph();
    s.load_oracle();
    auto z = s.cycle();
    auto lp = s.lprime();
    auto ctx = s.context();
    auto v = h1_natural_relgen(ctx, z, lp);
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    s.result["h1"] = v;
    s.line(std::to_string(v));
}

void cmd_dominant(Session& s) {
    s.load_graph();
    s.load_oracle();
    auto z = s.cycle();
    auto lp = s.lprime();
    auto ctx = s.context();
    auto base = s.base(ctx, lp);
    auto r = rel_dominant(ctx, z, lp, base);
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    s.result["base"] = serialize_descriptor(base, s.graph);
    s.result["dominant"] = r.dominant;
    s.result["witness"] = r.witness ? ojson(r.witness->to_string()) : ojson(nullptr);
    s.line(r.dominant ? "true" : "false");
    if (r.witness) s.line("witness " + r.witness->to_string());
}

ojson components_json(const BResult& b) {
    ojson a = ojson::array();
    for (const auto& c : b.components)
        a.push_back(ojson{{"cycle", c.cycle.to_string()}, {"g", c.g}, {"d", c.d}, {"t", c.t()}});
    return a;
}

void b_lines(Session& s, const BResult& b) {
    s.line("b " + std::to_string(b.value));
    s.line("optimal " + b.optimal.to_string());
    for (const auto& c : b.components)
        s.line("  component " + c.cycle.to_string() + " g " + std::to_string(c.g) + " d " + std::to_string(c.d) +
               " t " + std::to_string(c.t()));
}

void report_json(Session& s, const AbelReport& r) {
    s.result["dimension"] = r.dimension;
    s.result["b"] = r.b.value;
    s.result["optimal"] = r.b.optimal.to_string();
    s.result["maximizers"] = r.b.maximizers;
    s.result["components"] = components_json(r.b);
    s.result["h1_base"] = r.h1_base;
    s.result["h1_O_Z"] = r.h1_O_Z;
    s.result["h1_O_Z1"] = r.h1_O_Z1;
    s.result["eca_dimension"] = r.eca_dimension ? ojson(*r.eca_dimension) : ojson(nullptr);
    s.line(std::to_string(r.dimension));
    b_lines(s, r.b);
    s.line("h1(Z1,L) " + std::to_string(r.h1_base) + " h1(O_Z) " + std::to_string(r.h1_O_Z) + " h1(O_Z1) " +
           std::to_string(r.h1_O_Z1));
    if (r.eca_dimension) s.line("dim ECa " + std::to_string(*r.eca_dimension));
}

void cmd_abel_dim(Session& s) {
    s.load_graph();
    s.load_oracle();
    auto z = s.cycle();
    auto lp = s.lprime();
    const auto& mode = s.config.mode;
    bool relative = !s.config.v1.empty() || s.table;
    s.result["mode"] = mode;
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    if (mode == "generic") {
        auto v = dim_abel_generic(z, lp, s.box);
        s.result["dimension"] = v;
        s.line(std::to_string(v));
    } else if (mode == "h1") {
        auto ctx = s.context();
        H1Provider h1 = relative ? memoized(relgen_h1_provider(ctx)) : memoized(generic_h1_provider(s.box));
        auto v = dim_abel_via_h1(z, lp, h1, s.box);
        s.result["dimension"] = v;
        s.result["h1_O_Z"] = h1(z);
        s.line(std::to_string(v));
        s.line("h1(O_Z) " + std::to_string(h1(z)));
    } else if (mode == "relative") {
        auto ctx = s.context();
        auto base = s.base(ctx, lp);
        s.result["base"] = serialize_descriptor(base, s.graph);
        report_json(s, dim_rel_abel(ctx, z, lp, base));
    } else if (mode == "section5") {
        auto ctx = s.context();
        report_json(s, dim_abel_section5(ctx, z, lp));
    } else if (mode == "tower") {
        auto spec = build_tower(z, lp, s.config.tower_cap);
        TowerProvider provider = generic_tower_provider(s.box);
        if (relative) {
            std::vector<std::string> ids;
            for (auto v : s.v1()) ids.push_back(s.graph->id(v));
            RelativeOptions ro;
            ro.hypothesis = s.hypothesis();
            ro.box = s.box;
            provider = relgen_tower_provider(ids, s.oracle, ro);
        }
        auto r = d_recursion(spec, provider, std::max(1u, s.config.jobs));
        if (!s.config.emit_table.empty()) write_file(s.config.emit_table, tower_table_text(spec, r));
        ojson path = ojson::array();
        std::string path_text;
        for (auto i : r.path) {
            path.push_back(int_list(r.nodes[i].s));
            std::string t;
            for (std::size_t j = 0; j < r.nodes[i].s.size(); ++j) t += (j ? "," : "") + std::to_string(r.nodes[i].s[j]);
            path_text += " (" + t + ")";
        }
        s.result["dimension"] = r.d0;
        s.result["tower_size"] = spec.size;
        s.result["chains"] = spec.chains.size();
        s.result["e0"] = r.nodes.front().e;
        s.result["path"] = path;
        s.line(std::to_string(r.d0));
        s.line("tower " + std::to_string(spec.size) + " nodes, " + std::to_string(spec.chains.size()) + " chains");
        s.line("path" + path_text);
    } else {
        throw UsageError("unknown mode '" + mode + "'");
    }
}

void cmd_b_invariant(Session& s) {
    s.load_graph();
    s.load_oracle();
    auto z = s.cycle();
    auto lp = s.lprime();
    auto ctx = s.context();
    auto base = s.base(ctx, lp);
    auto b = b_invariant(ctx, z, lp, base);
    s.result["cycle"] = z.to_string();
    s.result["lprime"] = s.lprime_json(lp);
    s.result["base"] = serialize_descriptor(base, s.graph);
    s.result["b"] = b.value;
    s.result["optimal"] = b.optimal.to_string();
    s.result["maximizers"] = b.maximizers;
    s.result["components"] = components_json(b);
    b_lines(s, b);
}

void cmd_blowup(Session& s) {
    s.load_graph();
    if (s.config.vertex.empty()) throw UsageError("blowup needs a vertex (--vertex)");
    auto map = blow_up(s.graph, s.config.vertex);
    const auto& t = map.target();
    s.result["new_vertex"] = map.new_id();
    s.result["graph"] = t->to_text();
    s.line("new vertex " + map.new_id());
    if (!s.config.cycle.empty()) {
        auto z = map.pullback(s.cycle());
        s.result["cycle"] = z.to_string();
        s.line("Z " + z.to_string());
    }
    if (!s.config.chern.empty()) {
        auto lp = map.pullback(s.lprime());
        s.result["lprime"] = ojson{{"e", lp.to_string()}, {"estar", int_list(pairing_vector(lp))}};
        s.line("l' " + lp.to_string());
    }
    std::istringstream text(t->to_text());
    for (std::string l; std::getline(text, l);) s.line(l);
}

ojson instance_config(const RandomInstance& inst, const RunConfig& parent) {
    RunConfig c;
    c.command = "abel-dim";
    c.mode = "generic";
    c.graph = inst.graph->to_text();
    c.cycle = inst.z.to_string();
    std::string a;
    for (std::size_t v = 0; v < inst.a.size(); ++v)
        if (inst.a[v]) a += (a.empty() ? "" : " ") + inst.graph->id(v) + ":" + std::to_string(inst.a[v]);
    c.chern = a;
    c.format = "json";
    c.volume_cap = parent.volume_cap;
    c.optimizer_cap = parent.optimizer_cap;
    c.tower_cap = parent.tower_cap;
    return config_to_json(c);
}

void cmd_fuzz(Session& s, int& exit_code) {
    Rng rng(s.config.seed);
    InstanceOptions io;
    io.max_vertices = static_cast<std::size_t>(std::max<std::uint64_t>(1, s.config.max_vertices));
    RelativeOptions ro;
    ro.box = s.box;
    std::uint64_t towers = 0;
    ojson bad = ojson::array();
    for (std::uint64_t i = 0; i < s.config.count; ++i) {
        auto inst = random_instance(rng, io);
        auto lp = inst.lprime();
        ojson values = ojson::object();
        std::string failure;
        try {
            values["generic"] = dim_abel_generic(inst.z, lp, s.box);
            values["via_h1"] = dim_abel_via_h1(inst.z, lp, memoized(generic_h1_provider(s.box)), s.box);
            RelativeContext ctx(inst.graph, {}, nullptr, ro);
            values["section5"] = dim_abel_section5(ctx, inst.z, lp).dimension;
            std::optional<TowerSpec> spec;
            try {
                spec = build_tower(inst.z, lp, s.config.tower_cap);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::TowerTooLarge) throw;
            }
            if (spec) {
                values["tower"] = d_recursion(*spec, generic_tower_provider(s.box), std::max(1u, s.config.jobs)).d0;
                ++towers;
            }
        } catch (const Error& e) {
            failure = std::string(e.name()) + ": " + e.what();
        }
        bool agree = failure.empty();
        for (const auto& [k, v] : values.items()) agree = agree && v == values["generic"];
        if (agree) continue;
        ojson entry{{"index", i}, {"values", values}, {"replay", instance_config(inst, s.config)}};
        if (!failure.empty()) entry["error"] = failure;
        s.line("disagreement at instance " + std::to_string(i) + ": " + values.dump() +
               (failure.empty() ? "" : " " + failure));
        bad.push_back(entry);
    }
    s.result["count"] = s.config.count;
    s.result["towers"] = towers;
    s.result["disagreements"] = bad;
    s.line("instances " + std::to_string(s.config.count) + " towers " + std::to_string(towers) + " disagreements " +
           std::to_string(bad.size()));
    if (!bad.empty()) exit_code = 1;
}

void dispatch(Session& s, int& exit_code) {
    const auto& c = s.config.command;
    if (c == "validate") cmd_validate(s);
    else if (c == "invariants") cmd_invariants(s);
    else if (c == "chi") cmd_chi(s);
    else if (c == "minchi") cmd_minchi(s);
    else if (c == "h1-generic") cmd_h1_generic(s);
    else if (c == "h1-pic") cmd_h1_pic(s);
    else if (c == "h1-rel") cmd_h1_rel(s);
    else if (c == "h1-natural") cmd_h1_natural(s);
    else if (c == "dominant") cmd_dominant(s);
    else if (c == "abel-dim") cmd_abel_dim(s);
    else if (c == "b-invariant") cmd_b_invariant(s);
    else if (c == "blowup") cmd_blowup(s);
    else if (c == "fuzz") cmd_fuzz(s, exit_code);
    else throw UsageError("unknown command '" + c + "'");
}

void check_choices(const RunConfig& c) {
    auto one_of = [](const std::string& v, std::initializer_list<const char*> xs) {
        return std::any_of(xs.begin(), xs.end(), [&](const char* x) { return v == x; });
    };
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
        throw UsageError("unknown command '" + c.command + "'");
    if (std::find(kModes.begin(), kModes.end(), c.mode) == kModes.end())
        throw UsageError("unknown mode '" + c.mode + "'");
    if (!one_of(c.coords, {"e", "estar"})) throw UsageError("--coords must be e or estar");
    if (!one_of(c.hypothesis, {"strict", "warn"})) throw UsageError("--hypothesis must be strict or warn");
    if (!one_of(c.format, {"human", "json"})) throw UsageError("--format must be human or json");
}

struct HelpRequest {
    std::string text;
};

RunConfig parse_impl(const std::vector<std::string>& args) {
    RunConfig c;
    CLI::App app{"Abel map dimensions on plumbing graphs", "abeldim"};
    std::string graph_path, oracle = "generic", replay;
    app.add_option("command", c.command, "validate | invariants | chi | minchi | h1-generic | h1-pic | h1-rel | "
                                         "h1-natural | dominant | abel-dim | b-invariant | blowup | fuzz");
    app.add_option("-g,--graph", graph_path, "graph file");
    app.add_option("-Z,--cycle", c.cycle, "cycle, e.g. \"v:2 w:1\"");
    app.add_option("--lower", c.lower, "lower corner for minchi");
    app.add_option("-l,--chern", c.chern, "Chern class l'");
    app.add_option("--coords", c.coords, "estar: a_v with -l' = sum a_v E*_v (default); e: E-coordinates of l'");
    app.add_option("--v1", c.v1, "base vertex ids");
    app.add_option("--vertex", c.vertex, "blow-up center");
    app.add_option("--mode", c.mode, "abel-dim mode: generic | h1 | relative | section5 | tower");
    app.add_option("--base", c.base, "base bundle: genpic | natural | genim | trivial | table:<key>");
    app.add_option("--oracle", oracle, "generic or a table file");
    app.add_flag("--table-fallback", c.table_fallback, "answer queries absent from the table generically");
    app.add_option("--hypothesis", c.hypothesis, "strict | warn");
    app.add_option("--format", c.format, "human | json");
    app.add_option("--emit-table", c.emit_table, "write the tower table to this file");
    app.add_option("--misses", c.misses, "write the missed table queries to this file");
    app.add_option("--volume-cap", c.volume_cap, "box volume cap");
    app.add_option("--optimizer-cap", c.optimizer_cap, "optimizer list cap");
    app.add_option("--tower-cap", c.tower_cap, "tower size cap");
    app.add_option("--jobs", c.jobs, "worker threads");
    app.add_option("--seed", c.seed, "fuzz seed");
    app.add_option("--count", c.count, "fuzz instances");
    app.add_option("--max-vertices", c.max_vertices, "fuzz graph size");
    app.add_option("--replay", replay, "rerun the config stored in a json output");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequest{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    if (!replay.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(replay));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("replay file: " + std::string(e.what()));
        }
        return config_from_json(j.contains("config") ? j["config"] : j);
    }
    if (c.command.empty()) throw UsageError("no command given");
    if (!graph_path.empty()) c.graph = read_file(graph_path);
    if (oracle != "generic") c.table = read_file(oracle);
    check_choices(c);
    return c;
}

}  // namespace

ojson config_to_json(const RunConfig& c) {
    return ojson{{"command", c.command},
                 {"graph", c.graph},
                 {"cycle", c.cycle},
                 {"lower", c.lower},
                 {"chern", c.chern},
                 {"coords", c.coords},
                 {"v1", c.v1},
                 {"vertex", c.vertex},
                 {"mode", c.mode},
                 {"base", c.base},
                 {"table", c.table},
                 {"table_fallback", c.table_fallback},
                 {"hypothesis", c.hypothesis},
                 {"format", c.format},
                 {"emit_table", c.emit_table},
                 {"misses", c.misses},
                 {"volume_cap", c.volume_cap},
                 {"optimizer_cap", c.optimizer_cap},
                 {"tower_cap", c.tower_cap},
                 {"jobs", c.jobs},
                 {"seed", c.seed},
                 {"count", c.count},
                 {"max_vertices", c.max_vertices}};
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        get("command", c.command);
        get("graph", c.graph);
        get("cycle", c.cycle);
        get("lower", c.lower);
        get("chern", c.chern);
        get("coords", c.coords);
        get("v1", c.v1);
        get("vertex", c.vertex);
        get("mode", c.mode);
        get("base", c.base);
        get("table", c.table);
        get("table_fallback", c.table_fallback);
        get("hypothesis", c.hypothesis);
        get("format", c.format);
        get("emit_table", c.emit_table);
        get("misses", c.misses);
        get("volume_cap", c.volume_cap);
        get("optimizer_cap", c.optimizer_cap);
        get("tower_cap", c.tower_cap);
        get("jobs", c.jobs);
        get("seed", c.seed);
        get("count", c.count);
        get("max_vertices", c.max_vertices);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    check_choices(c);
    return c;
}

RunConfig parse_args(const std::vector<std::string>& args) {
    try {
        return parse_impl(args);
    } catch (const HelpRequest&) {
        throw UsageError("help requested");
    }
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Session s(config);
    int code = 0;
    std::optional<std::pair<std::string, std::string>> error;
    try {
        dispatch(s, code);
    } catch (const Error& e) {
        error.emplace(std::string(e.name()), e.what());
        code = 1;
    }
    if (s.oracle)
        for (const auto& n : s.oracle->notes()) s.notes.push_back(n);
    if (s.table && !config.misses.empty()) write_file(config.misses, s.table->misses_report());

    if (config.format == "json") {
        ojson doc{{"format", 1}, {"command", config.command}, {"config", config_to_json(config)}};
        if (error) doc["error"] = ojson{{"kind", error->first}, {"message", error->second}};
        else doc["result"] = s.result;
        doc["notes"] = s.notes;
        out << doc.dump(2) << "\n";
    } else {
        for (const auto& l : s.human) out << l << "\n";
        for (const auto& n : s.notes) out << "note: " << n << "\n";
    }
    if (error) err << "error: " << error->second << "\n";
    return code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_impl(args);
    } catch (const HelpRequest& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for the list of options\n";
        return 2;
    }
    try {
        return execute(config, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace abeldim
