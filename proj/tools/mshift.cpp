// Command-line frontend for the shift classification library.
//
// Exit codes: 0 for success and YES verdicts, 2 for invalid input and NO
// verdicts, 3 for budget-limited UNKNOWN results, 1 for usage and I/O trouble.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mshift/mshift.hpp"

namespace {

using namespace mshift;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
}

// key=value in report mode, "key: value" otherwise; values never contain '='
struct Printer {
    bool report = false;
    void kv(const std::string& key, const std::string& val) const {
        std::cout << key << (report ? "=" : ": ") << val << "\n";
    }
    void kv(const std::string& key, const char* val) const { kv(key, std::string(val)); }
    void kv(const std::string& key, int val) const { kv(key, std::to_string(val)); }
    void kv(const std::string& key, std::uint64_t val) const { kv(key, std::to_string(val)); }
    void kv(const std::string& key, bool val) const { kv(key, std::string(val ? "yes" : "no")); }
};

void echo_config(const Printer& out, const Config& cfg) {
    if (!out.report) return;
    out.kv("config.n-max", cfg.n_max);
    out.kv("config.coloring-budget", cfg.coloring_budget);
    out.kv("config.subset-budget", cfg.subset_budget);
    out.kv("config.persistent-budget", cfg.persistent_budget);
    out.kv("config.d-max", cfg.d_max);
    out.kv("config.seed", cfg.seed);
    out.kv("config.jobs", cfg.jobs);
    out.kv("config.time-budget-ms", cfg.time_budget_ms);
    out.kv("config.accept-budgeted-minimality", cfg.accept_budgeted_minimality);
}

Rho rho_of(const SgfDocument& doc, const std::string& path) {
    if (!doc.rho) throw Error(path + ": no rho section");
    return *doc.rho;
}

Rho shared_rho(const SgfDocument& d1, const SgfDocument& d2, const std::string& p1,
               const std::string& p2) {
    if (d1.rho && d2.rho &&
        (d1.rho->letters != d2.rho->letters || d1.rho->weights != d2.rho->weights))
        throw Error(p1 + " and " + p2 + " declare different rho sections");
    if (d1.rho) return *d1.rho;
    if (d2.rho) return *d2.rho;
    throw Error(p1 + ": no rho section");
}

std::string joined_letters(const Rho& rho) {
    std::string s;
    for (int i = 0; i < rho.size(); ++i) {
        if (i) s += ' ';
        s += rho.letters[i];
    }
    return s;
}

// A file carrying cocycle lines denotes the skew product over its base graph.
// Every command that works on the shift (not the file) walks that chain;
// only validate reports the file as written.
StochasticGraph shift_graph_of(const std::string& text, const SgfDocument& doc,
                               const Config& cfg) {
    if (doc.cocycles.empty()) return doc.graph;
    StochasticGraph g = materialize(parse_extension(text, cfg.subset_budget));
    g.name = doc.graph.name;
    return g;
}

// Certificate sidecar: a "cert yes" header, one hom line per ghat edge and
// side, then the common extension itself as a labeled graph. verify-cert
// re-checks the two projections from scratch.
std::string cert_text(const CommonExtension& ce, const StochasticGraph& g1,
                      const StochasticGraph& g2, const Rho& rho) {
    std::string out = "cert yes\n";
    for (int e = 0; e < ce.ghat.num_edges(); ++e)
        out += "hom1 " + ce.ghat.edges[e].id + " " + g1.edges[ce.hom1[e]].id + "\n";
    for (int e = 0; e < ce.ghat.num_edges(); ++e)
        out += "hom2 " + ce.ghat.edges[e].id + " " + g2.edges[ce.hom2[e]].id + "\n";
    out += emit_sgf(ce.ghat, rho, materialize_labels(ce.ext));
    return out;
}

void print_minimal_index(const Printer& out, const MinimalIndexReport& rep) {
    out.kv("degree.d", rep.d_found);
    out.kv("degree.n", rep.n_at);
    out.kv("degree.coloring-index", rep.coloring_index);
    out.kv("degree.period", rep.graph_period);
    out.kv("degree.certified", rep.certified);
    out.kv("degree.certificate", rep.certificate);
    out.kv("degree.exhausted", rep.search_exhausted);
    if (!out.report) return;
    for (const auto& l : rep.log) {
        std::string base = "degree.level." + std::to_string(l.n);
        out.kv(base + ".colorings", l.colorings_tried);
        out.kv(base + ".best-d", l.best_d);
        if (l.colorings_truncated) out.kv(base + ".colorings-truncated", true);
        if (l.contraction_truncated) out.kv(base + ".contraction-truncated", true);
    }
}

int cmd_validate(const Printer& out, const Config& cfg, const std::string& path) {
    std::string text = slurp(path);
    SgfDocument doc = parse_sgf(text);
    out.kv("graph", doc.graph.name);
    out.kv("vertices", doc.graph.num_vertices());
    out.kv("edges", doc.graph.num_edges());
    bool irr = is_irreducible(doc.graph);
    out.kv("irreducible", irr);
    if (irr) out.kv("period", period(doc.graph));
    if (doc.rho) {
        out.kv("rho", joined_letters(*doc.rho));
        out.kv("rho-uniform", check_rho_uniform(doc.graph, *doc.rho));
    }
    out.kv("labeled", doc.fully_labeled());
    if (!doc.cocycles.empty()) {
        GspExtension e = parse_extension(text, cfg.subset_budget);
        out.kv("extension", true);
        out.kv("extension.d", e.d);
    }
    out.kv("valid", true);
    return 0;
}

int cmd_info(const Printer& out, const Config& cfg, const std::string& path) {
    std::string text = slurp(path);
    SgfDocument doc = parse_sgf(text);
    StochasticGraph g = doc.graph;
    if (!doc.cocycles.empty()) {
        GspExtension e = parse_extension(text, cfg.subset_budget);
        g = materialize(e);
        g.name = doc.graph.name;
        out.kv("extension.d", e.d);
    }
    out.kv("graph", g.name);
    out.kv("vertices", g.num_vertices());
    out.kv("edges", g.num_edges());
    bool irr = is_irreducible(g);
    out.kv("irreducible", irr);
    if (!irr) return 0;
    out.kv("period", period(g));
    auto x = stationary_distribution(g);
    for (int v = 0; v < g.num_vertices(); ++v)
        out.kv("stationary." + g.vertex_ids[v], format_rational(x[v]));
    if (doc.rho) {
        for (int i = 0; i < doc.rho->size(); ++i)
            out.kv("rho." + doc.rho->letters[i], format_rational(doc.rho->weights[i]));
        out.kv("rho-uniform", check_rho_uniform(g, *doc.rho));
    }
    return 0;
}

int cmd_degree(const Printer& out, const Config& cfg, const std::string& path) {
    std::string text = slurp(path);
    SgfDocument doc = parse_sgf(text);
    Rho rho = rho_of(doc, path);
    StochasticGraph g = shift_graph_of(text, doc, cfg);
    echo_config(out, cfg);
    MinimalIndexReport rep = minimal_index(g, rho, cfg);
    print_minimal_index(out, rep);
    if (rep.d_found > 0) {
        // contraction witness on the winning coloring, spelled in rho letters
        auto lm = letter_maps(stringing(g, rep.n_at), rho, rep.coloring);
        auto con = contraction_degree(lm, cfg.subset_budget);
        std::string w;
        for (int i : con.witness) {
            if (!w.empty()) w += ' ';
            w += rho.letters[i];
        }
        out.kv("degree.witness", w);
        out.kv("degree.witness-length", static_cast<int>(con.witness.size()));
    }
    return 0;
}

int cmd_canon(const Printer& out, const Config& cfg, const std::string& path,
              const std::string& out_path) {
    std::string text = slurp(path);
    SgfDocument doc = parse_sgf(text);
    Rho rho = rho_of(doc, path);
    StochasticGraph g = shift_graph_of(text, doc, cfg);
    echo_config(out, cfg);
    CanonicalForm cf = canonical_form(g, rho, cfg);
    print_minimal_index(out, cf.index);
    out.kv("canon.d", cf.ext.d);
    out.kv("canon.base-size", cf.ext.base_size());
    out.kv("canon.was-irreducible", cf.reduction.irreducible);
    std::string name = doc.graph.name.empty() ? std::string() : doc.graph.name + "-canon";
    std::string emitted = emit_extension(cf.ext, name);
    if (!out_path.empty())
        spill(out_path, emitted);
    else if (!out.report)
        std::cout << emitted;
    return 0;
}

const char* verdict_name(IsoStatus s) {
    switch (s) {
        case IsoStatus::Yes: return "YES";
        case IsoStatus::No: return "NO";
        default: return "UNKNOWN";
    }
}

int verdict_code(IsoStatus s) {
    return s == IsoStatus::Yes ? 0 : s == IsoStatus::No ? 2 : 3;
}

int cmd_iso(const Printer& out, const Config& cfg, const std::string& p1, const std::string& p2,
            const std::string& cert_path) {
    std::string t1 = slurp(p1), t2 = slurp(p2);
    SgfDocument d1 = parse_sgf(t1);
    SgfDocument d2 = parse_sgf(t2);
    Rho rho = shared_rho(d1, d2, p1, p2);
    StochasticGraph g1 = shift_graph_of(t1, d1, cfg);
    StochasticGraph g2 = shift_graph_of(t2, d2, cfg);
    echo_config(out, cfg);
    IsoVerdict v = shifts_isomorphic(g1, g2, rho, cfg);
    out.kv("iso.verdict", verdict_name(v.status));
    if (!v.reason.empty()) out.kv("iso.reason", v.reason);
    out.kv("iso.period1", v.period1);
    out.kv("iso.period2", v.period2);
    if (v.cf1) out.kv("iso.d1", v.cf1->ext.d);
    if (v.cf2) out.kv("iso.d2", v.cf2->ext.d);
    if (v.status == IsoStatus::Yes && !cert_path.empty()) {
        CommonExtension ce = common_extension_shifts(g1, g2, rho, v, cfg);
        spill(cert_path, cert_text(ce, g1, g2, rho));
        out.kv("iso.cert", cert_path);
    }
    return verdict_code(v.status);
}

int cmd_common_ext(const Printer& out, const Config& cfg, const std::string& p1,
                   const std::string& p2, const std::string& out_path) {
    std::string t1 = slurp(p1), t2 = slurp(p2);
    SgfDocument d1 = parse_sgf(t1);
    SgfDocument d2 = parse_sgf(t2);
    Rho rho = shared_rho(d1, d2, p1, p2);
    StochasticGraph g1 = shift_graph_of(t1, d1, cfg);
    StochasticGraph g2 = shift_graph_of(t2, d2, cfg);
    echo_config(out, cfg);
    IsoVerdict v = shifts_isomorphic(g1, g2, rho, cfg);
    out.kv("iso.verdict", verdict_name(v.status));
    if (!v.reason.empty()) out.kv("iso.reason", v.reason);
    if (v.status != IsoStatus::Yes) return verdict_code(v.status);
    CommonExtension ce = common_extension_shifts(g1, g2, rho, v, cfg);
    out.kv("commonext.vertices", ce.ghat.num_vertices());
    out.kv("commonext.edges", ce.ghat.num_edges());
    out.kv("commonext.d", ce.ext.d);
    std::string text = cert_text(ce, g1, g2, rho);
    if (!out_path.empty())
        spill(out_path, text);
    else if (!out.report)
        std::cout << text;
    return 0;
}

int cmd_sample(const Config& cfg, const std::string& path, int length) {
    std::string text = slurp(path);
    SgfDocument doc = parse_sgf(text);
    StochasticGraph g = shift_graph_of(text, doc, cfg);
    if (length < 0) throw Error("sample: length must be nonnegative");
    for (int e : sample(g, cfg.seed, length)) std::cout << g.edges[e].id << "\n";
    return 0;
}

int cmd_verify_cert(const Printer& out, const Config& cfg, const std::string& p1,
                    const std::string& p2, const std::string& cert_path) {
    std::string t1 = slurp(p1), t2 = slurp(p2);
    SgfDocument d1 = parse_sgf(t1);
    SgfDocument d2 = parse_sgf(t2);
    StochasticGraph g1 = shift_graph_of(t1, d1, cfg);
    StochasticGraph g2 = shift_graph_of(t2, d2, cfg);

    bool asserted = false;
    std::vector<std::pair<std::string, std::string>> h1, h2;
    std::string rest;
    std::istringstream in(slurp(cert_path));
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key, a, b;
        ls >> key;
        if (key == "cert") {
            ls >> a;
            if (a == "yes") asserted = true;
            else if (a != "no") throw ParseError("cert line wants yes or no");
        } else if (key == "hom1" || key == "hom2") {
            if (!(ls >> a >> b)) throw ParseError(key + " line wants two edge ids");
            (key == "hom1" ? h1 : h2).emplace_back(a, b);
        } else {
            rest += line + "\n";
        }
    }
    if (!asserted) {
        out.kv("cert.valid", false);
        out.kv("cert.reason", "certificate does not assert yes");
        return 2;
    }
    SgfDocument cd = parse_sgf(rest);
    const StochasticGraph& ghat = cd.graph;

    auto build = [&](const std::vector<std::pair<std::string, std::string>>& lines,
                     const StochasticGraph& target, const char* side) {
        std::vector<int> hom(ghat.num_edges(), -1);
        for (const auto& [ge, te] : lines) {
            int e = ghat.edge_index(ge);
            int t = target.edge_index(te);
            if (e < 0) throw Error(std::string(side) + ": unknown extension edge '" + ge + "'");
            if (t < 0) throw Error(std::string(side) + ": unknown target edge '" + te + "'");
            if (hom[e] >= 0) throw Error(std::string(side) + ": edge '" + ge + "' mapped twice");
            hom[e] = t;
        }
        for (int e = 0; e < ghat.num_edges(); ++e)
            if (hom[e] < 0)
                throw Error(std::string(side) + ": edge '" + ghat.edges[e].id + "' unmapped");
        return hom;
    };

    try {
        std::vector<int> hom1 = build(h1, g1, "hom1");
        std::vector<int> hom2 = build(h2, g2, "hom2");
        if (cd.rho) {
            if (!check_rho_uniform(ghat, *cd.rho))
                throw Error("certificate graph is not rho-uniform");
        }
        GraphHom phi1 = check_hom(ghat, g1, hom1);
        GraphHom phi2 = check_hom(ghat, g2, hom2);
        if (!hom_degree_one(phi1, cfg.subset_budget).degree_is_one)
            throw Error("hom1 is not a degree-1 projection");
        if (!hom_degree_one(phi2, cfg.subset_budget).degree_is_one)
            throw Error("hom2 is not a degree-1 projection");
    } catch (const Error& e) {
        out.kv("cert.valid", false);
        out.kv("cert.reason", e.what());
        return 2;
    }
    out.kv("cert.valid", true);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isomorphism toolkit for rho-uniform shift graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    bool report = false;
    app.add_flag("--report", report, "machine-readable key=value output");
    app.add_option("--n-max", cfg.n_max, "deepest stringing level searched");
    app.add_option("--coloring-budget", cfg.coloring_budget, "colorings tried per level");
    app.add_option("--subset-budget", cfg.subset_budget, "states per image-subset search");
    app.add_option("--persistent-budget", cfg.persistent_budget, "states per persistence search");
    app.add_option("--d-max", cfg.d_max, "largest supported extension size");
    app.add_option("--seed", cfg.seed, "simulation seed");
    app.add_option("--jobs", cfg.jobs, "worker threads for the coloring grid");
    app.add_option("--time-budget-ms", cfg.time_budget_ms, "wall-clock cap, 0 = off");
    app.add_flag("--accept-budgeted-minimality", cfg.accept_budgeted_minimality,
                 "certify minimality relative to exhausted budgets");

    std::string path1, path2, path3, out_path, cert_path;
    int length = 32;

    auto* c_validate = app.add_subcommand("validate", "parse and validate a shift graph file");
    c_validate->add_option("file", path1, "input .sgf")->required();

    auto* c_info = app.add_subcommand("info", "print basic facts about a shift graph");
    c_info->add_option("file", path1, "input .sgf")->required();

    auto* c_degree = app.add_subcommand("degree", "search for the minimal extension size");
    c_degree->add_option("file", path1, "input .sgf with rho")->required();

    auto* c_canon = app.add_subcommand("canon", "compute the canonical skew-product form");
    c_canon->add_option("file", path1, "input .sgf with rho")->required();
    c_canon->add_option("--out", out_path, "write the reduced extension here");

    auto* c_iso = app.add_subcommand("iso", "decide isomorphism of two shift graphs");
    c_iso->add_option("first", path1, "input .sgf")->required();
    c_iso->add_option("second", path2, "input .sgf")->required();
    c_iso->add_option("--cert", cert_path, "write a checkable certificate on YES");

    auto* c_common = app.add_subcommand("common-ext", "common degree-1 extension of two shifts");
    c_common->add_option("first", path1, "input .sgf")->required();
    c_common->add_option("second", path2, "input .sgf")->required();
    c_common->add_option("--out", out_path, "write the certificate here");

    auto* c_sample = app.add_subcommand("sample", "draw a stationary trajectory");
    c_sample->add_option("file", path1, "input .sgf")->required();
    c_sample->add_option("--length", length, "steps to draw");

    auto* c_verify = app.add_subcommand("verify-cert", "re-check an isomorphism certificate");
    c_verify->add_option("first", path1, "input .sgf")->required();
    c_verify->add_option("second", path2, "input .sgf")->required();
    c_verify->add_option("cert", path3, "certificate file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Printer out{report};
    try {
        if (c_validate->parsed()) return cmd_validate(out, cfg, path1);
        if (c_info->parsed()) return cmd_info(out, cfg, path1);
        if (c_degree->parsed()) return cmd_degree(out, cfg, path1);
        if (c_canon->parsed()) return cmd_canon(out, cfg, path1, out_path);
        if (c_iso->parsed()) return cmd_iso(out, cfg, path1, path2, cert_path);
        if (c_common->parsed()) return cmd_common_ext(out, cfg, path1, path2, out_path);
        if (c_sample->parsed()) return cmd_sample(cfg, path1, length);
        if (c_verify->parsed()) return cmd_verify_cert(out, cfg, path1, path2, path3);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
