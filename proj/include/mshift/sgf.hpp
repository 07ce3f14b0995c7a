#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mshift/graph.hpp"
#include "mshift/permutation.hpp"

namespace mshift {

// One cocycle assignment: letter x base-vertex -> permutation of the fiber.
struct CocycleLine {
    std::string letter;
    std::string vertex;
    Permutation perm;
};

// Parsed .sgf content. Line kinds:
//   # comment
//   graph <name>
//   rho <letter> <rational>
//   vertex <id>
//   edge <id> <src> <dst> <rational> [label=<letter>]
//   color <edge-id> <letter>            (same meaning as label=)
//   cocycle <letter> <vertex> [y1 .. yd]
// Rationals are "n", "n/m" or finite decimals, converted exactly.
struct SgfDocument {
    StochasticGraph graph;
    std::optional<Rho> rho;
    std::vector<std::string> labels;  // per edge; empty string = unlabeled
    std::vector<CocycleLine> cocycles;

    bool fully_labeled() const {
        if (labels.size() != static_cast<std::size_t>(graph.num_edges())) return false;
        for (const auto& l : labels)
            if (l.empty()) return false;
        return true;
    }

    // Letter index per edge; requires rho and a total labeling.
    std::vector<int> coloring() const {
        if (!rho) throw Error("sgf: no rho section, cannot interpret labels");
        if (!fully_labeled()) throw Error("sgf: labeling is not total");
        std::vector<int> c(graph.num_edges());
        for (int e = 0; e < graph.num_edges(); ++e) {
            int i = rho->index_of(labels[e]);
            if (i < 0) throw Error("sgf: label '" + labels[e] + "' is not a rho letter");
            c[e] = i;
        }
        return c;
    }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

}  // namespace detail

inline SgfDocument parse_sgf(const std::string& text) {
    struct RawEdge {
        std::string id, src, dst, weight, label;
        int line;
    };
    std::string name;
    std::vector<std::pair<std::string, std::string>> rho_lines;
    std::vector<std::string> vertex_ids;
    std::vector<RawEdge> raw_edges;
    std::vector<std::pair<std::string, std::string>> color_lines;
    std::vector<CocycleLine> cocycles;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "graph") {
            if (toks.size() != 2) throw ParseError("graph line wants 1 argument", lineno);
            name = toks[1];
        } else if (key == "rho") {
            if (toks.size() != 3) throw ParseError("rho line wants 2 arguments", lineno);
            rho_lines.emplace_back(toks[1], toks[2]);
        } else if (key == "vertex") {
            if (toks.size() != 2) throw ParseError("vertex line wants 1 argument", lineno);
            vertex_ids.push_back(toks[1]);
        } else if (key == "edge") {
            if (toks.size() != 5 && toks.size() != 6)
                throw ParseError("edge line wants 4 arguments plus optional label=", lineno);
            RawEdge e{toks[1], toks[2], toks[3], toks[4], "", lineno};
            if (toks.size() == 6) {
                if (toks[5].rfind("label=", 0) != 0 || toks[5].size() <= 6)
                    throw ParseError("bad edge attribute '" + toks[5] + "'", lineno);
                e.label = toks[5].substr(6);
            }
            raw_edges.push_back(std::move(e));
        } else if (key == "color") {
            if (toks.size() != 3) throw ParseError("color line wants 2 arguments", lineno);
            color_lines.emplace_back(toks[1], toks[2]);
        } else if (key == "cocycle") {
            if (toks.size() < 4) throw ParseError("cocycle line wants letter, vertex, permutation", lineno);
            std::string perm;
            for (std::size_t i = 3; i < toks.size(); ++i) {
                if (i > 3) perm += ' ';
                perm += toks[i];
            }
            try {
                cocycles.push_back({toks[1], toks[2], parse_permutation(perm)});
            } catch (const ParseError& pe) {
                throw ParseError(pe.what(), lineno);
            }
        } else {
            throw ParseError("unknown keyword '" + key + "'", lineno);
        }
    }

    SgfDocument doc;
    if (!rho_lines.empty()) {
        Rho rho;
        for (auto& [letter, weight] : rho_lines) {
            rho.letters.push_back(letter);
            rho.weights.push_back(parse_rational(weight));
        }
        rho.validate();
        doc.rho = std::move(rho);
    }

    std::unordered_map<std::string, int> vmap;
    for (const auto& id : vertex_ids) {
        if (!vmap.emplace(id, static_cast<int>(vmap.size())).second)
            throw ParseError("duplicate vertex id '" + id + "'");
    }
    std::vector<GraphEdge> edges;
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> emap;
    for (const auto& re : raw_edges) {
        auto s = vmap.find(re.src);
        auto t = vmap.find(re.dst);
        if (s == vmap.end()) throw ParseError("edge '" + re.id + "': unknown vertex '" + re.src + "'", re.line);
        if (t == vmap.end()) throw ParseError("edge '" + re.id + "': unknown vertex '" + re.dst + "'", re.line);
        GraphEdge e;
        e.id = re.id;
        e.src = s->second;
        e.dst = t->second;
        try {
            e.weight = parse_rational(re.weight);
        } catch (const ParseError& pe) {
            throw ParseError(pe.what(), re.line);
        }
        if (!emap.emplace(re.id, static_cast<int>(edges.size())).second)
            throw ParseError("duplicate edge id '" + re.id + "'", re.line);
        edges.push_back(std::move(e));
        labels.push_back(re.label);
    }
    for (const auto& [eid, letter] : color_lines) {
        auto it = emap.find(eid);
        if (it == emap.end()) throw ParseError("color line names unknown edge '" + eid + "'");
        if (!labels[it->second].empty() && labels[it->second] != letter)
            throw ParseError("conflicting labels for edge '" + eid + "'");
        labels[it->second] = letter;
    }

    doc.graph.name = name;
    doc.graph.vertex_ids = std::move(vertex_ids);
    doc.graph.edges = std::move(edges);
    doc.graph.build_adjacency();
    doc.graph.validate();
    doc.labels = std::move(labels);
    doc.cocycles = std::move(cocycles);
    return doc;
}

// Deterministic emission; parse(emit(doc)) reproduces doc and emit is idempotent
// under round-trips. Labels are written inline as label= attributes.
inline std::string emit_sgf(const StochasticGraph& g, const std::optional<Rho>& rho = std::nullopt,
                            const std::vector<std::string>& labels = {},
                            const std::vector<CocycleLine>& cocycles = {}) {
    std::string out;
    if (!g.name.empty()) out += "graph " + g.name + "\n";
    if (rho)
        for (int i = 0; i < rho->size(); ++i)
            out += "rho " + rho->letters[i] + " " + format_rational(rho->weights[i]) + "\n";
    for (const auto& id : g.vertex_ids) out += "vertex " + id + "\n";
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& ed = g.edges[e];
        out += "edge " + ed.id + " " + g.vertex_ids[ed.src] + " " + g.vertex_ids[ed.dst] + " " +
               format_rational(ed.weight);
        if (e < static_cast<int>(labels.size()) && !labels[e].empty()) out += " label=" + labels[e];
        out += "\n";
    }
    for (const auto& c : cocycles)
        out += "cocycle " + c.letter + " " + c.vertex + " " + c.perm.str() + "\n";
    return out;
}

inline std::string emit_sgf(const SgfDocument& doc) {
    return emit_sgf(doc.graph, doc.rho, doc.labels, doc.cocycles);
}

}  // namespace mshift
