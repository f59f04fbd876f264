#include "ranwire/arch_dag.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ranwire/errors.hpp"
#include "ranwire/rng.hpp"

namespace ranwire {

bool ArchDag::has_edge(int i, int j) const {
    return std::binary_search(edges.begin(), edges.end(), ArchEdge{i, j});
}

std::vector<int> ArchDag::predecessors(int node) const {
    std::vector<int> out;
    for (const auto& [i, j] : edges)
        if (j == node) out.push_back(i);
    return out;
}

std::vector<int> ArchDag::successors(int node) const {
    std::vector<int> out;
    for (const auto& [i, j] : edges)
        if (i == node) out.push_back(j);
    return out;
}

ArchDag make_arch_dag(int num_nodes, std::vector<ArchEdge> edges, double gen_p,
                      std::uint64_t seed, bool sequential_embedded) {
    if (num_nodes < 2) throw std::invalid_argument("ArchDag requires at least 2 nodes");
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto [i, j] = edges[k];
        char buf[96];
        if (i >= j) {
            std::snprintf(buf, sizeof(buf), "edge (%d,%d): requires i < j", i, j);
            throw ParseError(buf);
        }
        if (i < 1 || j > num_nodes) {
            std::snprintf(buf, sizeof(buf), "edge (%d,%d): node index out of range (L=%d)", i, j,
                          num_nodes);
            throw ParseError(buf);
        }
        if (k > 0 && edges[k] == edges[k - 1]) {
            std::snprintf(buf, sizeof(buf), "edge (%d,%d): duplicate", i, j);
            throw ParseError(buf);
        }
    }
    ArchDag dag;
    dag.num_nodes = num_nodes;
    dag.edges = std::move(edges);
    dag.gen_p = gen_p;
    dag.seed = seed;
    dag.sequential_embedded = sequential_embedded;
    return dag;
}

ArchDag generate_er_dag(int num_nodes, double p, std::uint64_t seed) {
    if (num_nodes < 2) throw std::invalid_argument("generate_er_dag: L must be >= 2");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("generate_er_dag: p must be in [0,1]");
    Rng rng = substream(seed, stream::kArchEdges);
    ArchDag dag;
    dag.num_nodes = num_nodes;
    dag.gen_p = p;
    dag.seed = seed;
    // One draw per candidate edge, row-major, regardless of p.
    for (int i = 1; i < num_nodes; ++i)
        for (int j = i + 1; j <= num_nodes; ++j)
            if (rng.bernoulli(p)) dag.edges.emplace_back(i, j);
    return dag;
}

ArchDag embed_sequential_path(const ArchDag& dag) {
    ArchDag out = dag;
    for (int i = 1; i < dag.num_nodes; ++i) {
        ArchEdge e{i, i + 1};
        if (!dag.has_edge(i, i + 1)) out.edges.push_back(e);
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.sequential_embedded = true;
    return out;
}

WiredArch wire_terminals(const ArchDag& dag) {
    std::vector<int> in_deg(dag.num_nodes + 1, 0);
    std::vector<int> out_deg(dag.num_nodes + 1, 0);
    for (const auto& [i, j] : dag.edges) {
        ++out_deg[i];
        ++in_deg[j];
    }
    WiredArch wired;
    wired.dag = dag;
    for (int v = 1; v <= dag.num_nodes; ++v) {
        if (in_deg[v] == 0) wired.input_nodes.push_back(v);
        if (out_deg[v] == 0) wired.output_nodes.push_back(v);
    }
    return wired;
}

std::string serialize(const ArchDag& dag) {
    char buf[64];
    std::string out;
    std::snprintf(buf, sizeof(buf), "L=%d\n", dag.num_nodes);
    out += buf;
    std::snprintf(buf, sizeof(buf), "p=%.17g\n", dag.gen_p);
    out += buf;
    std::snprintf(buf, sizeof(buf), "seed=%llu\n", static_cast<unsigned long long>(dag.seed));
    out += buf;
    std::snprintf(buf, sizeof(buf), "sequential=%d\n", dag.sequential_embedded ? 1 : 0);
    out += buf;
    for (const auto& [i, j] : dag.edges) {
        std::snprintf(buf, sizeof(buf), "%d %d\n", i, j);
        out += buf;
    }
    return out;
}

ArchDag deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int num_nodes = -1;
    double p = -1.0;
    bool have_p = false, have_seed = false, have_seq = false;
    std::uint64_t seed = 0;
    bool sequential = false;
    std::vector<ArchEdge> edges;

    auto parse_header = [&](const std::string& l) -> bool {
        auto eq = l.find('=');
        if (eq == std::string::npos) return false;
        const std::string key = l.substr(0, eq);
        const std::string val = l.substr(eq + 1);
        try {
            if (key == "L") {
                num_nodes = std::stoi(val);
            } else if (key == "p") {
                p = std::stod(val);
                have_p = true;
            } else if (key == "seed") {
                seed = std::stoull(val);
                have_seed = true;
            } else if (key == "sequential") {
                if (val != "0" && val != "1") throw ParseError("field sequential: expected 0 or 1");
                sequential = (val == "1");
                have_seq = true;
            } else {
                throw ParseError("unknown header field '" + key + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("field " + key + ": malformed value '" + val + "'");
        }
        return true;
    };

    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.find('=') != std::string::npos) {
            parse_header(line);
            continue;
        }
        int i = 0, j = 0;
        if (std::sscanf(line.c_str(), "%d %d", &i, &j) != 2)
            throw ParseError("edge line '" + line + "': expected 'i j'");
        edges.emplace_back(i, j);
    }
    if (num_nodes < 0) throw ParseError("field L: missing");
    if (!have_p) throw ParseError("field p: missing");
    if (!have_seed) throw ParseError("field seed: missing");
    if (!have_seq) throw ParseError("field sequential: missing");
    return make_arch_dag(num_nodes, std::move(edges), p, seed, sequential);
}

ArchDag load_arch(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open architecture file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

void save_arch(const ArchDag& dag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write architecture file: " + path);
    out << serialize(dag);
}

}  // namespace ranwire
