#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ranwire {

// Architecture edge between 1-indexed architecture nodes, always i < j.
using ArchEdge = std::pair<int, int>;

// Randomly wired architecture DAG. Nodes are 1-indexed; node 1 is the
// source, node num_nodes the sink. The edge set is strictly upper
// triangular (i < j), so acyclicity is structural.
struct ArchDag {
    int num_nodes = 0;
    std::vector<ArchEdge> edges;  // sorted row-major, no duplicates
    double gen_p = 0.0;
    std::uint64_t seed = 0;
    bool sequential_embedded = false;

    bool has_edge(int i, int j) const;
    std::vector<int> predecessors(int node) const;  // the set A_i
    std::vector<int> successors(int node) const;

    bool operator==(const ArchDag& other) const = default;
};

// ArchDag plus its terminal wiring: predecessor-less nodes are fed the
// global input, successor-less nodes are averaged into the global output.
struct WiredArch {
    ArchDag dag;
    std::vector<int> input_nodes;
    std::vector<int> output_nodes;
};

// Samples each of the L(L-1)/2 candidate edges (i,j), i<j, independently
// with probability p, enumerating candidates row-major so a seed always
// reproduces the same DAG. Throws std::invalid_argument for L < 2 or p
// outside [0,1].
ArchDag generate_er_dag(int num_nodes, double p, std::uint64_t seed);

// Copy of `dag` with the chain 1->2->...->L unioned in and the
// sequential_embedded flag set.
ArchDag embed_sequential_path(const ArchDag& dag);

WiredArch wire_terminals(const ArchDag& dag);

// Text format: `L=`, `p=`, `seed=`, `sequential=` header lines followed by
// one `i j` edge per line in ascending order. Round-trips exactly.
std::string serialize(const ArchDag& dag);
ArchDag deserialize(const std::string& text);

ArchDag load_arch(const std::string& path);
void save_arch(const ArchDag& dag, const std::string& path);

// Validates node range, i<j and duplicates; throws ParseError naming the
// offending edge. Used by both the parser and hand-built DAGs.
ArchDag make_arch_dag(int num_nodes, std::vector<ArchEdge> edges, double gen_p = 0.0,
                      std::uint64_t seed = 0, bool sequential_embedded = false);

}  // namespace ranwire
