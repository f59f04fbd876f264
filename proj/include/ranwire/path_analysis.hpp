#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ranwire/arch_dag.hpp"

namespace ranwire {

// Counts reach 2^{L-2}, which overflows 64 bits near L = 66; path counts
// are kept exact at any size.
using BigInt = boost::multiprecision::cpp_int;

// Path length is the number of nodes on the path (minimum 2 for src < dst).
struct PathLengthHistogram {
    int src = 0;
    int dst = 0;
    std::map<int, BigInt> counts;  // length -> exact count, zero entries omitted

    BigInt total() const;
};

// Receptive-field radius mass per length, Eq.-style: rho_l is the sum over
// paths of length l of the product of edge weights along the path.
struct RadiusDistribution {
    std::map<int, double> mass;
    bool normalized = false;
};

// Exact per-length path counts via DP in index order.
PathLengthHistogram path_length_histogram(const ArchDag& dag, int src, int dst);

// Every src->dst path as an explicit node sequence (DFS). Guarded: throws
// CapacityError when the DAG exceeds `max_nodes` nodes.
std::vector<std::vector<int>> enumerate_paths(const ArchDag& dag, int src, int dst,
                                              int max_nodes = 16);

// Closed forms for the Erdos-Renyi ensemble, node k to the sink of an
// L-node DAG:
//   E[N_l] = binom(L-k-1, l-2) p^{l-1}
//   E[N]   = p (1+p)^{L-k-1}
//   E[len] = p/(1+p) (L-k-1) + 2      (ratio of expectations)
struct ExpectedPathStats {
    std::map<int, double> expected_count_by_length;  // l in [2, L-k+1]
    double expected_total = 0.0;
    double expected_length = 0.0;
};
ExpectedPathStats expected_path_stats(int num_nodes, double p, int k);

// Mean length of source->sink paths through interior edge (i,j):
// p/(1+p) (L-(j-i)-3) + 4. Breaks down for boundary edges (i=1 or j=L).
double expected_edge_path_length(int num_nodes, double p, int i, int j);

// Statistic selector for the brute-force ensemble oracle.
struct ErStatistic {
    enum class Kind { PathCount, CountOfLength, MeanLengthRatio, EdgeMeanLength };
    Kind kind = Kind::PathCount;
    int length = 0;  // CountOfLength
    int edge_i = 0, edge_j = 0;  // EdgeMeanLength

    static ErStatistic path_count() { return {Kind::PathCount, 0, 0, 0}; }
    static ErStatistic count_of_length(int l) { return {Kind::CountOfLength, l, 0, 0}; }
    static ErStatistic mean_length_ratio() { return {Kind::MeanLengthRatio, 0, 0, 0}; }
    static ErStatistic edge_mean_length(int i, int j) { return {Kind::EdgeMeanLength, 0, i, j}; }
};

struct ErEstimate {
    double value = 0.0;                     // expectation (ratio statistics: ratio of expectations)
    std::optional<double> std_error;        // Monte-Carlo mode only
    std::int64_t samples = 0;               // 0 in exact mode
    // MeanLengthRatio, Monte-Carlo mode: sample mean of the per-realization
    // ratio conditioned on N > 0, i.e. the quantity the closed form
    // approximates by dropping higher-order terms.
    std::optional<double> mean_of_ratio;
    std::optional<double> mean_of_ratio_se;
};

inline constexpr int kExactEnumerationMaxNodes = 7;
inline constexpr int kOracleMaxNodes = 10;

// Exact mode: sums the statistic over all 2^{L(L-1)/2} edge subsets,
// weighting each by p^{|S|} (1-p)^{m-|S|}. Hard cap L <= 7; above it a
// CapacityError points at the Monte-Carlo variant.
ErEstimate exact_er_expectation(int num_nodes, double p, const ErStatistic& stat, int src, int dst);

// Monte-Carlo mode for 8 <= L <= 10 (allowed for smaller L too): samples
// DAGs through generate_er_dag and reports value +/- standard error.
ErEstimate mc_er_expectation(int num_nodes, double p, const ErStatistic& stat, int src, int dst,
                             std::int64_t samples, std::uint64_t seed);

// Bucketed exact ensemble table for one L: path counts from every start
// node k to the sink, grouped by subset edge count, so expectations for a
// whole (p, k, l) grid come from a single enumeration pass. Integer
// buckets make the result independent of accumulation order.
class ErExactTable {
public:
    explicit ErExactTable(int num_nodes);  // throws CapacityError above the cap

    int num_nodes() const { return num_nodes_; }
    double expected_count(double p, int k, int length) const;
    double expected_total(double p, int k) const;
    // Exact ratio of expectations sum_l l E[N_l] / E[N]; NaN when E[N]=0.
    double expected_length_ratio(double p, int k) const;

private:
    double weighted(double p, const std::vector<std::uint64_t>& bucket) const;
    int num_nodes_;
    int num_candidate_edges_;
    // counts_[k][l][c] = sum over subsets with c edges of N_l^{(k)}
    std::vector<std::vector<std::vector<std::uint64_t>>> counts_;
};

// Weighted per-length DP over the DAG, source (node 1) to sink (node L).
// Never enumerates paths. Throws std::invalid_argument on a missing or
// out-of-range weight, and a degenerate-distribution error when
// normalized=true and no source->sink path exists.
RadiusDistribution radius_distribution(const ArchDag& dag,
                                       const std::map<ArchEdge, double>& edge_weights,
                                       bool normalized);

// exact binomial coefficient in double precision (small arguments)
double binom(int n, int k);
// p^e by repeated multiplication; shared by closed forms and oracles
double pow_int(double base, int exponent);

}  // namespace ranwire
