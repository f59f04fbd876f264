#include "ranwire/path_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ranwire/errors.hpp"
#include "ranwire/rng.hpp"

namespace ranwire {

BigInt PathLengthHistogram::total() const {
    BigInt t = 0;
    for (const auto& [l, c] : counts) t += c;
    return t;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int t = 0; t < k; ++t) r = r * static_cast<double>(n - t) / static_cast<double>(t + 1);
    return std::round(r);
}

double pow_int(double base, int exponent) {
    double r = 1.0;
    for (int t = 0; t < exponent; ++t) r *= base;
    return r;
}

PathLengthHistogram path_length_histogram(const ArchDag& dag, int src, int dst) {
    if (src < 1 || dst > dag.num_nodes || src >= dst)
        throw std::invalid_argument("path_length_histogram: requires 1 <= src < dst <= L");
    const int span = dst - src + 1;
    // counts[v - src][l] = number of src->v paths with l nodes
    std::vector<std::vector<BigInt>> counts(span, std::vector<BigInt>(span + 1, 0));
    counts[0][1] = 1;
    for (const auto& [u, v] : dag.edges) {
        if (u < src || v > dst) continue;
        for (int l = 2; l <= v - src + 1; ++l) {
            const BigInt& from = counts[u - src][l - 1];
            if (from != 0) counts[v - src][l] += from;
        }
    }
    PathLengthHistogram hist;
    hist.src = src;
    hist.dst = dst;
    for (int l = 2; l <= span; ++l)
        if (counts[span - 1][l] != 0) hist.counts[l] = counts[span - 1][l];
    return hist;
}

std::vector<std::vector<int>> enumerate_paths(const ArchDag& dag, int src, int dst,
                                              int max_nodes) {
    if (src < 1 || dst > dag.num_nodes || src > dst)
        throw std::invalid_argument("enumerate_paths: requires 1 <= src <= dst <= L");
    if (dag.num_nodes > max_nodes) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "enumerate_paths: DAG has %d nodes, cap is %d",
                      dag.num_nodes, max_nodes);
        throw CapacityError(buf);
    }
    std::vector<std::vector<int>> succ(dag.num_nodes + 1);
    for (const auto& [i, j] : dag.edges) succ[i].push_back(j);

    std::vector<std::vector<int>> paths;
    std::vector<int> stack{src};
    // iterative DFS over (node, next successor index)
    std::vector<std::size_t> cursor{0};
    while (!stack.empty()) {
        const int v = stack.back();
        if (v == dst) {
            paths.push_back(stack);
            stack.pop_back();
            cursor.pop_back();
            continue;
        }
        if (cursor.back() == succ[v].size()) {
            stack.pop_back();
            cursor.pop_back();
            continue;
        }
        const int w = succ[v][cursor.back()++];
        if (w <= dst) {
            stack.push_back(w);
            cursor.push_back(0);
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

ExpectedPathStats expected_path_stats(int num_nodes, double p, int k) {
    if (k < 1 || k >= num_nodes)
        throw std::invalid_argument("expected_path_stats: requires 1 <= k < L");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("expected_path_stats: p must be in [0,1]");
    ExpectedPathStats out;
    const int n = num_nodes - k - 1;  // intermediate candidates between k and the sink
    for (int l = 2; l <= num_nodes - k + 1; ++l)
        out.expected_count_by_length[l] = binom(n, l - 2) * pow_int(p, l - 1);
    out.expected_total = p * pow_int(1.0 + p, n);
    out.expected_length = p / (1.0 + p) * static_cast<double>(n) + 2.0;
    return out;
}

double expected_edge_path_length(int num_nodes, double p, int i, int j) {
    if (i < 1 || j > num_nodes || i >= j)
        throw std::invalid_argument("expected_edge_path_length: requires 1 <= i < j <= L");
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("expected_edge_path_length: p must be in [0,1]");
    return p / (1.0 + p) * static_cast<double>(num_nodes - (j - i) - 3) + 4.0;
}

namespace {

// Per-realization path counts by length from every node to `dst`, uint64
// DP (exact for L <= 10). back[v][l] = paths v->dst with l nodes.
std::vector<std::vector<std::uint64_t>> backward_counts(int num_nodes,
                                                        const std::vector<ArchEdge>& edges,
                                                        int dst) {
    std::vector<std::vector<std::uint64_t>> back(
        num_nodes + 1, std::vector<std::uint64_t>(num_nodes + 2, 0));
    back[dst][1] = 1;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        const auto [u, v] = *it;
        if (v > dst) continue;
        for (int l = 2; l <= dst - u + 1; ++l) back[u][l] += back[v][l - 1];
    }
    return back;
}

struct LengthMoments {
    double count = 0.0;    // N
    double len_sum = 0.0;  // sum over paths of their length
};

LengthMoments through_edge_moments(int num_nodes, const std::vector<ArchEdge>& edges, int src,
                                   int dst, int ei, int ej) {
    if (!std::binary_search(edges.begin(), edges.end(), ArchEdge{ei, ej})) return {};
    // forward counts src -> ei
    std::vector<std::vector<std::uint64_t>> fwd(
        num_nodes + 1, std::vector<std::uint64_t>(num_nodes + 2, 0));
    fwd[src][1] = 1;
    for (const auto& [u, v] : edges) {
        if (u < src || v > ei) continue;
        for (int l = 2; l <= v - src + 1; ++l) fwd[v][l] += fwd[u][l - 1];
    }
    auto back = backward_counts(num_nodes, edges, dst);
    double n1 = 0, s1 = 0, n2 = 0, s2 = 0;
    for (int l = 1; l <= num_nodes; ++l) {
        n1 += static_cast<double>(fwd[ei][l]);
        s1 += static_cast<double>(l) * static_cast<double>(fwd[ei][l]);
        n2 += static_cast<double>(back[ej][l]);
        s2 += static_cast<double>(l) * static_cast<double>(back[ej][l]);
    }
    // a path through (ei,ej) is segment src->ei plus segment ej->dst
    return {n1 * n2, s1 * n2 + n1 * s2};
}

void validate_oracle_args(int num_nodes, double p, int src, int dst) {
    if (num_nodes < 2) throw std::invalid_argument("er oracle: L must be >= 2");
    if (num_nodes > kOracleMaxNodes) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "er oracle: L=%d exceeds cap %d", num_nodes,
                      kOracleMaxNodes);
        throw CapacityError(buf);
    }
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("er oracle: p must be in [0,1]");
    if (src < 1 || dst > num_nodes || src >= dst)
        throw std::invalid_argument("er oracle: requires 1 <= src < dst <= L");
}

}  // namespace

ErExactTable::ErExactTable(int num_nodes) : num_nodes_(num_nodes) {
    if (num_nodes < 2) throw std::invalid_argument("ErExactTable: L must be >= 2");
    if (num_nodes > kExactEnumerationMaxNodes) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "ErExactTable: L=%d exceeds exact-enumeration cap %d; use Monte-Carlo mode "
                      "(mc_er_expectation)",
                      num_nodes, kExactEnumerationMaxNodes);
        throw CapacityError(buf);
    }
    const int L = num_nodes;
    std::vector<ArchEdge> candidates;
    for (int i = 1; i < L; ++i)
        for (int j = i + 1; j <= L; ++j) candidates.emplace_back(i, j);
    num_candidate_edges_ = static_cast<int>(candidates.size());

    counts_.assign(L, std::vector<std::vector<std::uint64_t>>(
                          L + 2, std::vector<std::uint64_t>(num_candidate_edges_ + 1, 0)));

    // out-edges of each node with their bit positions, for the backward DP
    std::vector<std::vector<std::pair<int, int>>> out_edges(L + 1);
    for (int b = 0; b < num_candidate_edges_; ++b)
        out_edges[candidates[b].first].push_back({candidates[b].second, b});

    std::vector<std::uint32_t> back((L + 1) * (L + 2), 0);
    const auto idx = [L](int v, int l) { return v * (L + 2) + l; };

    const std::uint32_t total_subsets = 1u << num_candidate_edges_;
    for (std::uint32_t subset = 0; subset < total_subsets; ++subset) {
        std::fill(back.begin(), back.end(), 0u);
        back[idx(L, 1)] = 1;
        for (int v = L - 1; v >= 1; --v) {
            for (const auto& [w, bit] : out_edges[v]) {
                if (!(subset & (1u << bit))) continue;
                for (int l = 2; l <= L - v + 1; ++l) back[idx(v, l)] += back[idx(w, l - 1)];
            }
        }
        const int c = __builtin_popcount(subset);
        for (int k = 1; k < L; ++k)
            for (int l = 2; l <= L - k + 1; ++l) counts_[k][l][c] += back[idx(k, l)];
    }
}

double ErExactTable::weighted(double p, const std::vector<std::uint64_t>& bucket) const {
    const int m = num_candidate_edges_;
    double total = 0.0;
    for (int c = 0; c <= m; ++c) {
        if (bucket[c] == 0) continue;
        total += pow_int(p, c) * pow_int(1.0 - p, m - c) * static_cast<double>(bucket[c]);
    }
    return total;
}

double ErExactTable::expected_count(double p, int k, int length) const {
    if (k < 1 || k >= num_nodes_) throw std::invalid_argument("ErExactTable: k out of range");
    if (length < 2 || length > num_nodes_ - k + 1) return 0.0;
    return weighted(p, counts_[k][length]);
}

double ErExactTable::expected_total(double p, int k) const {
    double total = 0.0;
    for (int l = 2; l <= num_nodes_ - k + 1; ++l) total += expected_count(p, k, l);
    return total;
}

double ErExactTable::expected_length_ratio(double p, int k) const {
    double num = 0.0, den = 0.0;
    for (int l = 2; l <= num_nodes_ - k + 1; ++l) {
        const double e = expected_count(p, k, l);
        num += static_cast<double>(l) * e;
        den += e;
    }
    return num / den;
}

ErEstimate exact_er_expectation(int num_nodes, double p, const ErStatistic& stat, int src,
                                int dst) {
    validate_oracle_args(num_nodes, p, src, dst);
    if (num_nodes > kExactEnumerationMaxNodes) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "exact_er_expectation: L=%d exceeds exact cap %d; use mc_er_expectation "
                      "with >= 1e5 samples",
                      num_nodes, kExactEnumerationMaxNodes);
        throw CapacityError(buf);
    }
    // Edges outside [src, dst] never touch a src->dst path and integrate
    // out of the expectation, so enumerate the window only.
    const int L = dst - src + 1;
    std::vector<ArchEdge> candidates;
    for (int i = 1; i < L; ++i)
        for (int j = i + 1; j <= L; ++j) candidates.emplace_back(i, j);
    const int m = static_cast<int>(candidates.size());

    const bool through_edge = stat.kind == ErStatistic::Kind::EdgeMeanLength;
    int ei = 0, ej = 0;
    if (through_edge) {
        ei = stat.edge_i - src + 1;
        ej = stat.edge_j - src + 1;
        if (ei < 1 || ej > L || ei >= ej)
            throw std::invalid_argument("exact_er_expectation: edge outside [src,dst] window");
    }

    // integer buckets by edge count keep the sums order-independent
    std::vector<std::uint64_t> count_b(m + 1, 0), lensum_b(m + 1, 0), len_b(m + 1, 0);
    std::vector<ArchEdge> subset_edges;
    const std::uint32_t total_subsets = 1u << m;
    for (std::uint32_t subset = 0; subset < total_subsets; ++subset) {
        subset_edges.clear();
        for (int b = 0; b < m; ++b)
            if (subset & (1u << b)) subset_edges.push_back(candidates[b]);
        const int c = __builtin_popcount(subset);
        if (through_edge) {
            const auto mom = through_edge_moments(L, subset_edges, 1, L, ei, ej);
            count_b[c] += static_cast<std::uint64_t>(mom.count);
            lensum_b[c] += static_cast<std::uint64_t>(mom.len_sum);
        } else {
            auto back = backward_counts(L, subset_edges, L);
            for (int l = 2; l <= L; ++l) {
                const std::uint64_t n = back[1][l];
                if (n == 0) continue;
                count_b[c] += n;
                lensum_b[c] += static_cast<std::uint64_t>(l) * n;
                if (stat.kind == ErStatistic::Kind::CountOfLength && l == stat.length)
                    len_b[c] += n;
            }
        }
    }

    const auto weighted = [&](const std::vector<std::uint64_t>& bucket) {
        double total = 0.0;
        for (int c = 0; c <= m; ++c)
            if (bucket[c] != 0)
                total += pow_int(p, c) * pow_int(1.0 - p, m - c) * static_cast<double>(bucket[c]);
        return total;
    };

    ErEstimate est;
    switch (stat.kind) {
        case ErStatistic::Kind::PathCount: est.value = weighted(count_b); break;
        case ErStatistic::Kind::CountOfLength: est.value = weighted(len_b); break;
        case ErStatistic::Kind::MeanLengthRatio:
            est.value = weighted(lensum_b) / weighted(count_b);
            break;
        case ErStatistic::Kind::EdgeMeanLength:
            est.value = weighted(lensum_b) / weighted(count_b);
            break;
    }
    return est;
}

ErEstimate mc_er_expectation(int num_nodes, double p, const ErStatistic& stat, int src, int dst,
                             std::int64_t samples, std::uint64_t seed) {
    validate_oracle_args(num_nodes, p, src, dst);
    if (samples < 1) throw std::invalid_argument("mc_er_expectation: samples must be >= 1");

    const bool ratio_stat = stat.kind == ErStatistic::Kind::MeanLengthRatio ||
                            stat.kind == ErStatistic::Kind::EdgeMeanLength;

    // per-sample primary statistic x (and ratio denominator y)
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    double ratio_sum = 0, ratio_sq = 0;
    std::int64_t ratio_n = 0;

    for (std::int64_t s = 0; s < samples; ++s) {
        const ArchDag dag = generate_er_dag(num_nodes, p, mix64(seed) ^ mix64(s + 1));
        double x = 0, y = 0;
        if (stat.kind == ErStatistic::Kind::EdgeMeanLength) {
            const auto mom =
                through_edge_moments(num_nodes, dag.edges, src, dst, stat.edge_i, stat.edge_j);
            x = mom.len_sum;
            y = mom.count;
        } else {
            auto back = backward_counts(num_nodes, dag.edges, dst);
            double n = 0, lensum = 0, nl = 0;
            for (int l = 2; l <= dst - src + 1; ++l) {
                const double c = static_cast<double>(back[src][l]);
                n += c;
                lensum += static_cast<double>(l) * c;
                if (l == stat.length) nl = c;
            }
            switch (stat.kind) {
                case ErStatistic::Kind::PathCount: x = n; break;
                case ErStatistic::Kind::CountOfLength: x = nl; break;
                case ErStatistic::Kind::MeanLengthRatio:
                    x = lensum;
                    y = n;
                    break;
                default: break;
            }
            if (stat.kind == ErStatistic::Kind::MeanLengthRatio && n > 0) {
                const double r = lensum / n;
                ratio_sum += r;
                ratio_sq += r * r;
                ++ratio_n;
            }
        }
        sx += x;
        sxx += x * x;
        if (ratio_stat) {
            sy += y;
            syy += y * y;
            sxy += x * y;
        }
    }

    const double n = static_cast<double>(samples);
    ErEstimate est;
    est.samples = samples;
    if (!ratio_stat) {
        est.value = sx / n;
        const double var = std::max(0.0, (sxx - sx * sx / n) / std::max(1.0, n - 1.0));
        est.std_error = std::sqrt(var / n);
    } else {
        const double mx = sx / n, my = sy / n;
        const double r = mx / my;
        est.value = r;
        // delta method for the ratio of means
        const double vxx = (sxx - n * mx * mx) / std::max(1.0, n - 1.0);
        const double vyy = (syy - n * my * my) / std::max(1.0, n - 1.0);
        const double vxy = (sxy - n * mx * my) / std::max(1.0, n - 1.0);
        const double var_r = (vxx - 2.0 * r * vxy + r * r * vyy) / (my * my);
        est.std_error = std::sqrt(std::max(0.0, var_r) / n);
        if (stat.kind == ErStatistic::Kind::MeanLengthRatio && ratio_n > 0) {
            const double rn = static_cast<double>(ratio_n);
            const double rmean = ratio_sum / rn;
            est.mean_of_ratio = rmean;
            const double rvar =
                std::max(0.0, (ratio_sq - rn * rmean * rmean) / std::max(1.0, rn - 1.0));
            est.mean_of_ratio_se = std::sqrt(rvar / rn);
        }
    }
    return est;
}

RadiusDistribution radius_distribution(const ArchDag& dag,
                                       const std::map<ArchEdge, double>& edge_weights,
                                       bool normalized) {
    const int L = dag.num_nodes;
    for (const auto& e : dag.edges) {
        auto it = edge_weights.find(e);
        char buf[96];
        if (it == edge_weights.end()) {
            std::snprintf(buf, sizeof(buf), "radius_distribution: missing weight for edge (%d,%d)",
                          e.first, e.second);
            throw std::invalid_argument(buf);
        }
        if (!(it->second > 0.0) || it->second > 1.0) {
            std::snprintf(buf, sizeof(buf),
                          "radius_distribution: weight for edge (%d,%d) must be in (0,1]", e.first,
                          e.second);
            throw std::invalid_argument(buf);
        }
    }
    // mass[v][l]: weighted count of source->v paths with l nodes
    std::vector<std::vector<double>> mass(L + 1, std::vector<double>(L + 1, 0.0));
    mass[1][1] = 1.0;
    for (const auto& [u, v] : dag.edges) {
        const double w = edge_weights.at({u, v});
        for (int l = 2; l <= v; ++l) mass[v][l] += mass[u][l - 1] * w;
    }
    RadiusDistribution rho;
    for (int l = 2; l <= L; ++l)
        if (mass[L][l] != 0.0) rho.mass[l] = mass[L][l];
    if (normalized) {
        double total = 0.0;
        for (const auto& [l, v] : rho.mass) total += v;
        if (total == 0.0)
            throw DegenerateDistributionError(
                "radius_distribution: no source->sink path; cannot normalize");
        for (auto& [l, v] : rho.mass) v /= total;
        rho.normalized = true;
    }
    return rho;
}

}  // namespace ranwire
