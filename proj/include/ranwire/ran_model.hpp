#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ranwire/arch_dag.hpp"
#include "ranwire/gnn_layers.hpp"
#include "ranwire/graph_data.hpp"
#include "ranwire/tensor.hpp"

namespace ranwire {

struct ModelConfig {
    ConvType conv_type = ConvType::Gcn;
    int hidden_dim = 16;
    int num_nodes = 4;  // L, architecture nodes
    double p = 0.6;
    std::uint64_t seed = 0;          // drives architecture wiring
    bool sequential_path = false;
    double p_drop = 0.0;
    int mc_samples = 10;
    Task task = Task::NodeRegression;
    int input_dim = 1;
    int output_dim = 1;
    int edge_dim = 0;        // dataset edge-feature width (GatedGCN)
    bool linear_mode = false;  // identity activation/BN, GCN conv, linear readout

    void validate() const;  // throws std::invalid_argument
};

// Per-architecture-edge Bernoulli keep mask; one draw per edge in the
// DAG's sorted edge order.
struct DropPathMask {
    std::vector<ArchEdge> edges;  // dag edge order at sampling time
    std::vector<char> keep;
    std::uint64_t seed = 0;

    bool keeps(std::size_t edge_index) const { return keep[edge_index] != 0; }
};

DropPathMask sample_droppath_mask(const ArchDag& dag, double p_drop, std::uint64_t seed);

// Assembled randomly wired GNN. Aggregation weight of architecture edge
// (i,j) is sigmoid(edge_logits[k]) for the edge's position k in the sorted
// edge list, so omega always lies in (0,1).
struct RanGnnModel {
    ModelConfig config;
    WiredArch wired;
    Tensor edge_logits;              // (|edges|, 1), trainable
    Tensor embed_W, embed_b;         // input_dim -> hidden
    Tensor edge_embed_W, edge_embed_b;  // gated only: edge_dim -> hidden
    std::vector<LayerParams> nodes;  // one per architecture node, index 0 = node 1
    std::vector<Tensor> head_W, head_b;  // 1 head, or L heads for the GIN readout

    std::size_t num_edges() const { return wired.dag.edges.size(); }
    double omega(std::size_t edge_index) const;  // sigmoid of the logit
    std::map<ArchEdge, double> omega_map() const;
    bool uses_jk_readout() const { return config.conv_type == ConvType::Gin; }
    // Trainable tensors in a fixed order (optimizer state aligns to this).
    std::vector<Tensor*> param_list();
};

// DAG + terminals from config.seed; edge logits start at 0 (omega = 0.5),
// layer weights uniform in +/- 1/sqrt(fan_in) from init_seed's stream.
RanGnnModel build_model(const ModelConfig& config, std::uint64_t init_seed);

struct ForwardResult {
    Tensor prediction;
    std::vector<Tensor> node_outputs;  // per architecture node, index 0 = node 1
};

// Tape-level forward; callers that need gradients drive the tape directly.
struct ModelBinding {
    ValueId edge_logits = -1;
    ValueId embed_W = -1, embed_b = -1;
    ValueId edge_embed_W = -1, edge_embed_b = -1;
    std::vector<LayerIds> layers;
    std::vector<ValueId> head_W, head_b;
    std::vector<std::pair<Tensor*, ValueId>> bound;  // param -> leaf, param_list order
};

ModelBinding bind_model(Tape& tape, RanGnnModel& model);

struct ForwardIds {
    ValueId prediction = -1;
    std::vector<ValueId> node_outputs;
    ValueId x0 = -1;  // embedded global input
};

// `x0_override`, when >= 0, replaces the embedded input (used by the
// Jacobian checks); `mask` null means every architecture edge is kept.
ForwardIds forward_on_tape(Tape& tape, RanGnnModel& model, const DomainGraph& graph,
                           const DropPathMask* mask, Mode mode, const ModelBinding& binding,
                           ValueId x0_override = -1);

ForwardResult forward(RanGnnModel& model, const DomainGraph& graph,
                      const DropPathMask* mask = nullptr, Mode mode = Mode::Eval);

// Average of `samples` forward passes under i.i.d. DropPath masks
// sub-seeded from `seed`, in fixed sample order. With p_drop = 0 the mask
// distribution is degenerate and a single pass is the exact average.
Tensor mc_infer(RanGnnModel& model, const DomainGraph& graph, int samples, std::uint64_t seed);

// Full input->output Jacobian via autodiff versus explicit path-sum
// enumeration; returns the max absolute entry-wise deviation. Requires
// linear mode (throws std::logic_error otherwise).
double path_decomposition_check(RanGnnModel& model, const DomainGraph& graph);

struct PathPairCovariance {
    int path_a = 0, path_b = 0;  // indices into enumerate_paths(dag, 1, L)
    int shared_edges = 0;
    double covariance = 0.0;
    double std_error = 0.0;
};

// Samples DropPath masks and reports the empirical covariance of
// lambda_p = prod z_ij omega_ij for every pair of source->sink paths
// sharing at least one architecture edge.
std::vector<PathPairCovariance> droppath_covariance_check(const ArchDag& dag,
                                                          const std::map<ArchEdge, double>& omega,
                                                          double p_drop, std::int64_t samples,
                                                          std::uint64_t seed);

// Versioned JSON checkpoint with config, DAG, parameters and BN state.
void save_model(RanGnnModel& model, const std::string& path);
RanGnnModel load_model(const std::string& path);

}  // namespace ranwire
