#pragma once

#include <string>
#include <vector>

#include "ranwire/graph_data.hpp"
#include "ranwire/tensor.hpp"

namespace ranwire {

enum class ConvType { Gcn, Sage, Gin, Gated };

std::string conv_name(ConvType t);
ConvType conv_from_name(const std::string& name);

enum class Mode { Train, Eval };

// Batch-normalization running statistics; mutated only by train-mode calls.
struct BnState {
    Tensor running_mean;  // (1,d)
    Tensor running_var;   // (1,d)
    double momentum = 0.1;
    double eps = 1e-5;

    static BnState init(int dim);
};

// Per-architecture-node trainable parameters. Which matrices are present
// depends on the conv type:
//   Gcn:   W (d_in x d_out)
//   Sage:  W (2 d_in x d_out)
//   Gin:   W1,b1,W2,b2 (two-layer MLP, hidden = d_out), eps (1x1)
//   Gated: A,B,C,D,Ew (d_in x d_out; Ew maps edge features)
// All types carry batch-norm scale/shift.
struct LayerParams {
    ConvType type = ConvType::Gcn;
    std::vector<Tensor> mats;
    Tensor bn_gamma;  // (1,d_out)
    Tensor bn_beta;   // (1,d_out)
    BnState bn_state;
};

// Tape handles for one layer's bound parameters, same layout as mats.
struct LayerIds {
    std::vector<ValueId> mats;
    ValueId bn_gamma = -1;
    ValueId bn_beta = -1;
};

// out_i = mean over neighbors of W h_j; no self term, no output activation,
// empty neighborhood gives a zero row.
ValueId gcn_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W);

// out_i = W concat(h_i, mean_{j in N_i} h_j); neighbor half zero when isolated.
ValueId sage_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W);

// out_i = MLP((1+eps) h_i + sum_{j in N_i} h_j), MLP = Linear-ReLU-Linear.
ValueId gin_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W1,
                 ValueId b1, ValueId W2, ValueId b2, ValueId eps);

struct GatedConvOut {
    ValueId h;
    ValueId e;  // updated per-directed-edge features (gate pre-activation)
};

// Edge gates eta_ij = sigmoid(C h_i + D h_j + Ew e_ij); out_i = A h_i +
// sum_j eta_ij (.) B h_j / (sum_j eta_ij + 1e-6). `e` holds one row per
// directed edge of `g`.
GatedConvOut gated_conv(Tape& tape, ValueId h, ValueId e, const DomainGraph& g, ValueId A,
                        ValueId B, ValueId C, ValueId D, ValueId Ew);

// Per-feature normalization over the node dimension. Train mode normalizes
// by batch statistics and updates the running ones; eval mode uses the
// running statistics.
ValueId batch_norm(Tape& tape, ValueId h, ValueId gamma, ValueId beta, BnState& state, Mode mode);

// Initialized per-node parameters; d_in == d_out except for input handling
// done by the caller.
LayerParams init_layer_params(ConvType type, int d_in, int d_out, int edge_dim, class Rng& rng);

// Enumerates the trainable tensors of a layer in a fixed order.
std::vector<Tensor*> layer_param_list(LayerParams& p);

LayerIds bind_layer(Tape& tape, LayerParams& p);

// Applies aggregate-activation-free conv + BN given pre-activated input.
// (The architecture-node op ordering lives in ran_model.)
ValueId apply_conv(Tape& tape, const LayerParams& p, const LayerIds& ids, ValueId h,
                   const DomainGraph& g, ValueId edge_feat, ValueId* edge_out);

}  // namespace ranwire
