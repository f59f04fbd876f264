#include "ranwire/gnn_layers.hpp"

#include <cmath>
#include <stdexcept>

#include "ranwire/rng.hpp"

namespace ranwire {

std::string conv_name(ConvType t) {
    switch (t) {
        case ConvType::Gcn: return "gcn";
        case ConvType::Sage: return "sage";
        case ConvType::Gin: return "gin";
        case ConvType::Gated: return "gated";
    }
    return "gcn";
}

ConvType conv_from_name(const std::string& name) {
    if (name == "gcn") return ConvType::Gcn;
    if (name == "sage") return ConvType::Sage;
    if (name == "gin") return ConvType::Gin;
    if (name == "gated") return ConvType::Gated;
    throw std::invalid_argument("unknown conv type '" + name + "'");
}

BnState BnState::init(int dim) {
    BnState s;
    s.running_mean = Tensor::zeros(1, dim);
    s.running_var = Tensor::full(1, dim, 1.0);
    return s;
}

ValueId gcn_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W) {
    const ValueId hw = tape.matmul(h, W);
    return tape.aggregate_rows(hw, nbrs, Agg::Mean);
}

ValueId sage_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W) {
    const ValueId mean_nbr = tape.aggregate_rows(h, nbrs, Agg::Mean);
    return tape.matmul(tape.concat_cols(h, mean_nbr), W);
}

ValueId gin_conv(Tape& tape, ValueId h, const std::vector<std::vector<int>>& nbrs, ValueId W1,
                 ValueId b1, ValueId W2, ValueId b2, ValueId eps) {
    const ValueId sum_nbr = tape.aggregate_rows(h, nbrs, Agg::Sum);
    // (1 + eps) h_i + sum: eps enters as h + eps*h + sum
    const ValueId mixed = tape.add(tape.add(h, tape.scale_by(h, eps)), sum_nbr);
    const ValueId hidden = tape.relu(tape.add_rowvec(tape.matmul(mixed, W1), b1));
    return tape.add_rowvec(tape.matmul(hidden, W2), b2);
}

GatedConvOut gated_conv(Tape& tape, ValueId h, ValueId e, const DomainGraph& g, ValueId A,
                        ValueId B, ValueId C, ValueId D, ValueId Ew) {
    const int n_dir = static_cast<int>(g.directed.size());
    std::vector<int> src(n_dir), dst(n_dir);
    for (int k = 0; k < n_dir; ++k) {
        src[k] = g.directed[k].first;
        dst[k] = g.directed[k].second;
    }
    const ValueId hc = tape.matmul(h, C);
    const ValueId hd = tape.matmul(h, D);
    const ValueId hb = tape.matmul(h, B);

    ValueId self_term = tape.matmul(h, A);
    if (n_dir == 0) return {self_term, e};

    // gate pre-activation per directed edge (i=dst receives from j=src)
    ValueId pre = tape.add(tape.gather_rows(hc, dst), tape.gather_rows(hd, src));
    pre = tape.add(pre, tape.matmul(e, Ew));
    const ValueId eta = tape.sigmoid(pre);

    const ValueId gated_msgs = tape.mul(eta, tape.gather_rows(hb, src));
    const ValueId num = tape.aggregate_rows(gated_msgs, g.in_edges, Agg::Sum);
    ValueId den = tape.aggregate_rows(eta, g.in_edges, Agg::Sum);
    den = tape.add(den, tape.leaf(Tensor::full(g.n, tape.val(den).cols(), 1e-6)));
    return {tape.add(self_term, tape.div(num, den)), pre};
}

ValueId batch_norm(Tape& tape, ValueId h, ValueId gamma, ValueId beta, BnState& state, Mode mode) {
    const Tensor& H = tape.val(h);
    const int d = H.cols();
    if (state.running_mean.cols() != d)
        throw std::invalid_argument("batch_norm: state width " +
                                    std::to_string(state.running_mean.cols()) +
                                    " does not match input width " + std::to_string(d));
    ValueId normalized;
    if (mode == Mode::Train) {
        const ValueId mu = tape.mean_rows(h);
        const ValueId centered = tape.sub(h, tape.matmul(tape.leaf(Tensor::full(H.rows(), 1, 1.0)), mu));
        const ValueId var = tape.mean_rows(tape.mul(centered, centered));
        const ValueId inv_std = tape.rsqrt_shift(var, state.eps);
        normalized = tape.mul_rowvec(centered, inv_std);
        // running stats track the batch statistics, detached from the tape
        const Tensor& mu_v = tape.val(mu);
        const Tensor& var_v = tape.val(var);
        for (int j = 0; j < d; ++j) {
            state.running_mean.at(0, j) = (1.0 - state.momentum) * state.running_mean.at(0, j) +
                                          state.momentum * mu_v.at(0, j);
            state.running_var.at(0, j) = (1.0 - state.momentum) * state.running_var.at(0, j) +
                                         state.momentum * var_v.at(0, j);
        }
    } else {
        Tensor inv_std(1, d);
        for (int j = 0; j < d; ++j)
            inv_std.at(0, j) = 1.0 / std::sqrt(state.running_var.at(0, j) + state.eps);
        Tensor neg_mean = state.running_mean;
        for (auto& x : neg_mean.v) x = -x;
        normalized = tape.mul_rowvec(tape.add_rowvec(h, tape.leaf(neg_mean)), tape.leaf(inv_std));
    }
    return tape.add_rowvec(tape.mul_rowvec(normalized, gamma), beta);
}

namespace {
Tensor uniform_init(int rows, int cols, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
    Tensor t(rows, cols);
    for (auto& x : t.v) x = rng.uniform(-bound, bound);
    return t;
}
}  // namespace

LayerParams init_layer_params(ConvType type, int d_in, int d_out, int edge_dim, Rng& rng) {
    LayerParams p;
    p.type = type;
    switch (type) {
        case ConvType::Gcn: p.mats = {uniform_init(d_in, d_out, rng)}; break;
        case ConvType::Sage: p.mats = {uniform_init(2 * d_in, d_out, rng)}; break;
        case ConvType::Gin:
            p.mats = {uniform_init(d_in, d_out, rng), Tensor::zeros(1, d_out),
                      uniform_init(d_out, d_out, rng), Tensor::zeros(1, d_out),
                      Tensor::scalar(0.0)};
            break;
        case ConvType::Gated:
            p.mats = {uniform_init(d_in, d_out, rng), uniform_init(d_in, d_out, rng),
                      uniform_init(d_in, d_out, rng), uniform_init(d_in, d_out, rng),
                      uniform_init(edge_dim > 0 ? edge_dim : 1, d_out, rng)};
            break;
    }
    p.bn_gamma = Tensor::full(1, d_out, 1.0);
    p.bn_beta = Tensor::zeros(1, d_out);
    p.bn_state = BnState::init(d_out);
    return p;
}

std::vector<Tensor*> layer_param_list(LayerParams& p) {
    std::vector<Tensor*> out;
    for (auto& m : p.mats) out.push_back(&m);
    out.push_back(&p.bn_gamma);
    out.push_back(&p.bn_beta);
    return out;
}

LayerIds bind_layer(Tape& tape, LayerParams& p) {
    LayerIds ids;
    for (auto& m : p.mats) ids.mats.push_back(tape.leaf(m, true));
    ids.bn_gamma = tape.leaf(p.bn_gamma, true);
    ids.bn_beta = tape.leaf(p.bn_beta, true);
    return ids;
}

ValueId apply_conv(Tape& tape, const LayerParams& p, const LayerIds& ids, ValueId h,
                   const DomainGraph& g, ValueId edge_feat, ValueId* edge_out) {
    switch (p.type) {
        case ConvType::Gcn: return gcn_conv(tape, h, g.nbrs, ids.mats[0]);
        case ConvType::Sage: return sage_conv(tape, h, g.nbrs, ids.mats[0]);
        case ConvType::Gin:
            return gin_conv(tape, h, g.nbrs, ids.mats[0], ids.mats[1], ids.mats[2], ids.mats[3],
                            ids.mats[4]);
        case ConvType::Gated: {
            const auto out = gated_conv(tape, h, edge_feat, g, ids.mats[0], ids.mats[1],
                                        ids.mats[2], ids.mats[3], ids.mats[4]);
            if (edge_out) *edge_out = out.e;
            return out.h;
        }
    }
    throw std::logic_error("apply_conv: unhandled conv type");
}

}  // namespace ranwire
