#include "ranwire/ran_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ranwire/errors.hpp"
#include "ranwire/path_analysis.hpp"
#include "ranwire/rng.hpp"

using nlohmann::json;

namespace ranwire {

void ModelConfig::validate() const {
    if (num_nodes < 2) throw std::invalid_argument("ModelConfig: L must be >= 2");
    if (hidden_dim < 1) throw std::invalid_argument("ModelConfig: hidden_dim must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("ModelConfig: p must be in [0,1]");
    if (p_drop < 0.0 || p_drop >= 1.0)
        throw std::invalid_argument("ModelConfig: p_drop must be in [0,1)");
    if (mc_samples < 1) throw std::invalid_argument("ModelConfig: mc_samples must be >= 1");
    if (input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("ModelConfig: input_dim and output_dim must be >= 1");
    if (edge_dim < 0) throw std::invalid_argument("ModelConfig: edge_dim must be >= 0");
    if (linear_mode && conv_type != ConvType::Gcn)
        throw std::invalid_argument("ModelConfig: linear mode requires the GCN conv");
}

DropPathMask sample_droppath_mask(const ArchDag& dag, double p_drop, std::uint64_t seed) {
    if (p_drop < 0.0 || p_drop >= 1.0)
        throw std::invalid_argument("sample_droppath_mask: p_drop must be in [0,1)");
    DropPathMask mask;
    mask.edges = dag.edges;
    mask.seed = seed;
    mask.keep.resize(dag.edges.size());
    Rng rng = substream(seed, stream::kDropPath);
    for (std::size_t k = 0; k < dag.edges.size(); ++k)
        mask.keep[k] = rng.bernoulli(1.0 - p_drop) ? 1 : 0;
    return mask;
}

double RanGnnModel::omega(std::size_t edge_index) const {
    return 1.0 / (1.0 + std::exp(-edge_logits.v[edge_index]));
}

std::map<ArchEdge, double> RanGnnModel::omega_map() const {
    std::map<ArchEdge, double> m;
    for (std::size_t k = 0; k < wired.dag.edges.size(); ++k) m[wired.dag.edges[k]] = omega(k);
    return m;
}

std::vector<Tensor*> RanGnnModel::param_list() {
    std::vector<Tensor*> out;
    out.push_back(&edge_logits);
    out.push_back(&embed_W);
    out.push_back(&embed_b);
    if (config.conv_type == ConvType::Gated) {
        out.push_back(&edge_embed_W);
        out.push_back(&edge_embed_b);
    }
    for (auto& node : nodes)
        for (Tensor* t : layer_param_list(node)) out.push_back(t);
    for (std::size_t h = 0; h < head_W.size(); ++h) {
        out.push_back(&head_W[h]);
        out.push_back(&head_b[h]);
    }
    return out;
}

namespace {
Tensor uniform_init(int rows, int cols, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
    Tensor t(rows, cols);
    for (auto& x : t.v) x = rng.uniform(-bound, bound);
    return t;
}
}  // namespace

RanGnnModel build_model(const ModelConfig& config, std::uint64_t init_seed) {
    config.validate();
    RanGnnModel m;
    m.config = config;
    ArchDag dag = generate_er_dag(config.num_nodes, config.p, config.seed);
    if (config.sequential_path) dag = embed_sequential_path(dag);
    m.wired = wire_terminals(dag);

    Rng rng = substream(init_seed, stream::kWeightInit);
    m.edge_logits = Tensor::zeros(static_cast<int>(m.num_edges()), 1);
    m.embed_W = uniform_init(config.input_dim, config.hidden_dim, rng);
    m.embed_b = Tensor::zeros(1, config.hidden_dim);
    if (config.conv_type == ConvType::Gated) {
        m.edge_embed_W = uniform_init(std::max(config.edge_dim, 1), config.hidden_dim, rng);
        m.edge_embed_b = Tensor::zeros(1, config.hidden_dim);
    }
    for (int i = 0; i < config.num_nodes; ++i)
        m.nodes.push_back(init_layer_params(config.conv_type, config.hidden_dim,
                                            config.hidden_dim, config.hidden_dim, rng));
    const int n_heads = m.uses_jk_readout() ? config.num_nodes : 1;
    for (int h = 0; h < n_heads; ++h) {
        m.head_W.push_back(uniform_init(config.hidden_dim, config.output_dim, rng));
        m.head_b.push_back(Tensor::zeros(1, config.output_dim));
    }
    if (config.linear_mode) {
        // pure linear map: no affine offsets anywhere
        for (auto& x : m.embed_b.v) x = 0.0;
        for (auto& h : m.head_b)
            for (auto& x : h.v) x = 0.0;
    }
    return m;
}

ModelBinding bind_model(Tape& tape, RanGnnModel& model) {
    ModelBinding b;
    const auto bind = [&](Tensor& t) {
        const ValueId id = tape.leaf(t, true);
        b.bound.push_back({&t, id});
        return id;
    };
    b.edge_logits = bind(model.edge_logits);
    b.embed_W = bind(model.embed_W);
    b.embed_b = bind(model.embed_b);
    if (model.config.conv_type == ConvType::Gated) {
        b.edge_embed_W = bind(model.edge_embed_W);
        b.edge_embed_b = bind(model.edge_embed_b);
    }
    for (auto& node : model.nodes) {
        LayerIds ids;
        for (auto& mat : node.mats) ids.mats.push_back(bind(mat));
        ids.bn_gamma = bind(node.bn_gamma);
        ids.bn_beta = bind(node.bn_beta);
        b.layers.push_back(std::move(ids));
    }
    for (std::size_t h = 0; h < model.head_W.size(); ++h) {
        b.head_W.push_back(bind(model.head_W[h]));
        b.head_b.push_back(bind(model.head_b[h]));
    }
    return b;
}

ForwardIds forward_on_tape(Tape& tape, RanGnnModel& model, const DomainGraph& graph,
                           const DropPathMask* mask, Mode mode, const ModelBinding& binding,
                           ValueId x0_override) {
    const ModelConfig& cfg = model.config;
    if (graph.features.cols() != cfg.input_dim)
        throw std::invalid_argument("forward: graph feature width " +
                                    std::to_string(graph.features.cols()) +
                                    " does not match model input_dim " +
                                    std::to_string(cfg.input_dim));
    const bool gated = cfg.conv_type == ConvType::Gated;
    if (gated && graph.edge_dim != cfg.edge_dim)
        throw std::invalid_argument("forward: graph edge_dim " + std::to_string(graph.edge_dim) +
                                    " does not match model edge_dim " +
                                    std::to_string(cfg.edge_dim));
    if (mask && mask->edges != model.wired.dag.edges)
        throw std::invalid_argument("forward: DropPath mask edges do not match the model DAG");

    const ArchDag& dag = model.wired.dag;
    const int L = dag.num_nodes;
    const int n = graph.n;

    ForwardIds out;
    if (x0_override >= 0) {
        out.x0 = x0_override;
    } else {
        const ValueId feats = tape.leaf(graph.features, false);
        out.x0 = tape.add_rowvec(tape.matmul(feats, binding.embed_W), binding.embed_b);
    }

    // global edge-feature input (gated only): dataset features embedded, or
    // zeros when the dataset carries none
    ValueId e0 = -1;
    const int n_dir = static_cast<int>(graph.directed.size());
    if (gated) {
        if (graph.edge_dim > 0) {
            const ValueId ef = tape.leaf(graph.edge_features, false);
            e0 = tape.add_rowvec(tape.matmul(ef, binding.edge_embed_W), binding.edge_embed_b);
        } else {
            e0 = tape.leaf(Tensor::zeros(n_dir, cfg.hidden_dim), false);
        }
    }

    // per-edge aggregation weight: sigmoid of the bound logit row
    std::vector<ValueId> edge_omega(dag.edges.size(), -1);
    for (std::size_t k = 0; k < dag.edges.size(); ++k) {
        if (mask && !mask->keeps(k)) continue;  // dropped edges never touch the tape
        edge_omega[k] = tape.sigmoid(
            tape.gather_rows(binding.edge_logits, {static_cast<int>(k)}));
    }
    // predecessors with edge indices
    std::vector<std::vector<std::pair<int, int>>> preds(L + 1);  // (pred node, edge index)
    for (std::size_t k = 0; k < dag.edges.size(); ++k)
        preds[dag.edges[k].second].push_back({dag.edges[k].first, static_cast<int>(k)});

    std::vector<char> is_input(L + 1, 0);
    for (int v : model.wired.input_nodes) is_input[v] = 1;

    std::vector<ValueId> h(L + 1, -1), e(L + 1, -1);
    for (int i = 1; i <= L; ++i) {
        ValueId agg = -1, e_agg = -1;
        if (is_input[i]) {
            agg = out.x0;
            e_agg = e0;
        } else {
            for (const auto& [j, k] : preds[i]) {
                if (edge_omega[k] < 0) continue;  // masked out
                const ValueId term = tape.scale_by(h[j], edge_omega[k]);
                agg = agg < 0 ? term : tape.add(agg, term);
                if (gated) {
                    const ValueId e_term = tape.scale_by(e[j], edge_omega[k]);
                    e_agg = e_agg < 0 ? e_term : tape.add(e_agg, e_term);
                }
            }
            if (agg < 0) {  // every incoming edge dropped: the layer runs on zeros
                agg = tape.leaf(Tensor::zeros(n, cfg.hidden_dim), false);
                if (gated) e_agg = tape.leaf(Tensor::zeros(n_dir, cfg.hidden_dim), false);
            }
        }
        const ValueId act = cfg.linear_mode ? agg : tape.relu(agg);
        ValueId e_out = -1;
        const ValueId conv =
            apply_conv(tape, model.nodes[i - 1], binding.layers[i - 1], act, graph, e_agg, &e_out);
        h[i] = cfg.linear_mode
                   ? conv
                   : batch_norm(tape, conv, binding.layers[i - 1].bn_gamma,
                                binding.layers[i - 1].bn_beta, model.nodes[i - 1].bn_state, mode);
        if (gated) e[i] = e_out;
        out.node_outputs.push_back(h[i]);
    }

    // output nodes averaged element-wise into the global output
    ValueId h_out = -1;
    for (int v : model.wired.output_nodes)
        h_out = h_out < 0 ? h[v] : tape.add(h_out, h[v]);
    h_out = tape.scale(h_out, 1.0 / static_cast<double>(model.wired.output_nodes.size()));

    const auto head = [&](std::size_t idx, ValueId x) {
        return tape.add_rowvec(tape.matmul(x, binding.head_W[idx]), binding.head_b[idx]);
    };
    const bool graph_level = cfg.task != Task::NodeRegression;
    if (model.uses_jk_readout()) {
        ValueId pred = -1;
        for (int i = 1; i <= L; ++i) {
            ValueId x = graph_level ? tape.mean_rows(h[i]) : h[i];
            const ValueId contrib = head(static_cast<std::size_t>(i - 1), x);
            pred = pred < 0 ? contrib : tape.add(pred, contrib);
        }
        out.prediction = pred;
    } else {
        const ValueId x = graph_level ? tape.mean_rows(h_out) : h_out;
        out.prediction = head(0, x);
    }
    return out;
}

ForwardResult forward(RanGnnModel& model, const DomainGraph& graph, const DropPathMask* mask,
                      Mode mode) {
    Tape tape;
    const ModelBinding binding = bind_model(tape, model);
    const ForwardIds ids = forward_on_tape(tape, model, graph, mask, mode, binding);
    ForwardResult res;
    res.prediction = tape.val(ids.prediction);
    for (ValueId id : ids.node_outputs) res.node_outputs.push_back(tape.val(id));
    return res;
}

Tensor mc_infer(RanGnnModel& model, const DomainGraph& graph, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_infer: samples must be >= 1");
    if (model.config.p_drop == 0.0) return forward(model, graph).prediction;
    Tensor acc;
    for (int s = 0; s < samples; ++s) {
        const DropPathMask mask = sample_droppath_mask(
            model.wired.dag, model.config.p_drop, mix64(seed ^ mix64(stream::kMcInfer)) + s);
        const Tensor pred = forward(model, graph, &mask).prediction;
        if (s == 0) {
            acc = pred;
        } else {
            for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += pred.v[i];
        }
    }
    for (auto& x : acc.v) x /= static_cast<double>(samples);
    return acc;
}

namespace {

// One architecture node's linear map in linear mode: X -> neighborMean(X W).
Tensor apply_linear_node(const Tensor& X, const std::vector<std::vector<int>>& nbrs,
                         const Tensor& W) {
    const int n = X.rows(), d = W.cols();
    Tensor XW(n, d);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < X.cols(); ++t) {
            const double xv = X.at(i, t);
            if (xv == 0.0) continue;
            for (int j = 0; j < d; ++j) XW.at(i, j) += xv * W.at(t, j);
        }
    Tensor out(n, d);
    for (int i = 0; i < n; ++i) {
        if (nbrs[i].empty()) continue;
        const double inv = 1.0 / static_cast<double>(nbrs[i].size());
        for (int j : nbrs[i])
            for (int c = 0; c < d; ++c) out.at(i, c) += inv * XW.at(j, c);
    }
    return out;
}

}  // namespace

double path_decomposition_check(RanGnnModel& model, const DomainGraph& graph) {
    if (!model.config.linear_mode)
        throw std::logic_error("path_decomposition_check: model is not in linear mode");
    const ArchDag& dag = model.wired.dag;
    const int n = graph.n;
    const int hd = model.config.hidden_dim;
    const int od = model.config.output_dim;
    const int in_flat = n * hd;
    const int out_flat = n * od;

    // Jacobian rows via autodiff: d prediction[m] / d x0
    Tensor jac_auto(out_flat, in_flat);
    for (int m = 0; m < out_flat; ++m) {
        Tape tape;
        ModelBinding binding = bind_model(tape, model);
        const ValueId x0 = tape.leaf(Tensor::zeros(n, hd), true);
        const ForwardIds ids =
            forward_on_tape(tape, model, graph, nullptr, Mode::Eval, binding, x0);
        Tensor onehot(n, od);
        onehot.v[m] = 1.0;
        tape.backward(tape.sum_all(tape.mul(ids.prediction, tape.leaf(onehot))));
        const Tensor& gx = tape.grad(x0);
        for (int c = 0; c < in_flat; ++c) jac_auto.at(m, c) = gx.v[c];
    }

    // Path-sum route: every input->output architecture node pair contributes
    // all of its paths; a path's map is the composition of node maps with
    // the product of edge weights along it.
    const auto omega = model.omega_map();
    Tensor jac_path(out_flat, in_flat);
    const double out_scale = 1.0 / static_cast<double>(model.wired.output_nodes.size());
    for (int col = 0; col < in_flat; ++col) {
        Tensor basis(n, hd);
        basis.v[col] = 1.0;
        Tensor total(n, hd);  // summed path contributions at the averaged output
        for (int u : model.wired.input_nodes) {
            for (int w : model.wired.output_nodes) {
                if (u > w) continue;
                for (const auto& path : enumerate_paths(dag, u, w)) {
                    Tensor x = apply_linear_node(basis, graph.nbrs, model.nodes[path[0] - 1].mats[0]);
                    double wprod = 1.0;
                    for (std::size_t s = 1; s < path.size(); ++s) {
                        wprod *= omega.at({path[s - 1], path[s]});
                        x = apply_linear_node(x, graph.nbrs, model.nodes[path[s] - 1].mats[0]);
                    }
                    for (std::size_t i = 0; i < total.v.size(); ++i)
                        total.v[i] += out_scale * wprod * x.v[i];
                }
            }
        }
        // linear readout head
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < od; ++c) {
                double acc = 0.0;
                for (int t = 0; t < hd; ++t) acc += total.at(r, t) * model.head_W[0].at(t, c);
                jac_path.at(r * od + c, col) = acc;
            }
    }

    double max_dev = 0.0;
    for (std::size_t i = 0; i < jac_auto.v.size(); ++i)
        max_dev = std::max(max_dev, std::abs(jac_auto.v[i] - jac_path.v[i]));
    return max_dev;
}

std::vector<PathPairCovariance> droppath_covariance_check(const ArchDag& dag,
                                                          const std::map<ArchEdge, double>& omega,
                                                          double p_drop, std::int64_t samples,
                                                          std::uint64_t seed) {
    if (dag.num_nodes > 12)
        throw CapacityError("droppath_covariance_check: DAG too large to enumerate paths (cap 12)");
    if (samples < 2) throw std::invalid_argument("droppath_covariance_check: samples must be >= 2");
    for (const auto& e : dag.edges)
        if (omega.find(e) == omega.end())
            throw std::invalid_argument("droppath_covariance_check: missing omega for an edge");

    const auto paths = enumerate_paths(dag, 1, dag.num_nodes);
    const int P = static_cast<int>(paths.size());
    // per-path edge indices into dag.edges
    std::vector<std::vector<int>> path_edges(P);
    std::vector<double> path_omega(P, 1.0);
    for (int p = 0; p < P; ++p) {
        for (std::size_t s = 1; s < paths[p].size(); ++s) {
            const ArchEdge e{paths[p][s - 1], paths[p][s]};
            const auto it = std::lower_bound(dag.edges.begin(), dag.edges.end(), e);
            path_edges[p].push_back(static_cast<int>(it - dag.edges.begin()));
            path_omega[p] *= omega.at(e);
        }
    }

    // lambda[s*P + p]
    std::vector<double> lambda(static_cast<std::size_t>(samples) * P);
    for (std::int64_t s = 0; s < samples; ++s) {
        const DropPathMask mask = sample_droppath_mask(dag, p_drop, mix64(seed) + s);
        for (int p = 0; p < P; ++p) {
            double lam = path_omega[p];
            for (int k : path_edges[p])
                if (!mask.keeps(k)) {
                    lam = 0.0;
                    break;
                }
            lambda[static_cast<std::size_t>(s) * P + p] = lam;
        }
    }

    std::vector<double> mean(P, 0.0);
    for (std::int64_t s = 0; s < samples; ++s)
        for (int p = 0; p < P; ++p) mean[p] += lambda[static_cast<std::size_t>(s) * P + p];
    for (int p = 0; p < P; ++p) mean[p] /= static_cast<double>(samples);

    std::vector<PathPairCovariance> out;
    for (int a = 0; a < P; ++a)
        for (int b = a + 1; b < P; ++b) {
            int shared = 0;
            for (int ka : path_edges[a])
                for (int kb : path_edges[b])
                    if (ka == kb) ++shared;
            if (shared == 0) continue;
            double cov = 0.0, var_of_prod = 0.0;
            for (std::int64_t s = 0; s < samples; ++s) {
                const double da = lambda[static_cast<std::size_t>(s) * P + a] - mean[a];
                const double db = lambda[static_cast<std::size_t>(s) * P + b] - mean[b];
                cov += da * db;
            }
            cov /= static_cast<double>(samples - 1);
            for (std::int64_t s = 0; s < samples; ++s) {
                const double da = lambda[static_cast<std::size_t>(s) * P + a] - mean[a];
                const double db = lambda[static_cast<std::size_t>(s) * P + b] - mean[b];
                const double d = da * db - cov;
                var_of_prod += d * d;
            }
            var_of_prod /= static_cast<double>(samples - 1);
            PathPairCovariance row;
            row.path_a = a;
            row.path_b = b;
            row.shared_edges = shared;
            row.covariance = cov;
            row.std_error = std::sqrt(var_of_prod / static_cast<double>(samples));
            out.push_back(row);
        }
    return out;
}

namespace {

json tensor_to_json(const Tensor& t) {
    return json{{"rows", t.rows()}, {"cols", t.cols()}, {"data", t.v}};
}

Tensor tensor_from_json(const json& j) {
    Tensor t(j.at("rows").get<int>(), j.at("cols").get<int>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != t.v.size()) throw ParseError("checkpoint: tensor size mismatch");
    t.v = data;
    return t;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_model(RanGnnModel& model, const std::string& path) {
    json j;
    j["format"] = "ranwire-model";
    j["version"] = kCheckpointVersion;
    const ModelConfig& c = model.config;
    j["config"] = {{"conv", conv_name(c.conv_type)},
                   {"hidden_dim", c.hidden_dim},
                   {"L", c.num_nodes},
                   {"p", c.p},
                   {"seed", c.seed},
                   {"sequential", c.sequential_path},
                   {"p_drop", c.p_drop},
                   {"mc_samples", c.mc_samples},
                   {"task", task_name(c.task)},
                   {"input_dim", c.input_dim},
                   {"output_dim", c.output_dim},
                   {"edge_dim", c.edge_dim},
                   {"linear_mode", c.linear_mode}};
    j["dag"] = {{"L", model.wired.dag.num_nodes},
                {"p", model.wired.dag.gen_p},
                {"seed", model.wired.dag.seed},
                {"sequential", model.wired.dag.sequential_embedded},
                {"edges", model.wired.dag.edges}};
    json params = json::object();
    const auto list = model.param_list();
    params["tensors"] = json::array();
    for (Tensor* t : list) params["tensors"].push_back(tensor_to_json(*t));
    j["params"] = params;
    json bn = json::array();
    for (auto& node : model.nodes)
        bn.push_back({{"mean", tensor_to_json(node.bn_state.running_mean)},
                      {"var", tensor_to_json(node.bn_state.running_var)}});
    j["bn_state"] = bn;

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write checkpoint: " + path);
    out << j.dump(1) << "\n";
}

RanGnnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("checkpoint " + path + ": " + e.what());
    }
    if (j.value("format", "") != "ranwire-model")
        throw ParseError("checkpoint " + path + ": unrecognized format header");
    if (j.value("version", -1) != kCheckpointVersion)
        throw ParseError("checkpoint " + path + ": unsupported version");

    const json& jc = j.at("config");
    ModelConfig c;
    c.conv_type = conv_from_name(jc.at("conv").get<std::string>());
    c.hidden_dim = jc.at("hidden_dim").get<int>();
    c.num_nodes = jc.at("L").get<int>();
    c.p = jc.at("p").get<double>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    c.sequential_path = jc.at("sequential").get<bool>();
    c.p_drop = jc.at("p_drop").get<double>();
    c.mc_samples = jc.at("mc_samples").get<int>();
    c.task = task_from_name(jc.at("task").get<std::string>());
    c.input_dim = jc.at("input_dim").get<int>();
    c.output_dim = jc.at("output_dim").get<int>();
    c.edge_dim = jc.at("edge_dim").get<int>();
    c.linear_mode = jc.at("linear_mode").get<bool>();

    RanGnnModel m = build_model(c, 0);
    // the stored DAG wins over the regenerated one (same config => same DAG,
    // but the checkpoint is authoritative)
    const json& jd = j.at("dag");
    ArchDag dag = make_arch_dag(jd.at("L").get<int>(),
                                jd.at("edges").get<std::vector<ArchEdge>>(),
                                jd.at("p").get<double>(), jd.at("seed").get<std::uint64_t>(),
                                jd.at("sequential").get<bool>());
    m.wired = wire_terminals(dag);
    if (static_cast<int>(m.num_edges()) != m.edge_logits.rows())
        m.edge_logits = Tensor::zeros(static_cast<int>(m.num_edges()), 1);

    const json& tensors = j.at("params").at("tensors");
    auto list = m.param_list();
    if (tensors.size() != list.size())
        throw ParseError("checkpoint " + path + ": parameter count mismatch");
    for (std::size_t i = 0; i < list.size(); ++i) {
        Tensor t = tensor_from_json(tensors[i]);
        if (!t.same_shape(*list[i]))
            throw ParseError("checkpoint " + path + ": parameter shape mismatch at index " +
                             std::to_string(i));
        *list[i] = std::move(t);
    }
    const json& bn = j.at("bn_state");
    if (bn.size() != m.nodes.size())
        throw ParseError("checkpoint " + path + ": BN state count mismatch");
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        m.nodes[i].bn_state.running_mean = tensor_from_json(bn[i].at("mean"));
        m.nodes[i].bn_state.running_var = tensor_from_json(bn[i].at("var"));
    }
    return m;
}

}  // namespace ranwire
