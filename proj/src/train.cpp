#include "ranwire/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ranwire/errors.hpp"
#include "ranwire/rng.hpp"

namespace fs = std::filesystem;

namespace ranwire {

void TrainConfig::validate() const {
    if (!(lr_min < lr_init)) throw std::invalid_argument("TrainConfig: lr_min must be < lr_init");
    if (plateau_patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (stop_patience < 1) throw std::invalid_argument("TrainConfig: stop_patience must be >= 1");
    if (decay_factor <= 0.0 || decay_factor >= 1.0)
        throw std::invalid_argument("TrainConfig: decay_factor must be in (0,1)");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
}

PlateauSchedule::PlateauSchedule(double lr_init, double lr_min, double decay_factor, int patience,
                                 int stop_patience)
    : lr_(lr_init),
      lr_min_(lr_min),
      factor_(decay_factor),
      patience_(patience),
      stop_patience_(stop_patience),
      best_(std::numeric_limits<double>::infinity()) {}

bool PlateauSchedule::observe(double val_loss) {
    if (stopped_) return false;
    const bool at_min_on_entry = lr_ <= lr_min_;
    if (val_loss < best_) {
        best_ = val_loss;
        bad_epochs_ = 0;
        bad_at_min_ = 0;
        improved_last_ = true;
        return true;
    }
    improved_last_ = false;
    ++bad_epochs_;
    if (at_min_on_entry) {
        ++bad_at_min_;
        if (bad_at_min_ >= stop_patience_) {
            stopped_ = true;
            return false;
        }
        return true;
    }
    if (bad_epochs_ >= patience_) {
        lr_ = std::max(lr_ * factor_, lr_min_);
        ++decays_;
        bad_epochs_ = 0;
    }
    return true;
}

AdamOptimizer::AdamOptimizer(std::vector<Tensor*> params, double beta1, double beta2, double eps)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (Tensor* p : params_) {
        m_.push_back(Tensor::zeros(p->rows(), p->cols()));
        v_.push_back(Tensor::zeros(p->rows(), p->cols()));
    }
}

void AdamOptimizer::step(const std::vector<Tensor>& grads, double lr) {
    if (grads.size() != params_.size())
        throw std::invalid_argument("AdamOptimizer::step: gradient count mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        Tensor& p = *params_[i];
        const Tensor& g = grads[i];
        for (std::size_t k = 0; k < p.v.size(); ++k) {
            m_[i].v[k] = beta1_ * m_[i].v[k] + (1.0 - beta1_) * g.v[k];
            v_[i].v[k] = beta2_ * v_[i].v[k] + (1.0 - beta2_) * g.v[k] * g.v[k];
            const double mhat = m_[i].v[k] / bc1;
            const double vhat = v_[i].v[k] / bc2;
            p.v[k] -= lr * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

namespace {

// BFS ball of radius r around `start`, the node itself included.
std::vector<int> bfs_ball(const std::vector<std::vector<int>>& nbrs, int start, int radius) {
    std::vector<int> dist(nbrs.size(), -1);
    std::deque<int> q{start};
    dist[start] = 0;
    std::vector<int> ball{start};
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        if (dist[v] == radius) continue;
        for (int w : nbrs[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                ball.push_back(w);
                q.push_back(w);
            }
    }
    return ball;
}

bool is_connected(const std::vector<std::vector<int>>& nbrs) {
    if (nbrs.empty()) return true;
    return bfs_ball(nbrs, 0, static_cast<int>(nbrs.size())).size() == nbrs.size();
}

}  // namespace

std::vector<DomainGraph> gen_khop_dataset(int n_graphs, int nodes_per_graph, double edge_prob,
                                          int radius, std::uint64_t seed) {
    if (radius < 0) throw std::invalid_argument("gen_khop_dataset: radius must be >= 0");
    if (nodes_per_graph < 1) throw std::invalid_argument("gen_khop_dataset: need >= 1 node");
    constexpr int kMaxRetries = 500;
    std::vector<DomainGraph> out;
    Rng rng = substream(seed, stream::kData);
    for (int g = 0; g < n_graphs; ++g) {
        std::vector<std::pair<int, int>> edges;
        std::vector<std::vector<int>> nbrs;
        bool ok = false;
        for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
            edges.clear();
            nbrs.assign(nodes_per_graph, {});
            for (int a = 0; a < nodes_per_graph; ++a)
                for (int b = a + 1; b < nodes_per_graph; ++b)
                    if (rng.bernoulli(edge_prob)) {
                        edges.emplace_back(a, b);
                        nbrs[a].push_back(b);
                        nbrs[b].push_back(a);
                    }
            ok = is_connected(nbrs);
        }
        if (!ok) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "gen_khop_dataset: no connected graph after %d retries (n=%d, q=%g)",
                          kMaxRetries, nodes_per_graph, edge_prob);
            throw GenerationError(buf);
        }
        DomainGraph graph = make_domain_graph(nodes_per_graph, 1, 0, Task::NodeRegression, 1);
        for (const auto& [a, b] : edges) graph.add_edge(a, b);
        for (int i = 0; i < nodes_per_graph; ++i) graph.features.at(i, 0) = rng.normal();
        for (int i = 0; i < nodes_per_graph; ++i) {
            const auto ball = bfs_ball(graph.nbrs, i, radius);
            double acc = 0.0;
            for (int v : ball) acc += graph.features.at(v, 0);
            graph.node_targets.at(i, 0) = acc / static_cast<double>(ball.size());
        }
        out.push_back(std::move(graph));
    }
    return out;
}

DatasetSplits split_dataset(std::vector<DomainGraph> graphs, double train_frac, double val_frac) {
    if (train_frac <= 0.0 || val_frac < 0.0 || train_frac + val_frac > 1.0)
        throw std::invalid_argument("split_dataset: invalid fractions");
    DatasetSplits s;
    const int n = static_cast<int>(graphs.size());
    const int n_train = std::max(1, static_cast<int>(std::floor(train_frac * n)));
    const int n_val = std::max(n > n_train ? 1 : 0, static_cast<int>(std::floor(val_frac * n)));
    for (int i = 0; i < n; ++i) {
        if (i < n_train) s.train.push_back(std::move(graphs[i]));
        else if (i < n_train + n_val) s.val.push_back(std::move(graphs[i]));
        else s.test.push_back(std::move(graphs[i]));
    }
    if (s.val.empty()) s.val = s.train;    // desk-scale fallback for tiny sets
    if (s.test.empty()) s.test = s.val;
    return s;
}

void save_dataset(const DatasetSplits& splits, const std::string& dir) {
    save_split(splits.train, (fs::path(dir) / "train").string());
    save_split(splits.val, (fs::path(dir) / "val").string());
    save_split(splits.test, (fs::path(dir) / "test").string());
}

DatasetSplits load_dataset(const std::string& dir) {
    DatasetSplits s;
    s.train = load_split((fs::path(dir) / "train").string());
    s.val = load_split((fs::path(dir) / "val").string());
    s.test = load_split((fs::path(dir) / "test").string());
    return s;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Mae: return "mae";
        case Metric::Mse: return "mse";
        case Metric::Accuracy: return "accuracy";
    }
    return "mae";
}

Metric metric_from_name(const std::string& name) {
    if (name == "mae") return Metric::Mae;
    if (name == "mse") return Metric::Mse;
    if (name == "accuracy") return Metric::Accuracy;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

namespace {

double graph_metric(const Tensor& pred, const DomainGraph& g, Metric metric) {
    switch (g.task) {
        case Task::NodeRegression: {
            if (metric == Metric::Accuracy)
                throw std::invalid_argument("evaluate: accuracy needs a classification task");
            double acc = 0.0;
            for (std::size_t i = 0; i < pred.v.size(); ++i) {
                const double d = pred.v[i] - g.node_targets.v[i];
                acc += metric == Metric::Mae ? std::abs(d) : d * d;
            }
            return acc / static_cast<double>(pred.numel());
        }
        case Task::GraphRegression: {
            if (metric == Metric::Accuracy)
                throw std::invalid_argument("evaluate: accuracy needs a classification task");
            const double d = pred.v[0] - g.graph_target;
            return metric == Metric::Mae ? std::abs(d) : d * d;
        }
        case Task::GraphClassification: {
            if (metric != Metric::Accuracy)
                throw std::invalid_argument("evaluate: classification task needs accuracy");
            int argmax = 0;
            for (int j = 1; j < pred.cols(); ++j)
                if (pred.at(0, j) > pred.at(0, argmax)) argmax = j;
            return argmax == g.class_label ? 1.0 : 0.0;
        }
    }
    return 0.0;
}

// scalar training loss for one graph on an open tape
ValueId graph_loss(Tape& tape, const ForwardIds& ids, const DomainGraph& g) {
    switch (g.task) {
        case Task::NodeRegression: return tape.mse_loss(ids.prediction, g.node_targets);
        case Task::GraphRegression:
            return tape.mse_loss(ids.prediction, Tensor::scalar(g.graph_target));
        case Task::GraphClassification:
            return tape.softmax_cross_entropy(ids.prediction, {g.class_label});
    }
    throw std::logic_error("graph_loss: unhandled task");
}

}  // namespace

double evaluate(RanGnnModel& model, const std::vector<DomainGraph>& split, Metric metric, bool mc,
                std::uint64_t seed) {
    if (split.empty()) throw std::invalid_argument("evaluate: empty split");
    double total = 0.0;
    for (std::size_t g = 0; g < split.size(); ++g) {
        const Tensor pred = mc ? mc_infer(model, split[g], model.config.mc_samples,
                                          mix64(seed) + g)
                               : forward(model, split[g]).prediction;
        total += graph_metric(pred, split[g], metric);
    }
    return total / static_cast<double>(split.size());
}

TrainResult train(RanGnnModel model, const DatasetSplits& splits, const TrainConfig& cfg) {
    cfg.validate();
    if (splits.train.empty() || splits.val.empty())
        throw std::invalid_argument("train: train and val splits must be non-empty");

    const auto t_start = std::chrono::steady_clock::now();
    AdamOptimizer adam(model.param_list());
    PlateauSchedule schedule(cfg.lr_init, cfg.lr_min, cfg.decay_factor, cfg.plateau_patience,
                             cfg.stop_patience);
    Rng shuffle_rng = substream(cfg.seed, stream::kShuffle);
    Rng mask_rng = substream(cfg.seed, stream::kDropPath);

    TrainResult result;
    result.best_model = model;
    double best_val = std::numeric_limits<double>::infinity();

    std::vector<int> order(splits.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    const std::size_t n_params = model.param_list().size();

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        // Fisher-Yates shuffle, deterministic per epoch
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);

        double epoch_loss = 0.0;
        int batch_id = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch_id) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            std::vector<Tensor> grads;
            for (Tensor* p : model.param_list()) grads.push_back(Tensor::zeros(p->rows(), p->cols()));
            double batch_loss = 0.0;
            for (std::size_t s = start; s < end; ++s) {
                const DomainGraph& g = splits.train[order[s]];
                Tape tape;
                const ModelBinding binding = bind_model(tape, model);
                DropPathMask mask;
                const DropPathMask* mask_ptr = nullptr;
                if (model.config.p_drop > 0.0) {
                    mask = sample_droppath_mask(model.wired.dag, model.config.p_drop,
                                                mask_rng.next_u64());
                    mask_ptr = &mask;
                }
                const ForwardIds ids =
                    forward_on_tape(tape, model, g, mask_ptr, Mode::Train, binding);
                const ValueId loss = tape.scale(graph_loss(tape, ids, g), inv_batch);
                const double loss_value = tape.val(loss).v[0];
                if (!std::isfinite(loss_value)) {
                    char buf[128];
                    std::snprintf(buf, sizeof(buf),
                                  "train: non-finite loss at epoch %d (lr=%g, batch %d)", epoch,
                                  schedule.lr(), batch_id);
                    throw TrainAbortError(buf, epoch, schedule.lr(), batch_id);
                }
                batch_loss += loss_value;
                tape.backward(loss);
                for (std::size_t pi = 0; pi < n_params; ++pi) {
                    const Tensor& g_param = tape.grad(binding.bound[pi].second);
                    for (std::size_t k = 0; k < grads[pi].v.size(); ++k)
                        grads[pi].v[k] += g_param.v[k];
                }
            }
            adam.step(grads, schedule.lr());
            epoch_loss += batch_loss * (static_cast<double>(end - start) / order.size());
        }

        const double val_loss = evaluate(model, splits.val, Metric::Mse, false);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = epoch_loss;
        rec.val_loss = val_loss;
        rec.lr = schedule.lr();
        result.metrics.epochs.push_back(rec);

        if (val_loss < best_val) {
            best_val = val_loss;
            result.best_model = model;
        }
        if (!schedule.observe(val_loss)) break;
    }

    result.metrics.epochs_run = static_cast<int>(result.metrics.epochs.size());
    result.metrics.final_lr = schedule.lr();
    result.metrics.best_val_loss = best_val;
    const Metric test_metric =
        splits.test.front().task == Task::GraphClassification ? Metric::Accuracy : Metric::Mae;
    result.metrics.test_metric_name = metric_name(test_metric);
    result.metrics.test_metric = evaluate(result.best_model, splits.test, test_metric, false);
    result.metrics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "p") return SweepAxis::P;
    if (name == "p_drop" || name == "p-drop") return SweepAxis::PDrop;
    if (name == "L" || name == "l" || name == "nodes") return SweepAxis::L;
    if (name == "sequential") return SweepAxis::Sequential;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

SweepResult sweep(const ModelConfig& base_model, const TrainConfig& base_train,
                  const DatasetSplits& splits, SweepAxis axis,
                  const std::vector<std::string>& values, int n_seeds, Metric metric) {
    if (values.empty()) throw std::invalid_argument("sweep: no axis values");
    if (n_seeds < 1) throw std::invalid_argument("sweep: need at least one seed");
    SweepResult result;
    for (const std::string& value : values) {
        ModelConfig mc = base_model;
        switch (axis) {
            case SweepAxis::P: mc.p = std::stod(value); break;
            case SweepAxis::PDrop: mc.p_drop = std::stod(value); break;
            case SweepAxis::L: mc.num_nodes = std::stoi(value); break;
            case SweepAxis::Sequential:
                if (value != "on" && value != "off")
                    throw std::invalid_argument("sweep: sequential axis takes on/off");
                mc.sequential_path = value == "on";
                break;
        }
        for (int s = 0; s < n_seeds; ++s) {
            const std::uint64_t run_seed = mix64(base_train.seed) + static_cast<std::uint64_t>(s);
            // architecture and weight-init vary through independent sub-streams
            ModelConfig run_cfg = mc;
            run_cfg.seed = mix64(run_seed ^ mix64(stream::kArchEdges));
            RanGnnModel model = build_model(run_cfg, mix64(run_seed ^ mix64(stream::kWeightInit)));
            TrainConfig tc = base_train;
            tc.seed = run_seed;
            TrainResult tr = train(std::move(model), splits, tc);
            const double m = evaluate(tr.best_model, splits.test, metric, false);
            result.cells.push_back({value, run_seed, m});
        }
    }
    // summary: mean +/- std per value; significance in baseline std units
    double base_mean = 0.0, base_std = 0.0;
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        double mean = 0.0, var = 0.0;
        for (int s = 0; s < n_seeds; ++s) mean += result.cells[vi * n_seeds + s].metric;
        mean /= n_seeds;
        for (int s = 0; s < n_seeds; ++s) {
            const double d = result.cells[vi * n_seeds + s].metric - mean;
            var += d * d;
        }
        const double sd = n_seeds > 1 ? std::sqrt(var / (n_seeds - 1)) : 0.0;
        if (vi == 0) {
            base_mean = mean;
            base_std = sd;
        }
        SweepSummary row;
        row.axis_value = values[vi];
        row.mean = mean;
        row.stddev = sd;
        row.significance = vi == 0 || base_std == 0.0 ? 0.0 : std::abs(mean - base_mean) / base_std;
        result.summary.push_back(row);
    }
    return result;
}

void write_metrics_csv(const RunMetrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write metrics file: " + path);
    char buf[160];
    out << "epoch,train_loss,val_loss,lr\n";
    for (const auto& e : metrics.epochs) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", e.epoch, e.train_loss,
                      e.val_loss, e.lr);
        out << buf;
    }
}

}  // namespace ranwire
