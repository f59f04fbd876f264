#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranwire/graph_data.hpp"
#include "ranwire/ran_model.hpp"

namespace ranwire {

struct TrainConfig {
    double lr_init = 1e-3;
    double lr_min = 1e-5;
    double decay_factor = 0.5;
    int plateau_patience = 10;  // non-improving epochs before each decay
    int stop_patience = 5;      // non-improving epochs at lr_min before halting
    int max_epochs = 500;
    int batch_size = 8;
    std::uint64_t seed = 0;

    void validate() const;
};

// Plateau decay and the terminal stop rule, factored out of the training
// loop so the schedule replays from a scripted loss sequence. Decays
// multiply lr by decay_factor, clamped at lr_min; the stop counter runs
// over epochs observed while lr is already at lr_min.
class PlateauSchedule {
public:
    PlateauSchedule(double lr_init, double lr_min, double decay_factor, int patience,
                    int stop_patience);

    // Feed one epoch's validation loss; returns true while training should
    // continue (false = halt).
    bool observe(double val_loss);

    double lr() const { return lr_; }
    bool improved_last() const { return improved_last_; }
    int decay_count() const { return decays_; }
    double best() const { return best_; }

private:
    double lr_, lr_min_, factor_;
    int patience_, stop_patience_;
    double best_;
    int bad_epochs_ = 0;
    int bad_at_min_ = 0;
    int decays_ = 0;
    bool improved_last_ = false;
    bool stopped_ = false;
};

// Adam with bias correction; state aligned to a fixed parameter list.
class AdamOptimizer {
public:
    AdamOptimizer(std::vector<Tensor*> params, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);
    void step(const std::vector<Tensor>& grads, double lr);

private:
    std::vector<Tensor*> params_;
    std::vector<Tensor> m_, v_;
    double beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;
};

struct RunMetrics {
    std::vector<EpochRecord> epochs;
    double test_metric = 0.0;
    std::string test_metric_name;
    double wall_seconds = 0.0;
    double final_lr = 0.0;
    int epochs_run = 0;
    double best_val_loss = 0.0;
};

struct DatasetSplits {
    std::vector<DomainGraph> train, val, test;
};

// Node-regression probe for receptive fields: random connected graphs,
// standard-normal scalar features, target per node = mean feature over its
// <= radius-hop BFS ball (the node itself included). A model must realize
// receptive-field radius >= `radius` to fit it.
std::vector<DomainGraph> gen_khop_dataset(int n_graphs, int nodes_per_graph, double edge_prob,
                                          int radius, std::uint64_t seed);

DatasetSplits split_dataset(std::vector<DomainGraph> graphs, double train_frac, double val_frac);

void save_dataset(const DatasetSplits& splits, const std::string& dir);
DatasetSplits load_dataset(const std::string& dir);

enum class Metric { Mae, Mse, Accuracy };
std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Deterministic given the seed; averages over graphs then nodes for node
// tasks. MC mode sub-seeds masks from `seed`.
double evaluate(RanGnnModel& model, const std::vector<DomainGraph>& split, Metric metric, bool mc,
                std::uint64_t seed = 0);

struct TrainResult {
    RunMetrics metrics;
    RanGnnModel best_model;  // best-validation checkpoint
};

// Adam + plateau schedule + stop rule; DropPath masks resampled per forward
// pass when p_drop > 0; aborts with TrainAbortError on a non-finite loss.
TrainResult train(RanGnnModel model, const DatasetSplits& splits, const TrainConfig& cfg);

struct SweepCell {
    std::string axis_value;
    std::uint64_t seed = 0;
    double metric = 0.0;
};

struct SweepSummary {
    std::string axis_value;
    double mean = 0.0;
    double stddev = 0.0;
    // |mean - baseline mean| in baseline standard deviations; the first
    // axis value is the baseline (0 for it).
    double significance = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<SweepSummary> summary;
};

enum class SweepAxis { P, PDrop, L, Sequential };
SweepAxis sweep_axis_from_name(const std::string& name);

// Runs train+evaluate per (axis value, seed); architecture and weight-init
// seeds are varied through independent sub-streams of each run seed.
SweepResult sweep(const ModelConfig& base_model, const TrainConfig& base_train,
                  const DatasetSplits& splits, SweepAxis axis,
                  const std::vector<std::string>& values, int n_seeds, Metric metric);

void write_metrics_csv(const RunMetrics& metrics, const std::string& path);

}  // namespace ranwire
