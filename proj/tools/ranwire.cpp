// ranwire: generate, analyze, verify and train randomly wired GNNs.
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ranwire/arch_dag.hpp"
#include "ranwire/errors.hpp"
#include "ranwire/path_analysis.hpp"
#include "ranwire/ran_model.hpp"
#include "ranwire/rng.hpp"
#include "ranwire/train.hpp"
#include "ranwire/verify.hpp"

namespace fs = std::filesystem;
using namespace ranwire;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void echo_config(const std::string& subcommand,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string line = "config: subcommand=" + subcommand;
    for (const auto& [k, v] : kv) line += " " + k + "=" + v;
    std::printf("%s\n", line.c_str());
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::map<ArchEdge, double> load_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weights file: " + path);
    std::map<ArchEdge, double> weights;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        int i = 0, j = 0;
        double w = 0.0;
        if (std::sscanf(line.c_str(), "%d %d %lf", &i, &j, &w) != 3)
            throw ParseError("weights line '" + line + "': expected 'i j w'");
        weights[{i, j}] = w;
    }
    return weights;
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
    int nodes = 8;
    double p = 0.6;
    std::uint64_t seed = 0;
    bool sequential = false;
    std::string out;
};

int run_gen(const GenArgs& a) {
    echo_config("gen", {{"nodes", std::to_string(a.nodes)},
                        {"p", fmt_double(a.p)},
                        {"seed", std::to_string(a.seed)},
                        {"sequential", a.sequential ? "1" : "0"},
                        {"out", a.out}});
    ArchDag dag = generate_er_dag(a.nodes, a.p, a.seed);
    if (a.sequential) dag = embed_sequential_path(dag);
    save_arch(dag, a.out);
    const WiredArch wired = wire_terminals(dag);
    std::printf("wrote %s: L=%d edges=%zu inputs=%zu outputs=%zu\n", a.out.c_str(), dag.num_nodes,
                dag.edges.size(), wired.input_nodes.size(), wired.output_nodes.size());
    return kExitOk;
}

// ------------------------------------------------------------- analyze ----

struct AnalyzeArgs {
    std::string arch;
    std::string weights;
    std::string stat = "hist";
    std::string out;
    std::string svg;
    int nodes = 0;
    double p = -1.0;
    int seeds = 0;
    bool normalize = false;
};

int run_analyze(const AnalyzeArgs& a) {
    echo_config("analyze", {{"arch", a.arch},
                            {"weights", a.weights},
                            {"stat", a.stat},
                            {"nodes", std::to_string(a.nodes)},
                            {"p", fmt_double(a.p)},
                            {"seeds", std::to_string(a.seeds)},
                            {"normalize", a.normalize ? "1" : "0"},
                            {"out", a.out}});
    if (a.stat == "lemmas") {
        const VerifyReport report = verify_lemmas(VerifyOptions{});
        if (!a.out.empty()) write_csv(a.out, report_to_csv(report));
        if (!report.all_pass) {
            const LemmaRow* fail = report.first_failure();
            std::fprintf(stderr, "lemma verification failed: %s %s closed=%.17g oracle=%.17g\n",
                         fail->lemma.c_str(), fail->config.c_str(), fail->closed_form,
                         fail->oracle);
            return kExitNumerical;
        }
        std::printf("all lemma rows pass (%zu rows)\n", report.rows.size());
        return kExitOk;
    }

    std::vector<std::pair<int, double>> bars;
    std::string csv = "length,value\n";
    if (!a.arch.empty()) {
        const ArchDag dag = load_arch(a.arch);
        if (a.stat == "hist") {
            const auto hist = path_length_histogram(dag, 1, dag.num_nodes);
            for (const auto& [l, c] : hist.counts) {
                csv += std::to_string(l) + "," + c.str() + "\n";
                bars.push_back({l, static_cast<double>(c)});
            }
        } else if (a.stat == "rho") {
            std::map<ArchEdge, double> weights;
            if (!a.weights.empty()) {
                weights = load_weights_file(a.weights);
            } else {
                for (const auto& e : dag.edges) weights[e] = 1.0;
            }
            const auto rho = radius_distribution(dag, weights, a.normalize);
            for (const auto& [l, v] : rho.mass) {
                csv += std::to_string(l) + "," + fmt_double(v) + "\n";
                bars.push_back({l, v});
            }
        } else {
            throw std::invalid_argument("analyze: unknown stat '" + a.stat + "'");
        }
    } else {
        // ensemble mode: average histograms over sampled DAGs
        if (a.nodes < 2 || a.p < 0.0 || a.seeds < 1)
            throw std::invalid_argument(
                "analyze: need --arch, or --nodes/--p/--seeds for ensemble mode");
        std::map<int, double> mean;
        for (int s = 0; s < a.seeds; ++s) {
            const ArchDag dag = generate_er_dag(a.nodes, a.p, s);
            const auto hist = path_length_histogram(dag, 1, a.nodes);
            for (const auto& [l, c] : hist.counts)
                mean[l] += static_cast<double>(c) / static_cast<double>(a.seeds);
        }
        for (const auto& [l, v] : mean) {
            csv += std::to_string(l) + "," + fmt_double(v) + "\n";
            bars.push_back({l, v});
        }
    }
    if (!a.out.empty()) write_csv(a.out, csv);
    else std::printf("%s", csv.c_str());
    if (!a.svg.empty())
        write_csv(a.svg, svg_bar_chart(bars, a.stat == "rho" ? "radius distribution rho_l"
                                                             : "path length histogram"));
    return kExitOk;
}

// -------------------------------------------------------- verify-lemmas ----

struct VerifyArgs {
    VerifyOptions opts;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    std::string plist;
    for (double p : a.opts.p_list) plist += (plist.empty() ? "" : ";") + fmt_double(p);
    echo_config("verify-lemmas", {{"max-nodes", std::to_string(a.opts.max_nodes)},
                                  {"p", plist},
                                  {"tolerance", fmt_double(a.opts.tolerance)},
                                  {"seed", std::to_string(a.opts.seed)},
                                  {"samples", std::to_string(a.opts.mc_samples)},
                                  {"out", a.out}});
    const VerifyReport report = verify_lemmas(a.opts);
    const std::string csv = report_to_csv(report);
    if (!a.out.empty()) write_csv(a.out, csv);
    int gated = 0, info = 0;
    for (const auto& r : report.rows) (r.informational ? info : gated)++;
    std::printf("verify-lemmas: %d gated rows, %d informational rows\n", gated, info);
    if (!report.all_pass) {
        const LemmaRow* fail = report.first_failure();
        std::fprintf(stderr,
                     "FAIL %s,%s,%.17g,%.17g,%.17g (tolerance %.3g)\n", fail->lemma.c_str(),
                     fail->config.c_str(), fail->closed_form, fail->oracle, fail->abs_err,
                     fail->tolerance);
        return kExitNumerical;
    }
    std::printf("all gated rows pass\n");
    return kExitOk;
}

// ------------------------------------------------------------ make-data ----

struct MakeDataArgs {
    int graphs = 100;
    int nodes = 20;
    double edge_prob = 0.15;
    int radius = 2;
    std::uint64_t seed = 0;
    double train_frac = 0.8;
    double val_frac = 0.1;
    std::string out;
};

int run_make_data(const MakeDataArgs& a) {
    echo_config("make-data", {{"graphs", std::to_string(a.graphs)},
                              {"nodes", std::to_string(a.nodes)},
                              {"edge-prob", fmt_double(a.edge_prob)},
                              {"radius", std::to_string(a.radius)},
                              {"seed", std::to_string(a.seed)},
                              {"train-frac", fmt_double(a.train_frac)},
                              {"val-frac", fmt_double(a.val_frac)},
                              {"out", a.out}});
    auto graphs = gen_khop_dataset(a.graphs, a.nodes, a.edge_prob, a.radius, a.seed);
    const DatasetSplits splits = split_dataset(std::move(graphs), a.train_frac, a.val_frac);
    save_dataset(splits, a.out);
    std::printf("wrote %s: %zu train / %zu val / %zu test graphs\n", a.out.c_str(),
                splits.train.size(), splits.val.size(), splits.test.size());
    return kExitOk;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
    std::string data;
    std::string out;
    std::string conv = "gcn";
    int nodes = 8;
    double p = 0.6;
    std::uint64_t seed = 0;
    bool sequential = false;
    double p_drop = 0.0;
    int hidden = 16;
    int mc_samples = 10;
    TrainConfig tc;
};

ModelConfig model_config_for_dataset(const TrainArgs& a, const DatasetSplits& splits) {
    const DomainGraph& g0 = splits.train.front();
    ModelConfig mc;
    mc.conv_type = conv_from_name(a.conv);
    mc.hidden_dim = a.hidden;
    mc.num_nodes = a.nodes;
    mc.p = a.p;
    mc.seed = mix64(a.seed ^ mix64(stream::kArchEdges));
    mc.sequential_path = a.sequential;
    mc.p_drop = a.p_drop;
    mc.mc_samples = a.mc_samples;
    mc.task = g0.task;
    mc.input_dim = g0.feature_dim();
    mc.edge_dim = g0.edge_dim;
    if (g0.task == Task::GraphClassification) {
        int classes = 0;
        for (const auto& g : splits.train) classes = std::max(classes, g.class_label + 1);
        mc.output_dim = std::max(classes, 2);
    } else {
        mc.output_dim = g0.target_dim();
    }
    return mc;
}

int run_train(const TrainArgs& a) {
    const std::vector<std::pair<std::string, std::string>> kv = {
        {"data", a.data},
        {"conv", a.conv},
        {"nodes", std::to_string(a.nodes)},
        {"p", fmt_double(a.p)},
        {"seed", std::to_string(a.seed)},
        {"sequential", a.sequential ? "1" : "0"},
        {"p-drop", fmt_double(a.p_drop)},
        {"hidden", std::to_string(a.hidden)},
        {"mc-samples", std::to_string(a.mc_samples)},
        {"lr-init", fmt_double(a.tc.lr_init)},
        {"lr-min", fmt_double(a.tc.lr_min)},
        {"decay-factor", fmt_double(a.tc.decay_factor)},
        {"patience", std::to_string(a.tc.plateau_patience)},
        {"stop-patience", std::to_string(a.tc.stop_patience)},
        {"max-epochs", std::to_string(a.tc.max_epochs)},
        {"batch-size", std::to_string(a.tc.batch_size)},
        {"out", a.out}};
    echo_config("train", kv);

    const DatasetSplits splits = load_dataset(a.data);
    const ModelConfig mc = model_config_for_dataset(a, splits);
    RanGnnModel model = build_model(mc, mix64(a.seed ^ mix64(stream::kWeightInit)));

    TrainConfig tc = a.tc;
    tc.seed = a.seed;
    TrainResult result = train(std::move(model), splits, tc);

    fs::create_directories(a.out);
    {
        std::ofstream cfg(fs::path(a.out) / "config.txt");
        cfg << "subcommand=train\n";
        for (const auto& [k, v] : kv) cfg << k << "=" << v << "\n";
    }
    write_metrics_csv(result.metrics, (fs::path(a.out) / "metrics.csv").string());
    save_model(result.best_model, (fs::path(a.out) / "model.json").string());
    std::printf("trained %d epochs, best val loss %.17g, test %s %.17g, wall %.1fs\n",
                result.metrics.epochs_run, result.metrics.best_val_loss,
                result.metrics.test_metric_name.c_str(), result.metrics.test_metric,
                result.metrics.wall_seconds);
    return kExitOk;
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
    std::string model;
    std::string data;
    std::string split = "test";
    std::string metric = "mae";
    bool mc = false;
    int samples = 0;  // 0: use checkpoint's mc_samples
    std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a) {
    echo_config("eval", {{"model", a.model},
                         {"data", a.data},
                         {"split", a.split},
                         {"metric", a.metric},
                         {"mc", a.mc ? "1" : "0"},
                         {"samples", std::to_string(a.samples)},
                         {"seed", std::to_string(a.seed)}});
    RanGnnModel model = load_model(a.model);
    if (a.samples > 0) model.config.mc_samples = a.samples;
    const auto graphs = load_split((fs::path(a.data) / a.split).string());
    const double value = evaluate(model, graphs, metric_from_name(a.metric), a.mc, a.seed);
    std::printf("%s=%.17g over %zu graphs\n", a.metric.c_str(), value, graphs.size());
    return kExitOk;
}

// ------------------------------------------------------------- mc-infer ----

struct McInferArgs {
    std::string model;
    std::string data;
    std::string split = "test";
    int samples = 10;
    std::uint64_t seed = 0;
    std::string out;
};

int run_mc_infer(const McInferArgs& a) {
    echo_config("mc-infer", {{"model", a.model},
                             {"data", a.data},
                             {"split", a.split},
                             {"samples", std::to_string(a.samples)},
                             {"seed", std::to_string(a.seed)},
                             {"out", a.out}});
    RanGnnModel model = load_model(a.model);
    const auto graphs = load_split((fs::path(a.data) / a.split).string());
    std::string csv = "graph,row,col,value\n";
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const Tensor pred = mc_infer(model, graphs[g], a.samples, mix64(a.seed) + g);
        for (int r = 0; r < pred.rows(); ++r)
            for (int c = 0; c < pred.cols(); ++c)
                csv += std::to_string(g) + "," + std::to_string(r) + "," + std::to_string(c) +
                       "," + fmt_double(pred.at(r, c)) + "\n";
    }
    if (!a.out.empty()) write_csv(a.out, csv);
    else std::printf("%s", csv.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
    std::string data;
    std::string axis = "p";
    std::vector<std::string> values;
    int seeds = 4;
    std::string metric = "mae";
    std::string out;
    TrainArgs base;  // model + training flags
};

int run_sweep(const SweepArgs& a) {
    std::string vals;
    for (const auto& v : a.values) vals += (vals.empty() ? "" : ";") + v;
    echo_config("sweep", {{"data", a.data},
                          {"axis", a.axis},
                          {"values", vals},
                          {"seeds", std::to_string(a.seeds)},
                          {"metric", a.metric},
                          {"conv", a.base.conv},
                          {"nodes", std::to_string(a.base.nodes)},
                          {"p", fmt_double(a.base.p)},
                          {"hidden", std::to_string(a.base.hidden)},
                          {"max-epochs", std::to_string(a.base.tc.max_epochs)},
                          {"out", a.out}});
    const DatasetSplits splits = load_dataset(a.data);
    const ModelConfig mc = model_config_for_dataset(a.base, splits);
    TrainConfig tc = a.base.tc;
    tc.seed = a.base.seed;
    const SweepResult result = sweep(mc, tc, splits, sweep_axis_from_name(a.axis), a.values,
                                     a.seeds, metric_from_name(a.metric));
    std::string cells_csv = "axis_value,seed,metric\n";
    for (const auto& c : result.cells)
        cells_csv += c.axis_value + "," + std::to_string(c.seed) + "," + fmt_double(c.metric) +
                     "\n";
    std::string summary_csv = "axis_value,mean,stddev,significance\n";
    for (const auto& s : result.summary)
        summary_csv += s.axis_value + "," + fmt_double(s.mean) + "," + fmt_double(s.stddev) +
                       "," + fmt_double(s.significance) + "\n";
    fs::create_directories(a.out);
    write_csv((fs::path(a.out) / "sweep.csv").string(), cells_csv);
    write_csv((fs::path(a.out) / "summary.csv").string(), summary_csv);
    std::printf("%s", summary_csv.c_str());
    return kExitOk;
}

void add_train_flags(CLI::App* cmd, TrainArgs& args) {
    cmd->add_option("--conv", args.conv, "Graph conv: gcn|sage|gin|gated")->capture_default_str();
    cmd->add_option("--nodes", args.nodes, "Architecture nodes L")->capture_default_str();
    cmd->add_option("--p", args.p, "Architecture edge probability")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Run seed")->capture_default_str();
    cmd->add_flag("--sequential", args.sequential, "Embed the sequential path");
    cmd->add_option("--p-drop", args.p_drop, "DropPath probability")->capture_default_str();
    cmd->add_option("--hidden", args.hidden, "Hidden width")->capture_default_str();
    cmd->add_option("--mc-samples", args.mc_samples, "MonteCarlo inference samples")
        ->capture_default_str();
    cmd->add_option("--lr-init", args.tc.lr_init, "Initial learning rate")->capture_default_str();
    cmd->add_option("--lr-min", args.tc.lr_min, "Minimum learning rate")->capture_default_str();
    cmd->add_option("--decay-factor", args.tc.decay_factor, "LR decay factor")
        ->capture_default_str();
    cmd->add_option("--patience", args.tc.plateau_patience, "Epochs before each decay")
        ->capture_default_str();
    cmd->add_option("--stop-patience", args.tc.stop_patience,
                    "Non-improving epochs at lr-min before halting")
        ->capture_default_str();
    cmd->add_option("--max-epochs", args.tc.max_epochs, "Epoch cap")->capture_default_str();
    cmd->add_option("--batch-size", args.tc.batch_size, "Graphs per batch")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomly wired GNN toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file (same key names)");
    app.allow_extras(false);

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random architecture DAG");
    gen_cmd->add_option("--nodes", gen_args.nodes, "Architecture nodes L")->required();
    gen_cmd->add_option("--p", gen_args.p, "Edge probability")->required();
    gen_cmd->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_flag("--sequential", gen_args.sequential, "Embed the sequential path");
    gen_cmd->add_option("--out", gen_args.out, "Output architecture file")->required();

    AnalyzeArgs an_args;
    auto* an_cmd = app.add_subcommand("analyze", "Path statistics of an architecture");
    an_cmd->add_option("--arch", an_args.arch, "Architecture file");
    an_cmd->add_option("--weights", an_args.weights, "Edge weights file (lines 'i j w')");
    an_cmd->add_option("--stat", an_args.stat, "hist|rho|lemmas")->capture_default_str();
    an_cmd->add_option("--out", an_args.out, "Output CSV");
    an_cmd->add_option("--svg", an_args.svg, "Optional SVG bar chart");
    an_cmd->add_option("--nodes", an_args.nodes, "Ensemble mode: L");
    an_cmd->add_option("--p", an_args.p, "Ensemble mode: edge probability");
    an_cmd->add_option("--seeds", an_args.seeds, "Ensemble mode: number of sampled DAGs");
    an_cmd->add_flag("--normalize", an_args.normalize, "Normalize rho to sum 1");

    VerifyArgs v_args;
    auto* v_cmd = app.add_subcommand("verify-lemmas", "Closed forms vs brute-force oracles");
    v_cmd->add_option("--max-nodes", v_args.opts.max_nodes, "Exact grid limit (<= 7)")
        ->capture_default_str();
    v_cmd->add_option("--p", v_args.opts.p_list, "Probability grid")->delimiter(',');
    v_cmd->add_option("--tolerance", v_args.opts.tolerance, "Exact-row tolerance")
        ->capture_default_str();
    v_cmd->add_option("--seed", v_args.opts.seed, "Monte-Carlo seed")->capture_default_str();
    v_cmd->add_option("--samples", v_args.opts.mc_samples, "Monte-Carlo samples")
        ->capture_default_str();
    v_cmd->add_option("--out", v_args.out, "Report CSV");

    MakeDataArgs md_args;
    auto* md_cmd = app.add_subcommand("make-data", "Generate a k-hop synthetic dataset");
    md_cmd->add_option("--graphs", md_args.graphs, "Number of graphs")->capture_default_str();
    md_cmd->add_option("--nodes", md_args.nodes, "Domain nodes per graph")->capture_default_str();
    md_cmd->add_option("--edge-prob", md_args.edge_prob, "Domain edge probability")
        ->capture_default_str();
    md_cmd->add_option("--radius", md_args.radius, "Target ball radius r")->capture_default_str();
    md_cmd->add_option("--seed", md_args.seed, "Dataset seed")->capture_default_str();
    md_cmd->add_option("--train-frac", md_args.train_frac, "Train fraction")
        ->capture_default_str();
    md_cmd->add_option("--val-frac", md_args.val_frac, "Validation fraction")
        ->capture_default_str();
    md_cmd->add_option("--out", md_args.out, "Dataset directory")->required();

    TrainArgs t_args;
    auto* t_cmd = app.add_subcommand("train", "Train a randomly wired GNN");
    t_cmd->add_option("--data", t_args.data, "Dataset directory")->required();
    t_cmd->add_option("--out", t_args.out, "Run directory")->required();
    add_train_flags(t_cmd, t_args);

    EvalArgs e_args;
    auto* e_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
    e_cmd->add_option("--model", e_args.model, "Checkpoint file")->required();
    e_cmd->add_option("--data", e_args.data, "Dataset directory")->required();
    e_cmd->add_option("--split", e_args.split, "train|val|test")->capture_default_str();
    e_cmd->add_option("--metric", e_args.metric, "mae|mse|accuracy")->capture_default_str();
    e_cmd->add_flag("--mc", e_args.mc, "MonteCarlo DropPath evaluation");
    e_cmd->add_option("--samples", e_args.samples, "MC samples (0: checkpoint default)")
        ->capture_default_str();
    e_cmd->add_option("--seed", e_args.seed, "MC seed")->capture_default_str();

    McInferArgs mi_args;
    auto* mi_cmd = app.add_subcommand("mc-infer", "MonteCarlo DropPath inference");
    mi_cmd->add_option("--model", mi_args.model, "Checkpoint file")->required();
    mi_cmd->add_option("--data", mi_args.data, "Dataset directory")->required();
    mi_cmd->add_option("--split", mi_args.split, "train|val|test")->capture_default_str();
    mi_cmd->add_option("--samples", mi_args.samples, "Mask samples S")->capture_default_str();
    mi_cmd->add_option("--seed", mi_args.seed, "Mask seed")->capture_default_str();
    mi_cmd->add_option("--out", mi_args.out, "Predictions CSV");

    SweepArgs s_args;
    auto* s_cmd = app.add_subcommand("sweep", "Train/evaluate across an axis");
    s_cmd->add_option("--data", s_args.data, "Dataset directory")->required();
    s_cmd->add_option("--axis", s_args.axis, "p|p_drop|L|sequential")->capture_default_str();
    s_cmd->add_option("--values", s_args.values, "Axis values")->delimiter(',')->required();
    s_cmd->add_option("--seeds", s_args.seeds, "Runs per value")->capture_default_str();
    s_cmd->add_option("--metric", s_args.metric, "mae|mse|accuracy")->capture_default_str();
    s_cmd->add_option("--out", s_args.out, "Output directory")->required();
    add_train_flags(s_cmd, s_args.base);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) return run_gen(gen_args);
        if (an_cmd->parsed()) return run_analyze(an_args);
        if (v_cmd->parsed()) return run_verify(v_args);
        if (md_cmd->parsed()) return run_make_data(md_args);
        if (t_cmd->parsed()) return run_train(t_args);
        if (e_cmd->parsed()) return run_eval(e_args);
        if (mi_cmd->parsed()) return run_mc_infer(mi_args);
        if (s_cmd->parsed()) return run_sweep(s_args);
    } catch (const TrainAbortError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const GenerationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const CapacityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
