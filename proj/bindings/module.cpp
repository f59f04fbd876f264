#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ranwire/arch_dag.hpp"
#include "ranwire/errors.hpp"
#include "ranwire/gnn_layers.hpp"
#include "ranwire/graph_data.hpp"
#include "ranwire/path_analysis.hpp"
#include "ranwire/ran_model.hpp"
#include "ranwire/train.hpp"
#include "ranwire/verify.hpp"

namespace py = pybind11;
using namespace ranwire;

namespace {

py::object big_to_pyint(const BigInt& x) {
    return py::module_::import("builtins").attr("int")(x.str());
}

py::dict histogram_to_dict(const PathLengthHistogram& h) {
    py::dict d;
    for (const auto& [l, c] : h.counts) d[py::int_(l)] = big_to_pyint(c);
    return d;
}

py::dict estimate_to_dict(const ErEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error ? py::object(py::float_(*e.std_error)) : py::none();
    d["samples"] = e.samples;
    d["mean_of_ratio"] =
        e.mean_of_ratio ? py::object(py::float_(*e.mean_of_ratio)) : py::none();
    d["mean_of_ratio_se"] =
        e.mean_of_ratio_se ? py::object(py::float_(*e.mean_of_ratio_se)) : py::none();
    return d;
}

ErStatistic statistic_from_args(const std::string& name, int length, int i, int j) {
    if (name == "path_count") return ErStatistic::path_count();
    if (name == "count_of_length") return ErStatistic::count_of_length(length);
    if (name == "mean_length_ratio") return ErStatistic::mean_length_ratio();
    if (name == "edge_mean_length") return ErStatistic::edge_mean_length(i, j);
    throw std::invalid_argument("unknown statistic '" + name + "'");
}

std::vector<std::vector<double>> tensor_to_rows(const Tensor& t) {
    std::vector<std::vector<double>> rows(t.rows());
    for (int r = 0; r < t.rows(); ++r)
        for (int c = 0; c < t.cols(); ++c) rows[r].push_back(t.at(r, c));
    return rows;
}

}  // namespace

PYBIND11_MODULE(_ranwire, m) {
    m.doc() = "randomly wired GNN toolkit: architecture generation, path analysis, models";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<CapacityError>(m, "CapacityError");
    py::register_exception<GenerationError>(m, "GenerationError");
    py::register_exception<DegenerateDistributionError>(m, "DegenerateDistributionError");

    py::class_<ArchDag>(m, "ArchDag")
        .def_readonly("num_nodes", &ArchDag::num_nodes)
        .def_readonly("edges", &ArchDag::edges)
        .def_readonly("gen_p", &ArchDag::gen_p)
        .def_readonly("seed", &ArchDag::seed)
        .def_readonly("sequential_embedded", &ArchDag::sequential_embedded)
        .def("__eq__", [](const ArchDag& a, const ArchDag& b) { return a == b; })
        .def("__repr__", [](const ArchDag& d) {
            return "ArchDag(L=" + std::to_string(d.num_nodes) + ", edges=" +
                   std::to_string(d.edges.size()) + ")";
        });

    py::class_<WiredArch>(m, "WiredArch")
        .def_readonly("dag", &WiredArch::dag)
        .def_readonly("input_nodes", &WiredArch::input_nodes)
        .def_readonly("output_nodes", &WiredArch::output_nodes);

    m.def("generate_er_dag", &generate_er_dag, py::arg("num_nodes"), py::arg("p"),
          py::arg("seed"));
    m.def("embed_sequential_path", &embed_sequential_path, py::arg("dag"));
    m.def("wire_terminals", &wire_terminals, py::arg("dag"));
    m.def("make_arch_dag", &make_arch_dag, py::arg("num_nodes"), py::arg("edges"),
          py::arg("gen_p") = 0.0, py::arg("seed") = 0, py::arg("sequential_embedded") = false);
    m.def("serialize", &serialize, py::arg("dag"));
    m.def("deserialize", &deserialize, py::arg("text"));
    m.def("load_arch", &load_arch, py::arg("path"));
    m.def("save_arch", &save_arch, py::arg("dag"), py::arg("path"));

    m.def(
        "path_length_histogram",
        [](const ArchDag& dag, int src, int dst) {
            return histogram_to_dict(path_length_histogram(dag, src, dst));
        },
        py::arg("dag"), py::arg("src"), py::arg("dst"));
    m.def("enumerate_paths", &enumerate_paths, py::arg("dag"), py::arg("src"), py::arg("dst"),
          py::arg("max_nodes") = 16);
    m.def(
        "expected_path_stats",
        [](int L, double p, int k) {
            const auto s = expected_path_stats(L, p, k);
            py::dict d;
            d["expected_count_by_length"] = s.expected_count_by_length;
            d["expected_total"] = s.expected_total;
            d["expected_length"] = s.expected_length;
            return d;
        },
        py::arg("num_nodes"), py::arg("p"), py::arg("k"));
    m.def("expected_edge_path_length", &expected_edge_path_length, py::arg("num_nodes"),
          py::arg("p"), py::arg("i"), py::arg("j"));
    m.def(
        "exact_er_expectation",
        [](int L, double p, const std::string& statistic, int src, int dst, int length, int i,
           int j) {
            return estimate_to_dict(
                exact_er_expectation(L, p, statistic_from_args(statistic, length, i, j), src, dst));
        },
        py::arg("num_nodes"), py::arg("p"), py::arg("statistic"), py::arg("src"), py::arg("dst"),
        py::arg("length") = 0, py::arg("i") = 0, py::arg("j") = 0);
    m.def(
        "mc_er_expectation",
        [](int L, double p, const std::string& statistic, int src, int dst,
           std::int64_t samples, std::uint64_t seed, int length, int i, int j) {
            return estimate_to_dict(mc_er_expectation(
                L, p, statistic_from_args(statistic, length, i, j), src, dst, samples, seed));
        },
        py::arg("num_nodes"), py::arg("p"), py::arg("statistic"), py::arg("src"), py::arg("dst"),
        py::arg("samples"), py::arg("seed"), py::arg("length") = 0, py::arg("i") = 0,
        py::arg("j") = 0);
    m.def(
        "radius_distribution",
        [](const ArchDag& dag, const std::map<std::pair<int, int>, double>& weights,
           bool normalized) {
            const auto rho = radius_distribution(dag, weights, normalized);
            return rho.mass;
        },
        py::arg("dag"), py::arg("edge_weights"), py::arg("normalized") = false);

    py::class_<DropPathMask>(m, "DropPathMask")
        .def_readonly("edges", &DropPathMask::edges)
        .def_readonly("seed", &DropPathMask::seed)
        .def_property_readonly("keep", [](const DropPathMask& m_) {
            std::vector<bool> out(m_.keep.begin(), m_.keep.end());
            return out;
        });
    m.def("sample_droppath_mask", &sample_droppath_mask, py::arg("dag"), py::arg("p_drop"),
          py::arg("seed"));
    m.def(
        "droppath_covariance_check",
        [](const ArchDag& dag, const std::map<std::pair<int, int>, double>& omega, double p_drop,
           std::int64_t samples, std::uint64_t seed) {
            py::list rows;
            for (const auto& r : droppath_covariance_check(dag, omega, p_drop, samples, seed)) {
                py::dict d;
                d["path_a"] = r.path_a;
                d["path_b"] = r.path_b;
                d["shared_edges"] = r.shared_edges;
                d["covariance"] = r.covariance;
                d["std_error"] = r.std_error;
                rows.append(d);
            }
            return rows;
        },
        py::arg("dag"), py::arg("omega"), py::arg("p_drop"), py::arg("samples"), py::arg("seed"));

    py::enum_<Task>(m, "Task")
        .value("NodeRegression", Task::NodeRegression)
        .value("GraphRegression", Task::GraphRegression)
        .value("GraphClassification", Task::GraphClassification);

    py::class_<DomainGraph>(m, "DomainGraph")
        .def_readonly("n", &DomainGraph::n)
        .def_readonly("nbrs", &DomainGraph::nbrs)
        .def_property_readonly(
            "features", [](const DomainGraph& g) { return tensor_to_rows(g.features); })
        .def_property_readonly(
            "node_targets", [](const DomainGraph& g) { return tensor_to_rows(g.node_targets); });
    m.def("load_graph", &load_graph, py::arg("path"));
    m.def("load_split", &load_split, py::arg("dir"));
    m.def(
        "gen_khop_dataset",
        [](int n_graphs, int nodes, double edge_prob, int radius, std::uint64_t seed) {
            return gen_khop_dataset(n_graphs, nodes, edge_prob, radius, seed);
        },
        py::arg("n_graphs"), py::arg("nodes_per_graph"), py::arg("edge_prob"), py::arg("radius"),
        py::arg("seed"));

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init([](const std::string& conv, int hidden_dim, int num_nodes, double p,
                         std::uint64_t seed, bool sequential_path, double p_drop, int mc_samples,
                         const std::string& task, int input_dim, int output_dim, int edge_dim,
                         bool linear_mode) {
                 ModelConfig c;
                 c.conv_type = conv_from_name(conv);
                 c.hidden_dim = hidden_dim;
                 c.num_nodes = num_nodes;
                 c.p = p;
                 c.seed = seed;
                 c.sequential_path = sequential_path;
                 c.p_drop = p_drop;
                 c.mc_samples = mc_samples;
                 c.task = task_from_name(task);
                 c.input_dim = input_dim;
                 c.output_dim = output_dim;
                 c.edge_dim = edge_dim;
                 c.linear_mode = linear_mode;
                 c.validate();
                 return c;
             }),
             py::arg("conv") = "gcn", py::arg("hidden_dim") = 16, py::arg("num_nodes") = 4,
             py::arg("p") = 0.6, py::arg("seed") = 0, py::arg("sequential_path") = false,
             py::arg("p_drop") = 0.0, py::arg("mc_samples") = 10, py::arg("task") = "node",
             py::arg("input_dim") = 1, py::arg("output_dim") = 1, py::arg("edge_dim") = 0,
             py::arg("linear_mode") = false)
        .def_readwrite("hidden_dim", &ModelConfig::hidden_dim)
        .def_readwrite("num_nodes", &ModelConfig::num_nodes)
        .def_readwrite("p", &ModelConfig::p)
        .def_readwrite("seed", &ModelConfig::seed)
        .def_readwrite("p_drop", &ModelConfig::p_drop)
        .def_readwrite("mc_samples", &ModelConfig::mc_samples);

    py::class_<RanGnnModel>(m, "RanGnnModel")
        .def_property_readonly("wired", [](const RanGnnModel& m_) { return m_.wired; })
        .def_property_readonly("num_edges", [](const RanGnnModel& m_) { return m_.num_edges(); })
        .def("omega_map", &RanGnnModel::omega_map)
        .def(
            "forward",
            [](RanGnnModel& model, const DomainGraph& g) {
                return tensor_to_rows(forward(model, g).prediction);
            },
            py::arg("graph"))
        .def(
            "mc_infer",
            [](RanGnnModel& model, const DomainGraph& g, int samples, std::uint64_t seed) {
                return tensor_to_rows(mc_infer(model, g, samples, seed));
            },
            py::arg("graph"), py::arg("samples"), py::arg("seed"))
        .def("save", [](RanGnnModel& model, const std::string& path) { save_model(model, path); },
             py::arg("path"));
    m.def("build_model", &build_model, py::arg("config"), py::arg("init_seed"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("path_decomposition_check", &path_decomposition_check, py::arg("model"),
          py::arg("graph"));

    m.def(
        "verify_lemmas",
        [](int max_nodes, const std::vector<double>& p_list, double tolerance, std::uint64_t seed,
           std::int64_t samples) {
            VerifyOptions opts;
            opts.max_nodes = max_nodes;
            if (!p_list.empty()) opts.p_list = p_list;
            opts.tolerance = tolerance;
            opts.seed = seed;
            opts.mc_samples = samples;
            const auto report = verify_lemmas(opts);
            py::dict d;
            d["all_pass"] = report.all_pass;
            d["csv"] = report_to_csv(report);
            d["rows"] = report.rows.size();
            return d;
        },
        py::arg("max_nodes") = 5, py::arg("p_list") = std::vector<double>{},
        py::arg("tolerance") = 1e-9, py::arg("seed") = 1, py::arg("samples") = 20000);
}
