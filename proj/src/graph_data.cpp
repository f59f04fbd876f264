#include "ranwire/graph_data.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ranwire/errors.hpp"

namespace fs = std::filesystem;

namespace ranwire {

std::string task_name(Task t) {
    switch (t) {
        case Task::NodeRegression: return "node";
        case Task::GraphRegression: return "graph";
        case Task::GraphClassification: return "class";
    }
    return "node";
}

Task task_from_name(const std::string& name) {
    if (name == "node") return Task::NodeRegression;
    if (name == "graph") return Task::GraphRegression;
    if (name == "class") return Task::GraphClassification;
    throw ParseError("field target: unknown task '" + name + "'");
}

int DomainGraph::target_dim() const {
    return task == Task::NodeRegression ? node_targets.cols() : 1;
}

void DomainGraph::add_edge(int a, int b, const std::vector<double>& feat) {
    if (a < 0 || a >= n || b < 0 || b >= n)
        throw std::invalid_argument("DomainGraph::add_edge: node index out of range");
    for (const auto& [src, dst] : {std::pair{a, b}, std::pair{b, a}}) {
        nbrs[src].push_back(dst);
        directed.emplace_back(src, dst);
        in_edges[dst].push_back(static_cast<int>(directed.size()) - 1);
        if (edge_dim > 0) {
            if (static_cast<int>(feat.size()) != edge_dim)
                throw std::invalid_argument("DomainGraph::add_edge: edge feature width mismatch");
            const int row = static_cast<int>(directed.size()) - 1;
            if (edge_features.rows() < row + 1) {
                Tensor grown(row + 1, edge_dim);
                for (std::size_t i = 0; i < edge_features.v.size(); ++i)
                    grown.v[i] = edge_features.v[i];
                edge_features = std::move(grown);
            }
            for (int j = 0; j < edge_dim; ++j) edge_features.at(row, j) = feat[j];
        }
    }
}

DomainGraph make_domain_graph(int n, int feature_dim, int edge_dim, Task task, int target_dim) {
    DomainGraph g;
    g.n = n;
    g.nbrs.resize(n);
    g.in_edges.resize(n);
    g.features = Tensor::zeros(n, feature_dim);
    g.edge_dim = edge_dim;
    g.edge_features = Tensor::zeros(0, 0);
    g.task = task;
    if (task == Task::NodeRegression) g.node_targets = Tensor::zeros(n, target_dim);
    return g;
}

std::string serialize_graph(const DomainGraph& g) {
    std::ostringstream out;
    char buf[64];
    out << "n=" << g.n << "\n";
    out << "d=" << g.feature_dim() << "\n";
    out << "edge_dim=" << g.edge_dim << "\n";
    out << "target=" << task_name(g.task) << "\n";
    out << "target_dim=" << g.target_dim() << "\n";
    // undirected pairs appear once, in insertion order (even directed ids)
    const int pairs = static_cast<int>(g.directed.size()) / 2;
    out << "edges=" << pairs << "\n";
    for (int e = 0; e < pairs; ++e)
        out << g.directed[2 * e].first << " " << g.directed[2 * e].second << "\n";
    out << "features\n";
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.feature_dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", g.features.at(i, j));
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
    if (g.edge_dim > 0) {
        out << "edge_features\n";
        for (int e = 0; e < pairs; ++e) {
            for (int j = 0; j < g.edge_dim; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", g.edge_features.at(2 * e, j));
                out << (j ? " " : "") << buf;
            }
            out << "\n";
        }
    }
    out << "targets\n";
    switch (g.task) {
        case Task::NodeRegression:
            for (int i = 0; i < g.n; ++i) {
                for (int j = 0; j < g.node_targets.cols(); ++j) {
                    std::snprintf(buf, sizeof(buf), "%.17g", g.node_targets.at(i, j));
                    out << (j ? " " : "") << buf;
                }
                out << "\n";
            }
            break;
        case Task::GraphRegression:
            std::snprintf(buf, sizeof(buf), "%.17g", g.graph_target);
            out << buf << "\n";
            break;
        case Task::GraphClassification: out << g.class_label << "\n"; break;
    }
    return out.str();
}

namespace {

std::vector<double> parse_row(const std::string& line, int expect, const char* what) {
    std::istringstream ss(line);
    std::vector<double> row;
    double x;
    while (ss >> x) row.push_back(x);
    if (static_cast<int>(row.size()) != expect) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s row: expected %d values, got %zu", what, expect,
                      row.size());
        throw ParseError(buf);
    }
    return row;
}

}  // namespace

DomainGraph deserialize_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1, d = -1, edge_dim = 0, target_dim = 1, num_edges = -1;
    Task task = Task::NodeRegression;
    bool have_task = false;

    const auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty() && line[0] != '#') return true;
        }
        return false;
    };

    // header
    while (next_line()) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) break;  // first section marker
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "n") n = std::stoi(val);
            else if (key == "d") d = std::stoi(val);
            else if (key == "edge_dim") edge_dim = std::stoi(val);
            else if (key == "target") { task = task_from_name(val); have_task = true; }
            else if (key == "target_dim") target_dim = std::stoi(val);
            else if (key == "edges") num_edges = std::stoi(val);
            else throw ParseError("unknown header field '" + key + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("field " + key + ": malformed value '" + val + "'");
        }
    }
    if (n < 0) throw ParseError("field n: missing");
    if (d < 0) throw ParseError("field d: missing");
    if (!have_task) throw ParseError("field target: missing");
    if (num_edges < 0) throw ParseError("field edges: missing");

    DomainGraph g = make_domain_graph(n, d, edge_dim, task, target_dim);

    std::vector<std::pair<int, int>> pairs;
    for (int e = 0; e < num_edges; ++e) {
        int a = 0, b = 0;
        if (std::sscanf(line.c_str(), "%d %d", &a, &b) != 2)
            throw ParseError("edge line '" + line + "': expected 'a b'");
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ParseError("edge line '" + line + "': node index out of range");
        pairs.emplace_back(a, b);
        if (!next_line()) throw ParseError("unexpected end of file in edge list");
    }
    if (line != "features") throw ParseError("expected 'features' section, got '" + line + "'");

    std::vector<std::vector<double>> feats;
    for (int i = 0; i < n; ++i) {
        if (!next_line()) throw ParseError("unexpected end of file in features");
        feats.push_back(parse_row(line, d, "features"));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) g.features.at(i, j) = feats[i][j];

    std::vector<std::vector<double>> efeats(pairs.size());
    if (edge_dim > 0) {
        if (!next_line() || line != "edge_features")
            throw ParseError("expected 'edge_features' section");
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            if (!next_line()) throw ParseError("unexpected end of file in edge_features");
            efeats[e] = parse_row(line, edge_dim, "edge_features");
        }
    }
    for (std::size_t e = 0; e < pairs.size(); ++e) g.add_edge(pairs[e].first, pairs[e].second, efeats[e]);

    if (!next_line() || line != "targets") throw ParseError("expected 'targets' section");
    switch (task) {
        case Task::NodeRegression:
            for (int i = 0; i < n; ++i) {
                if (!next_line()) throw ParseError("unexpected end of file in targets");
                const auto row = parse_row(line, target_dim, "targets");
                for (int j = 0; j < target_dim; ++j) g.node_targets.at(i, j) = row[j];
            }
            break;
        case Task::GraphRegression: {
            if (!next_line()) throw ParseError("unexpected end of file in targets");
            g.graph_target = parse_row(line, 1, "targets")[0];
            break;
        }
        case Task::GraphClassification: {
            if (!next_line()) throw ParseError("unexpected end of file in targets");
            g.class_label = std::stoi(line);
            break;
        }
    }
    return g;
}

DomainGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return deserialize_graph(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_graph(const DomainGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write graph file: " + path);
    out << serialize_graph(g);
}

std::vector<DomainGraph> load_split(const std::string& dir) {
    const fs::path index = fs::path(dir) / "index.txt";
    std::ifstream in(index);
    if (!in) throw ParseError("cannot open split manifest: " + index.string());
    std::vector<DomainGraph> graphs;
    std::string name;
    while (std::getline(in, name)) {
        while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
        if (name.empty()) continue;
        graphs.push_back(load_graph((fs::path(dir) / name).string()));
    }
    if (graphs.empty()) throw ParseError("split manifest lists no graphs: " + index.string());
    return graphs;
}

void save_split(const std::vector<DomainGraph>& graphs, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream index(fs::path(dir) / "index.txt");
    if (!index) throw ParseError("cannot write split manifest in " + dir);
    char name[32];
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::snprintf(name, sizeof(name), "graph_%05zu.txt", i);
        save_graph(graphs[i], (fs::path(dir) / name).string());
        index << name << "\n";
    }
}

}  // namespace ranwire
