#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ranwire/tensor.hpp"

namespace ranwire {

enum class Task { NodeRegression, GraphRegression, GraphClassification };

std::string task_name(Task t);
Task task_from_name(const std::string& name);

// Data graph consumed by the GNN. Undirected edges are stored symmetrically:
// each input pair (a,b) yields directed entries a->b and b->a, which share
// the edge-feature row of the input pair. Domain nodes are 0-indexed.
struct DomainGraph {
    int n = 0;
    std::vector<std::vector<int>> nbrs;            // nbrs[i]: neighbors of i
    std::vector<std::pair<int, int>> directed;     // all (src,dst) entries
    std::vector<std::vector<int>> in_edges;        // in_edges[i]: directed ids with dst == i
    Tensor features;                               // n x d
    Tensor edge_features;                          // |directed| x edge_dim (0x0 when absent)
    int edge_dim = 0;

    Task task = Task::NodeRegression;
    Tensor node_targets;   // n x target_dim (NodeRegression)
    double graph_target = 0.0;
    int class_label = -1;

    // Adds the undirected pair (a,b); `feat` is shared by both directions.
    void add_edge(int a, int b, const std::vector<double>& feat = {});
    int feature_dim() const { return features.cols(); }
    int target_dim() const;
};

DomainGraph make_domain_graph(int n, int feature_dim, int edge_dim, Task task, int target_dim);

// One graph per UTF-8 text file: `n=`, `d=`, `edge_dim=`, `target=`,
// `target_dim=`, `edges=` header, then edge lines, a `features` section,
// an optional `edge_features` section and a `targets` section.
std::string serialize_graph(const DomainGraph& g);
DomainGraph deserialize_graph(const std::string& text);
DomainGraph load_graph(const std::string& path);
void save_graph(const DomainGraph& g, const std::string& path);

// A split is a directory with an index.txt manifest listing graph files.
std::vector<DomainGraph> load_split(const std::string& dir);
void save_split(const std::vector<DomainGraph>& graphs, const std::string& dir);

}  // namespace ranwire
