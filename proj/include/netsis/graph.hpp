#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netsis/rng.hpp"

namespace netsis {

/// Principal eigenpair of the adjacency matrix.
struct SpectralData {
    double lambda1 = 0.0;          ///< largest adjacency eigenvalue
    std::vector<double> x1;        ///< principal eigenvector, unit 2-norm, entrywise >= 0
    double residual = 0.0;         ///< achieved ||A x1 - lambda1 x1||_2
    long iterations = 0;
    bool degenerate = false;       ///< graph has no links: lambda1 = 0, x1 uniform
};

/// Simple undirected graph on nodes 0..n-1. Dense symmetric 0/1 adjacency
/// with zero diagonal, plus a neighbor-list view for fast row sums.
/// Immutable after construction; safe to share across threads. The spectral
/// data is computed lazily and cached (thread-safe).
class Graph {
public:
    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edges);
    Graph(int n, std::vector<std::uint8_t> dense_adjacency);

    int node_count() const { return n_; }
    std::size_t link_count() const { return links_; }

    bool has_link(int i, int j) const {
        return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
    }

    std::span<const int> neighbors(int i) const {
        return {nbrs_.data() + offsets_[i], nbrs_.data() + offsets_[i + 1]};
    }

    int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
    int max_degree() const;
    double mean_degree() const;
    bool is_regular() const;

    /// Largest eigenvalue and Perron eigenvector; see graph.cpp for the
    /// iteration details. Cached after the first call.
    const SpectralData& spectral() const;

private:
    struct SpectralCache {
        std::once_flag flag;
        std::optional<SpectralData> data;
    };

    void finalize();

    int n_ = 0;
    std::size_t links_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<int> offsets_;
    std::vector<int> nbrs_;
    std::shared_ptr<SpectralCache> cache_;
};

// ---- random graph models (deterministic per seed) ----

Graph erdos_renyi(int n, double p, RngSeed seed);
Graph barabasi_albert(int n, int m0, int m, RngSeed seed);
Graph watts_strogatz(int n, int k_half, double beta_ws, RngSeed seed);

// ---- fixed topologies ----

Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);
Graph star_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);

// ---- structure ----

/// One connected component: the induced subgraph and the map from its node
/// indices back to the parent graph's node indices.
struct ComponentSplit {
    Graph subgraph;
    std::vector<int> to_parent;
};

std::vector<ComponentSplit> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// R0 = tau * lambda1(A).
double basic_reproduction_number(const Graph& g, double tau);

// ---- edge-list text format ----
// First line "N <n>", then one "i j" pair per line, 0-indexed. Blank lines
// and lines starting with '#' are ignored.

Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list_file(const Graph& g, const std::string& path);

} // namespace netsis
