#include "netsis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace netsis {

namespace {

std::size_t dense_index(int n, int i, int j) {
    return static_cast<std::size_t>(i) * n + j;
}

} // namespace

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw std::invalid_argument("graph needs at least one node");
    n_ = n;
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (i == j) throw std::invalid_argument("self-loops are not allowed");
        adj_[dense_index(n, i, j)] = 1;
        adj_[dense_index(n, j, i)] = 1;
    }
    finalize();
}

Graph::Graph(int n, std::vector<std::uint8_t> dense_adjacency) {
    if (n < 1) throw std::invalid_argument("graph needs at least one node");
    if (dense_adjacency.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("adjacency size mismatch");
    n_ = n;
    adj_ = std::move(dense_adjacency);
    for (int i = 0; i < n; ++i) {
        if (adj_[dense_index(n, i, i)] != 0)
            throw std::invalid_argument("self-loops are not allowed");
        for (int j = i + 1; j < n; ++j) {
            if (adj_[dense_index(n, i, j)] != adj_[dense_index(n, j, i)])
                throw std::invalid_argument("adjacency must be symmetric");
        }
    }
    finalize();
}

void Graph::finalize() {
    offsets_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) {
        int d = 0;
        const std::uint8_t* row = adj_.data() + static_cast<std::size_t>(i) * n_;
        for (int j = 0; j < n_; ++j) d += row[j];
        offsets_[i + 1] = offsets_[i] + d;
    }
    nbrs_.resize(offsets_[n_]);
    for (int i = 0; i < n_; ++i) {
        int pos = offsets_[i];
        const std::uint8_t* row = adj_.data() + static_cast<std::size_t>(i) * n_;
        for (int j = 0; j < n_; ++j)
            if (row[j]) nbrs_[pos++] = j;
    }
    links_ = static_cast<std::size_t>(offsets_[n_]) / 2;
    cache_ = std::make_shared<SpectralCache>();
}

int Graph::max_degree() const {
    int d = 0;
    for (int i = 0; i < n_; ++i) d = std::max(d, degree(i));
    return d;
}

double Graph::mean_degree() const {
    return n_ > 0 ? 2.0 * static_cast<double>(links_) / n_ : 0.0;
}

bool Graph::is_regular() const {
    if (n_ == 0) return false;
    const int d0 = degree(0);
    for (int i = 1; i < n_; ++i)
        if (degree(i) != d0) return false;
    return true;
}

namespace {

// Shifted power iteration on A + I. The Perron value lambda1 + 1 strictly
// dominates |lambda + 1| for every other adjacency eigenvalue (lambda >=
// -lambda1), so bipartite +/-lambda1 pairs cannot stall the iteration.
// Stops once the eigen-residual reaches the tolerance; restarts from a
// perturbed vector if the residual stagnates without reaching it.
SpectralData power_iteration(const Graph& g) {
    const int n = g.node_count();
    const long max_iter = 100000;
    SpectralData out;

    std::vector<double> x(n, 1.0), ax(n, 0.0);
    x[0] += 1e-3; // break symmetry between mirrored eigenspaces
    auto normalize = [&](std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e * e;
        s = std::sqrt(s);
        for (double& e : v) e /= s;
        return s;
    };
    normalize(x);

    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    double stagnation_mark = residual;
    int restarts = 0;
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j : g.neighbors(i)) s += x[j];
            ax[i] = s;
        }
        lambda = 0.0;
        for (int i = 0; i < n; ++i) lambda += x[i] * ax[i];
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = ax[i] - lambda * x[i];
            r2 += d * d;
        }
        residual = std::sqrt(r2);
        if (residual <= 1e-12 * std::max(1.0, lambda)) break;

        if (iter > 0 && iter % 2000 == 0) {
            if (residual > 0.95 * stagnation_mark && restarts < 3) {
                // stagnating: restart from a deterministically perturbed vector
                Rng rng(0xC0FFEEu + static_cast<unsigned>(++restarts));
                for (double& e : x) e = std::abs(e) + 1e-3 * rng.uniform();
                normalize(x);
                stagnation_mark = std::numeric_limits<double>::infinity();
                continue;
            }
            stagnation_mark = residual;
        }

        for (int i = 0; i < n; ++i) x[i] = ax[i] + x[i]; // (A + I) x
        normalize(x);
    }

    for (double& e : x) e = std::max(e, 0.0); // shave rounding negatives
    normalize(x);
    out.lambda1 = lambda;
    out.x1 = std::move(x);
    out.residual = residual;
    out.iterations = iter;
    return out;
}

SpectralData compute_spectral(const Graph& g) {
    const int n = g.node_count();
    SpectralData out;
    if (g.link_count() == 0) {
        out.lambda1 = 0.0;
        out.x1.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
        out.degenerate = true;
        return out;
    }
    // A connected k-regular graph has the exact Perron pair (k, u/sqrt(n)).
    if (g.is_regular() && is_connected(g)) {
        out.lambda1 = static_cast<double>(g.degree(0));
        out.x1.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
        return out;
    }
    return power_iteration(g);
}

} // namespace

const SpectralData& Graph::spectral() const {
    std::call_once(cache_->flag, [this] { cache_->data = compute_spectral(*this); });
    return *cache_->data;
}

// ---------------------------------------------------------------------------
// generators

Graph erdos_renyi(int n, double p, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("erdos_renyi: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: p must be in [0,1]");
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.emplace_back(i, j);
    return Graph(n, edges);
}

Graph barabasi_albert(int n, int m0, int m, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("barabasi_albert: n must be >= 1");
    if (m < 1 || m > m0) throw std::invalid_argument("barabasi_albert: need 1 <= m <= m0");
    if (m0 > n) throw std::invalid_argument("barabasi_albert: need m0 <= n");
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(n, 0);
    long total_degree = 0;

    for (int i = 0; i < m0; ++i)
        for (int j = i + 1; j < m0; ++j) {
            edges.emplace_back(i, j);
            ++degree[i];
            ++degree[j];
            total_degree += 2;
        }

    std::vector<char> chosen(n, 0);
    std::vector<int> picks;
    for (int v = m0; v < n; ++v) {
        picks.clear();
        while (static_cast<int>(picks.size()) < m) {
            int target = -1;
            if (total_degree == 0) {
                target = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v)));
            } else {
                // degree-proportional choice among existing nodes
                const double u = rng.uniform() * static_cast<double>(total_degree);
                double acc = 0.0;
                for (int w = 0; w < v; ++w) {
                    acc += degree[w];
                    if (u < acc) {
                        target = w;
                        break;
                    }
                }
                if (target < 0) target = v - 1; // u landed on the boundary
            }
            if (!chosen[target]) {
                chosen[target] = 1;
                picks.push_back(target);
            }
        }
        for (int w : picks) {
            chosen[w] = 0;
            edges.emplace_back(v, w);
            ++degree[v];
            ++degree[w];
            total_degree += 2;
        }
    }
    return Graph(n, edges);
}

Graph watts_strogatz(int n, int k_half, double beta_ws, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("watts_strogatz: n must be >= 1");
    if (k_half < 1 || k_half > (n - 1) / 2)
        throw std::invalid_argument("watts_strogatz: need 1 <= K <= floor((n-1)/2)");
    if (beta_ws < 0.0 || beta_ws > 1.0)
        throw std::invalid_argument("watts_strogatz: rewiring probability must be in [0,1]");
    Rng rng(seed);
    std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
    auto link = [&](int i, int j, std::uint8_t v) {
        adj[static_cast<std::size_t>(i) * n + j] = v;
        adj[static_cast<std::size_t>(j) * n + i] = v;
    };
    for (int k = 1; k <= k_half; ++k)
        for (int i = 0; i < n; ++i) link(i, (i + k) % n, 1);

    if (beta_ws > 0.0) {
        for (int k = 1; k <= k_half; ++k) {
            for (int i = 0; i < n; ++i) {
                if (rng.uniform() >= beta_ws) continue;
                const int old_j = (i + k) % n;
                // draw a replacement endpoint, no self-loop, no duplicate
                int t = -1;
                for (int attempt = 0; attempt < 8 * n; ++attempt) {
                    const int cand = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
                    if (cand == i || cand == old_j) continue;
                    if (adj[static_cast<std::size_t>(i) * n + cand]) continue;
                    t = cand;
                    break;
                }
                if (t < 0) continue; // node already saturated, keep the ring edge
                link(i, old_j, 0);
                link(i, t, 1);
            }
        }
    }
    return Graph(n, std::move(adj));
}

Graph complete_graph(int n) {
    if (n < 1) throw std::invalid_argument("complete_graph: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, edges);
}

Graph complete_bipartite(int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("complete_bipartite: parts must be non-empty");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return Graph(a + b, edges);
}

Graph star_graph(int n) {
    if (n < 1) throw std::invalid_argument("star_graph: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
    return Graph(n, edges);
}

Graph path_graph(int n) {
    if (n < 1) throw std::invalid_argument("path_graph: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, edges);
}

// ---------------------------------------------------------------------------
// structure

std::vector<ComponentSplit> connected_components(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> label(n, -1);
    std::vector<int> queue;
    int n_components = 0;
    for (int start = 0; start < n; ++start) {
        if (label[start] >= 0) continue;
        const int c = n_components++;
        label[start] = c;
        queue.assign(1, start);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            for (int j : g.neighbors(queue[q])) {
                if (label[j] < 0) {
                    label[j] = c;
                    queue.push_back(j);
                }
            }
        }
    }

    std::vector<ComponentSplit> out(n_components);
    std::vector<int> local(n, -1);
    for (int i = 0; i < n; ++i) {
        auto& comp = out[label[i]];
        local[i] = static_cast<int>(comp.to_parent.size());
        comp.to_parent.push_back(i);
    }
    for (int c = 0; c < n_components; ++c) {
        std::vector<std::pair<int, int>> edges;
        for (int li = 0; li < static_cast<int>(out[c].to_parent.size()); ++li) {
            const int i = out[c].to_parent[li];
            for (int j : g.neighbors(i))
                if (j > i) edges.emplace_back(li, local[j]);
        }
        out[c].subgraph = Graph(static_cast<int>(out[c].to_parent.size()), edges);
    }
    return out;
}

bool is_connected(const Graph& g) {
    const int n = g.node_count();
    std::vector<char> seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    int visited = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        for (int j : g.neighbors(queue[q])) {
            if (!seen[j]) {
                seen[j] = 1;
                ++visited;
                queue.push_back(j);
            }
        }
    }
    return visited == n;
}

double basic_reproduction_number(const Graph& g, double tau) {
    if (tau < 0.0) throw std::invalid_argument("basic_reproduction_number: tau must be >= 0");
    return tau * g.spectral().lambda1;
}

// ---------------------------------------------------------------------------
// edge-list io

Graph read_edge_list(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::istringstream ls(line);
        if (n < 0) {
            std::string tag;
            ls >> tag >> n;
            if (tag != "N" || !ls || n < 1)
                throw std::invalid_argument("edge list must start with 'N <count>'");
            continue;
        }
        int i, j;
        if (!(ls >> i >> j)) throw std::invalid_argument("malformed edge line: " + line);
        edges.emplace_back(i, j);
    }
    if (n < 0) throw std::invalid_argument("edge list missing 'N <count>' header");
    return Graph(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open edge list: " + path);
    return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "N " << g.node_count() << "\n";
    for (int i = 0; i < g.node_count(); ++i)
        for (int j : g.neighbors(i))
            if (j > i) out << i << " " << j << "\n";
}

void write_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    write_edge_list(g, out);
}

} // namespace netsis
