#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "netsis/graph.hpp"

using namespace netsis;

namespace {

bool adjacency_equal(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count()) return false;
    for (int i = 0; i < a.node_count(); ++i)
        for (int j = 0; j < a.node_count(); ++j)
            if (a.has_link(i, j) != b.has_link(i, j)) return false;
    return true;
}

void check_simple(const Graph& g) {
    for (int i = 0; i < g.node_count(); ++i) {
        CHECK_FALSE(g.has_link(i, i));
        for (int j = 0; j < g.node_count(); ++j) CHECK(g.has_link(i, j) == g.has_link(j, i));
    }
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a.node_count(); ++i)
        for (int j : a.neighbors(i))
            if (j > i) edges.emplace_back(i, j);
    for (int i = 0; i < b.node_count(); ++i)
        for (int j : b.neighbors(i))
            if (j > i) edges.emplace_back(a.node_count() + i, a.node_count() + j);
    return Graph(a.node_count() + b.node_count(), edges);
}

} // namespace

TEST_CASE("erdos_renyi edge cases and concentration") {
    CHECK(erdos_renyi(5, 0.0, 1).link_count() == 0);
    CHECK(erdos_renyi(5, 1.0, 1).link_count() == 10);
    // Binomial(1225, 1/2): mean 612.5, sd 17.5; +-5 sd is [525, 700]
    const auto g = erdos_renyi(50, 0.5, 42);
    CHECK(g.link_count() >= 525);
    CHECK(g.link_count() <= 700);
    CHECK_THROWS_AS(erdos_renyi(5, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(erdos_renyi(5, -0.1, 1), std::invalid_argument);
}

TEST_CASE("generators are deterministic per seed") {
    CHECK(adjacency_equal(erdos_renyi(30, 0.3, 7), erdos_renyi(30, 0.3, 7)));
    CHECK_FALSE(adjacency_equal(erdos_renyi(30, 0.3, 7), erdos_renyi(30, 0.3, 8)));
    CHECK(adjacency_equal(barabasi_albert(30, 4, 2, 7), barabasi_albert(30, 4, 2, 7)));
    CHECK(adjacency_equal(watts_strogatz(30, 3, 0.4, 7), watts_strogatz(30, 3, 0.4, 7)));
}

TEST_CASE("generated graphs are simple and symmetric") {
    for (RngSeed seed : {1u, 2u, 3u}) {
        check_simple(erdos_renyi(40, 0.2, seed));
        check_simple(barabasi_albert(40, 5, 3, seed));
        check_simple(watts_strogatz(40, 4, 0.5, seed));
    }
}

TEST_CASE("barabasi_albert structure") {
    const auto k3 = barabasi_albert(3, 3, 2, 1);
    CHECK(k3.link_count() == 3);
    CHECK(k3.is_regular());

    // C(5,2) + 45 * 2 links by construction
    CHECK(barabasi_albert(50, 5, 2, 9).link_count() == 100);

    const auto tree = barabasi_albert(10, 1, 1, 5);
    CHECK(tree.link_count() == 9);
    CHECK(is_connected(tree));

    CHECK_THROWS_AS(barabasi_albert(10, 3, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(barabasi_albert(10, 11, 2, 1), std::invalid_argument);
}

TEST_CASE("watts_strogatz structure") {
    const auto ring = watts_strogatz(10, 2, 0.0, 1);
    CHECK(ring.link_count() == 20);
    for (int i = 0; i < 10; ++i) CHECK(ring.degree(i) == 4);

    const auto rewired = watts_strogatz(10, 2, 1.0, 3);
    CHECK(rewired.link_count() == 20);
    int degree_sum = 0;
    for (int i = 0; i < 10; ++i) degree_sum += rewired.degree(i);
    CHECK(degree_sum == 40);

    const auto cyc = watts_strogatz(50, 1, 0.0, 1);
    CHECK(cyc.spectral().lambda1 == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(watts_strogatz(10, 5, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(watts_strogatz(10, 0, 0.1, 1), std::invalid_argument);
}

TEST_CASE("named graph spectra") {
    CHECK(complete_graph(50).spectral().lambda1 == doctest::Approx(49.0).epsilon(1e-12));
    CHECK(complete_bipartite(25, 25).spectral().lambda1 == doctest::Approx(25.0).epsilon(1e-10));
    CHECK(star_graph(50).spectral().lambda1 == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(path_graph(3).spectral().lambda1 ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(cycle_graph(50).spectral().lambda1 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral invariants") {
    SUBCASE("eigen residual and Rayleigh bounds on random graphs") {
        for (RngSeed seed : {11u, 12u, 13u, 14u}) {
            const auto g = erdos_renyi(50, 0.15 + 0.2 * static_cast<double>(seed - 11u), seed);
            const auto& sd = g.spectral();
            if (g.link_count() == 0) continue;
            CHECK(sd.residual <= 1e-8 * std::max(1.0, sd.lambda1));
            CHECK(sd.lambda1 >= g.mean_degree() - 1e-9);
            CHECK(sd.lambda1 <= g.max_degree() + 1e-9);
            double norm2 = 0.0;
            for (double e : sd.x1) {
                CHECK(e >= 0.0);
                norm2 += e * e;
            }
            CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("non-regular graph goes through the iteration") {
        const auto& sd = star_graph(50).spectral();
        CHECK(sd.iterations > 0);
        CHECK(sd.residual <= 1e-9 * std::max(1.0, sd.lambda1));
    }
    SUBCASE("disconnected graph takes the dominant component") {
        const auto g = disjoint_union(complete_graph(5), complete_graph(3));
        const auto& sd = g.spectral();
        CHECK(sd.lambda1 == doctest::Approx(4.0).epsilon(1e-9));
        double mass_k3 = 0.0;
        for (int i = 5; i < 8; ++i) mass_k3 += sd.x1[i] * sd.x1[i];
        CHECK(mass_k3 < 1e-6);
    }
    SUBCASE("empty graph is degenerate") {
        const auto g = Graph(4, std::vector<std::pair<int, int>>{});
        CHECK(g.spectral().lambda1 == 0.0);
        CHECK(g.spectral().degenerate);
        CHECK(g.spectral().x1[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("connected components") {
    CHECK(connected_components(complete_graph(5)).size() == 1);
    CHECK(connected_components(Graph(4, std::vector<std::pair<int, int>>{})).size() == 4);

    const auto g = disjoint_union(complete_graph(5), path_graph(3));
    const auto comps = connected_components(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].subgraph.node_count() == 5);
    CHECK(comps[1].subgraph.node_count() == 3);

    // index maps partition 0..n-1 and compose to identity
    std::set<int> seen;
    for (const auto& c : comps) {
        for (int li = 0; li < c.subgraph.node_count(); ++li) {
            const int parent = c.to_parent[li];
            CHECK(seen.insert(parent).second);
            for (int lj : c.subgraph.neighbors(li))
                CHECK(g.has_link(parent, c.to_parent[lj]));
        }
    }
    CHECK(static_cast<int>(seen.size()) == g.node_count());
}

TEST_CASE("basic reproduction number") {
    CHECK(basic_reproduction_number(complete_graph(50), 0.1) ==
          doctest::Approx(4.9).epsilon(1e-12));
    CHECK(basic_reproduction_number(erdos_renyi(20, 0.4, 1), 0.0) == 0.0);
    CHECK(basic_reproduction_number(cycle_graph(50), 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("max degree") {
    CHECK(complete_graph(50).max_degree() == 49);
    CHECK(star_graph(50).max_degree() == 49);
    CHECK(Graph(3, std::vector<std::pair<int, int>>{}).max_degree() == 0);
}

TEST_CASE("graph construction rejects bad input") {
    CHECK_THROWS_AS(Graph(3, std::vector<std::pair<int, int>>{{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, std::vector<std::pair<int, int>>{{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(0, std::vector<std::pair<int, int>>{}), std::invalid_argument);
}

TEST_CASE("edge list round trip") {
    const auto g = erdos_renyi(20, 0.3, 99);
    std::stringstream ss;
    write_edge_list(g, ss);
    const auto h = read_edge_list(ss);
    CHECK(adjacency_equal(g, h));

    std::stringstream commented("# header\n\nN 3\n0 1\n# middle\n1 2\n");
    const auto p = read_edge_list(commented);
    CHECK(p.node_count() == 3);
    CHECK(p.link_count() == 2);

    std::stringstream bad("0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad), std::invalid_argument);
}
