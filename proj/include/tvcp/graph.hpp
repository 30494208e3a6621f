#pragma once

#include "tvcp/signal.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tvcp {

/// Undirected edge with 1-based endpoints, stored as (min, max).
struct Edge {
    Index u;
    Index v;

    Edge(Index a, Index b) : u(a < b ? a : b), v(a < b ? b : a) {}
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on nodes 1..n_nodes.
class Graph {
public:
    /// Throws InputError on self-loops, duplicate edges, or ids outside 1..n_nodes.
    Graph(std::size_t n_nodes, std::vector<Edge> edges);

    std::size_t n_nodes() const noexcept { return n_nodes_; }
    std::size_t n_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    bool has_edge(const Edge& e) const noexcept;
    /// 0-based neighbour lists.
    const std::vector<std::size_t>& neighbours(std::size_t node0) const { return adjacency_[node0]; }

private:
    std::size_t n_nodes_;
    std::vector<Edge> edges_;
    std::vector<Edge> sorted_edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// Sorted set of edges of a particular graph.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(std::vector<Edge> edges);
    /// Throws InputError if some member is not an edge of `g`.
    void validate_for(const Graph& g) const;

    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    auto begin() const noexcept { return edges_.begin(); }
    auto end() const noexcept { return edges_.end(); }

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    std::vector<Edge> edges_;
};

/// rows x cols 4-neighbour lattice, nodes numbered row-major from 1.
Graph grid2d(std::size_t rows, std::size_t cols);

/// One "i j" pair per line, 1-based. n_nodes = 0 means "largest id seen".
Graph parse_edge_list(std::string_view text, std::size_t n_nodes = 0);
std::string edge_list_to_text(const Graph& g);

/// Edge sets as JSON arrays of [i, j] pairs.
EdgeSet parse_edge_set_json(std::string_view text);
std::string edge_set_to_json(const EdgeSet& s);

/// Hop distances from the given 0-based sources; unreachable nodes get -1.
std::vector<Index> bfs_distances(const Graph& g, const std::vector<std::size_t>& sources0);

/// Longest shortest path (in edges) over connected pairs.
Index graph_diameter(const Graph& g);

/// {(i, j) in E : |theta_i - theta_j| > tol}.
EdgeSet graph_changepoints(const Signal& theta, const Graph& g, double tol = 0.0);

/// Default edge-jump tolerance for iterative graph solver output:
/// 1e-6 * (1 + max|theta|).
double default_graph_jump_tol(const Signal& theta) noexcept;

/// Shortest path length between any endpoint of e1 and any endpoint of e2.
ExtendedDistance edge_distance(const Edge& e1, const Edge& e2, const Graph& g);

/// d_G(A|B) = max_{e1 in B} min_{e2 in A} edge_distance(e1, e2).
/// B empty gives 0; A empty with B nonempty gives +infinity.
ExtendedDistance graph_screening_distance(const EdgeSet& a, const EdgeSet& b, const Graph& g);

/// H_n over boundary edges; +infinity when theta0 is constant on every edge.
double graph_min_gap(const Signal& theta0, const Graph& g);

/// W_n over boundary edges: for boundary edge (i, j), the largest l such that
/// simple paths of l edges start at i inside i's constant cluster and at j
/// inside j's cluster. Exhaustive search; needs n_nodes <= 20. Returns
/// n_nodes when there are no boundary edges.
Index graph_min_spacing_bruteforce(const Signal& theta0, const Graph& g);

}  // namespace tvcp
