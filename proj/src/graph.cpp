#include "tvcp/graph.hpp"

#include "tvcp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>

namespace tvcp {

Graph::Graph(std::size_t n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)), adjacency_(n_nodes) {
    for (const Edge& e : edges_) {
        if (e.u == e.v) throw InputError("self-loop at node " + std::to_string(e.u));
        if (e.u < 1 || e.v > static_cast<Index>(n_nodes_)) {
            throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                             ") has a node id outside 1.." + std::to_string(n_nodes_));
        }
    }
    sorted_edges_ = edges_;
    std::sort(sorted_edges_.begin(), sorted_edges_.end());
    const auto dup = std::adjacent_find(sorted_edges_.begin(), sorted_edges_.end());
    if (dup != sorted_edges_.end()) {
        throw InputError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
    }
    for (const Edge& e : edges_) {
        adjacency_[static_cast<std::size_t>(e.u - 1)].push_back(static_cast<std::size_t>(e.v - 1));
        adjacency_[static_cast<std::size_t>(e.v - 1)].push_back(static_cast<std::size_t>(e.u - 1));
    }
}

bool Graph::has_edge(const Edge& e) const noexcept {
    return std::binary_search(sorted_edges_.begin(), sorted_edges_.end(), e);
}

EdgeSet::EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

void EdgeSet::validate_for(const Graph& g) const {
    for (const Edge& e : edges_) {
        if (!g.has_edge(e)) {
            throw InputError("(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") is not an edge of the graph");
        }
    }
}

Graph grid2d(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) throw InputError("grid dimensions must be >= 1");
    std::vector<Edge> edges;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<Index>(r * cols + c + 1); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    }
    return Graph(rows * cols, std::move(edges));
}

Graph parse_edge_list(std::string_view text, std::size_t n_nodes) {
    std::vector<Edge> edges;
    Index max_id = 0;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string line(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        std::istringstream ss(line);
        Index a = 0, b = 0;
        std::string extra;
        if (!(ss >> a)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw InputError("edge list line " + std::to_string(line_no) + ": expected two node ids");
        }
        if (!(ss >> b) || (ss >> extra)) {
            throw InputError("edge list line " + std::to_string(line_no) + ": expected two node ids");
        }
        if (a < 1 || b < 1) throw InputError("edge list line " + std::to_string(line_no) + ": ids are 1-based");
        max_id = std::max({max_id, a, b});
        edges.emplace_back(a, b);
    }
    if (n_nodes == 0) n_nodes = static_cast<std::size_t>(max_id);
    return Graph(n_nodes, std::move(edges));
}

std::string edge_list_to_text(const Graph& g) {
    std::string out;
    for (const Edge& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

EdgeSet parse_edge_set_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("edge set JSON: ") + e.what());
    }
    if (!j.is_array()) throw InputError("edge set JSON must be an array of [i, j] pairs");
    std::vector<Edge> edges;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
            throw InputError("edge set JSON must be an array of [i, j] pairs");
        }
        edges.emplace_back(p[0].get<Index>(), p[1].get<Index>());
    }
    return EdgeSet(std::move(edges));
}

std::string edge_set_to_json(const EdgeSet& s) {
    nlohmann::json j = nlohmann::json::array();
    for (const Edge& e : s) j.push_back({e.u, e.v});
    return j.dump();
}

std::vector<Index> bfs_distances(const Graph& g, const std::vector<std::size_t>& sources0) {
    std::vector<Index> dist(g.n_nodes(), -1);
    std::deque<std::size_t> queue;
    for (std::size_t s : sources0) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : g.neighbours(v)) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

Index graph_diameter(const Graph& g) {
    Index best = 0;
    for (std::size_t v = 0; v < g.n_nodes(); ++v) {
        for (Index d : bfs_distances(g, {v})) best = std::max(best, d);
    }
    return best;
}

EdgeSet graph_changepoints(const Signal& theta, const Graph& g, double tol) {
    if (theta.size() != g.n_nodes()) throw InputError("signal length must equal the number of nodes");
    std::vector<Edge> out;
    for (const Edge& e : g.edges()) {
        if (std::abs(theta.at1(e.u) - theta.at1(e.v)) > tol) out.push_back(e);
    }
    return EdgeSet(std::move(out));
}

double default_graph_jump_tol(const Signal& theta) noexcept { return 1e-6 * (1.0 + theta.max_abs()); }

namespace {

std::vector<std::size_t> endpoints0(const Edge& e) {
    return {static_cast<std::size_t>(e.u - 1), static_cast<std::size_t>(e.v - 1)};
}

}  // namespace

ExtendedDistance edge_distance(const Edge& e1, const Edge& e2, const Graph& g) {
    const auto dist = bfs_distances(g, endpoints0(e1));
    const Index a = dist[static_cast<std::size_t>(e2.u - 1)];
    const Index b = dist[static_cast<std::size_t>(e2.v - 1)];
    if (a < 0 && b < 0) return ExtendedDistance::infinity();
    if (a < 0) return ExtendedDistance(static_cast<double>(b));
    if (b < 0) return ExtendedDistance(static_cast<double>(a));
    return ExtendedDistance(static_cast<double>(std::min(a, b)));
}

ExtendedDistance graph_screening_distance(const EdgeSet& a, const EdgeSet& b, const Graph& g) {
    a.validate_for(g);
    b.validate_for(g);
    if (b.empty()) return ExtendedDistance(0.0);
    if (a.empty()) return ExtendedDistance::infinity();
    ExtendedDistance worst(0.0);
    for (const Edge& e1 : b) {
        const auto dist = bfs_distances(g, endpoints0(e1));
        Index nearest = -1;
        for (const Edge& e2 : a) {
            for (Index d : {dist[static_cast<std::size_t>(e2.u - 1)], dist[static_cast<std::size_t>(e2.v - 1)]}) {
                if (d >= 0 && (nearest < 0 || d < nearest)) nearest = d;
            }
        }
        const ExtendedDistance here =
            nearest < 0 ? ExtendedDistance::infinity() : ExtendedDistance(static_cast<double>(nearest));
        worst = std::max(worst, here);
    }
    return worst;
}

double graph_min_gap(const Signal& theta0, const Graph& g) {
    if (theta0.size() != g.n_nodes()) throw InputError("signal length must equal the number of nodes");
    double best = std::numeric_limits<double>::infinity();
    for (const Edge& e : g.edges()) {
        const double gap = std::abs(theta0.at1(e.u) - theta0.at1(e.v));
        if (gap > 0.0) best = std::min(best, gap);
    }
    return best;
}

namespace {

// Longest simple path (in edges) that starts at `v` and stays on nodes whose
// value equals `level`.
Index longest_cluster_path(const Graph& g, const Signal& theta0, std::size_t v, double level,
                           std::uint32_t visited) {
    Index best = 0;
    for (std::size_t w : g.neighbours(v)) {
        if ((visited >> w) & 1u) continue;
        if (theta0[w] != level) continue;
        best = std::max(best, 1 + longest_cluster_path(g, theta0, w, level, visited | (1u << w)));
    }
    return best;
}

}  // namespace

Index graph_min_spacing_bruteforce(const Signal& theta0, const Graph& g) {
    if (theta0.size() != g.n_nodes()) throw InputError("signal length must equal the number of nodes");
    if (g.n_nodes() > 20) throw InputError("exhaustive path search is limited to graphs with <= 20 nodes");
    Index best = static_cast<Index>(g.n_nodes());
    for (const Edge& e : g.edges()) {
        const auto i = static_cast<std::size_t>(e.u - 1);
        const auto j = static_cast<std::size_t>(e.v - 1);
        if (theta0[i] == theta0[j]) continue;
        const Index li = longest_cluster_path(g, theta0, i, theta0[i], 1u << i);
        const Index lj = longest_cluster_path(g, theta0, j, theta0[j], 1u << j);
        best = std::min(best, std::min(li, lj));
    }
    return best;
}

}  // namespace tvcp
