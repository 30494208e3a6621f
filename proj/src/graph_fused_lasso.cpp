#include "tvcp/graph_fused_lasso.hpp"

#include "tvcp/errors.hpp"

#include <cmath>

namespace tvcp {

SparseOperator incidence_operator(const Graph& g) {
    SparseOperator d(static_cast<Eigen::Index>(g.n_edges()), static_cast<Eigen::Index>(g.n_nodes()));
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * g.n_edges());
    Eigen::Index row = 0;
    for (const Edge& e : g.edges()) {
        trip.emplace_back(row, static_cast<Eigen::Index>(e.u - 1), 1.0);
        trip.emplace_back(row, static_cast<Eigen::Index>(e.v - 1), -1.0);
        ++row;
    }
    d.setFromTriplets(trip.begin(), trip.end());
    return d;
}

double graph_fused_lasso_objective(const Signal& y, const Signal& theta, const Graph& g, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) loss += 0.5 * (y[i] - theta[i]) * (y[i] - theta[i]);
    double pen = 0.0;
    for (const Edge& e : g.edges()) pen += std::abs(theta.at1(e.u) - theta.at1(e.v));
    return loss + lambda * pen;
}

FusedLassoFit graph_fused_lasso(const Signal& y, const Graph& g, double lambda, double tol, int max_iter) {
    if (y.size() != g.n_nodes()) throw InputError("signal length must equal the number of nodes");
    AdmmOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    const AdmmResult res = solve_generalized_lasso(y.values(), incidence_operator(g), lambda, opt);
    Signal theta(res.theta);
    const double obj = graph_fused_lasso_objective(y, theta, g, lambda);
    return FusedLassoFit{std::move(theta), lambda, obj};
}

}  // namespace tvcp
