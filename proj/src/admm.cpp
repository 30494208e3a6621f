#include "tvcp/admm.hpp"

#include "tvcp/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace tvcp {

namespace {

using Vec = Eigen::VectorXd;

double primal_objective(const Vec& y, const Vec& theta, const SparseOperator& d, double lambda) {
    return 0.5 * (y - theta).squaredNorm() + lambda * (d * theta).lpNorm<1>();
}

class Factorization {
public:
    explicit Factorization(const SparseOperator& d) : dtd_(Eigen::SparseMatrix<double>(d.transpose()) * d) {
        identity_.resize(d.cols(), d.cols());
        identity_.setIdentity();
        solver_.analyzePattern(identity_ + dtd_);
    }

    void factorize(double rho) {
        solver_.factorize(identity_ + rho * dtd_);
        if (solver_.info() != Eigen::Success) throw std::runtime_error("ADMM system factorization failed");
    }

    Vec solve(const Vec& rhs) const { return solver_.solve(rhs); }

private:
    Eigen::SparseMatrix<double> dtd_;
    Eigen::SparseMatrix<double> identity_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

}  // namespace

double l1_of_operator(const SparseOperator& d, std::span<const double> theta) {
    const Eigen::Map<const Vec> t(theta.data(), static_cast<Eigen::Index>(theta.size()));
    return (d * t).lpNorm<1>();
}

AdmmResult solve_generalized_lasso(std::span<const double> y_in, const SparseOperator& d, double lambda,
                                   const AdmmOptions& opt) {
    const auto n = static_cast<Eigen::Index>(y_in.size());
    if (d.cols() != n) throw InputError("operator width must equal the signal length");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be finite and >= 0");
    if (!(opt.relaxation > 0.0 && opt.relaxation < 2.0)) throw InputError("relaxation must lie in (0, 2)");
    if (opt.max_iter < 1) throw InputError("max_iter must be >= 1");

    const Vec y = Eigen::Map<const Vec>(y_in.data(), n);
    if (lambda == 0.0 || d.rows() == 0) {
        AdmmResult res{std::vector<double>(y_in.begin(), y_in.end()), 0.0, 0.0, 0};
        res.objective = primal_objective(y, y, d, lambda);
        return res;
    }

    // I + rho D^T D loses its identity part to rounding once rho is near 1/eps,
    // so rho stays inside a band where the factorization is reliable.
    constexpr double rho_min = 1e-8, rho_max = 1e8;
    double rho = std::clamp(opt.rho > 0.0 ? opt.rho : lambda, rho_min, rho_max);
    Factorization fact(d);
    fact.factorize(rho);

    const SparseOperator dt = d.transpose();
    Vec theta = y;
    Vec z = d * theta;
    Vec u = Vec::Zero(d.rows());
    const double alpha = opt.relaxation;
    const int check_every = std::max(1, opt.check_every);

    double gap = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        theta = fact.solve(y + rho * (dt * (z - u)));
        const Vec dtheta = d * theta;
        const Vec relaxed = alpha * dtheta + (1.0 - alpha) * z;
        const Vec z_old = z;
        const Vec shifted = relaxed + u;
        const double thr = lambda / rho;
        z = shifted.unaryExpr([thr](double v) {
            return v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
        });
        u += relaxed - z;

        if (iter % check_every != 0 && iter != opt.max_iter) continue;

        // Duality gap from the clipped multiplier.
        const Vec nu = (rho * u).cwiseMax(-lambda).cwiseMin(lambda);
        const Vec theta_dual = y - dt * nu;
        const double dual = 0.5 * y.squaredNorm() - 0.5 * theta_dual.squaredNorm();
        const double p_admm = primal_objective(y, theta, d, lambda);
        const double p_dual = primal_objective(y, theta_dual, d, lambda);
        const bool dual_point_better = p_dual < p_admm;
        const double best = dual_point_better ? p_dual : p_admm;
        gap = std::max(0.0, best - dual);
        if (gap <= opt.tol * (1.0 + std::abs(best))) {
            const Vec& winner = dual_point_better ? theta_dual : theta;
            return AdmmResult{std::vector<double>(winner.data(), winner.data() + n), best, gap, iter};
        }

        const double r_norm = (dtheta - z).norm();
        const double s_norm = rho * (dt * (z - z_old)).norm();
        if (r_norm > 10.0 * s_norm && rho * 2.0 <= rho_max) {
            rho *= 2.0;
            u /= 2.0;
            fact.factorize(rho);
        } else if (s_norm > 10.0 * r_norm && rho / 2.0 >= rho_min) {
            rho /= 2.0;
            u *= 2.0;
            fact.factorize(rho);
        }
    }
    throw ConvergenceError("ADMM did not reach the requested duality gap (final gap " + std::to_string(gap) + ")",
                           gap, opt.max_iter);
}

}  // namespace tvcp
