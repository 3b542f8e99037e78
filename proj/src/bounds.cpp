#include "randao/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "randao/errors.hpp"
#include "randao/evaluator.hpp"

namespace randao {

double takeover_probability(const ModelParams& params) {
    return std::min(std::pow(2.0 * params.alpha, params.ell), 1.0);
}

std::pair<double, bool> stability_q(const ModelParams& params) {
    const double q = std::pow(2.0 * params.alpha, params.ell) +
                     (1.0 - std::pow(params.alpha, params.ell)) *
                         std::pow(4.0 * params.alpha, params.ell);
    return {q, q < 1.0};
}

double tree_height_tail_bound(const ModelParams& params, int lambda) {
    if (lambda < 2) throw std::domain_error("tree height bound requires lambda >= 2");
    const double q = stability_q(params).first;
    const double bound = std::pow(q, lambda - 2);
    return std::min(std::max(bound, 0.0), 1.0);
}

double expected_height_bound(const ModelParams& params) {
    const auto [q, stable] = stability_q(params);
    if (!stable) throw StabilityError("tree growth rate q >= 1; expected height diverges");
    return 1.0 + 1.0 / (1.0 - q);
}

std::pair<Eigen::MatrixXd, double> reset_time_bound(const ModelParams& params) {
    const auto [q, stable] = stability_q(params);
    if (!stable) throw StabilityError("tree growth rate q >= 1; reset-time system diverges");
    const int ell = params.ell;
    const int n = ell + 1;
    const int dim = n * n;
    const auto idx = [n](int t, int tp) { return t * n + tp; };

    Eigen::MatrixXd rows(n, n);
    for (int t = 0; t < n; ++t) rows.row(t) = tailmax_transition_row(params, t).transpose();

    // One equation per state (t, t'), written exactly as stated:
    //   x[(t, 0)]   = 0
    //   x[(t, ell)] = 1 + 1/(1 - q) + x[(ell-1, ell-1)]
    //   x[(t, t')]  = 1 + sum_t'' Pr(t -> t'') x[(t', t'')]   for 0 < t' < ell
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
    for (int t = 0; t < n; ++t) {
        for (int tp = 0; tp < n; ++tp) {
            const int r = idx(t, tp);
            a(r, r) += 1.0;
            if (tp == 0) continue;
            if (tp == ell) {
                a(r, idx(ell - 1, ell - 1)) -= 1.0;
                b(r) = 1.0 + 1.0 / (1.0 - q);
                continue;
            }
            for (int tpp = 0; tpp < n; ++tpp) {
                a(r, idx(tp, tpp)) -= rows(t, tpp);
            }
            b(r) = 1.0;
        }
    }
    Eigen::VectorXd x = a.partialPivLu().solve(b);
    if (!x.allFinite()) throw SolverError("reset-time solve produced non-finite entries");
    const double residual = (a * x - b).cwiseAbs().maxCoeff();
    if (residual > 1e-8) throw SolverError("reset-time residual above tolerance");

    Eigen::MatrixXd solution(n, n);
    for (int t = 0; t < n; ++t) {
        for (int tp = 0; tp < n; ++tp) solution(t, tp) = x(idx(t, tp));
    }
    return {std::move(solution), solution.maxCoeff()};
}

double reward_gap_bound(const ModelParams& params) {
    const double x_max = reset_time_bound(params).second;
    return params.ell * x_max * std::pow(2.0 * params.alpha, params.ell);
}

BoundReport bound_report(const ModelParams& params) {
    BoundReport report;
    const auto [q, stable] = stability_q(params);
    report.q = q;
    report.stable = stable;
    report.takeover = takeover_probability(params);
    if (stable) {
        report.expected_height_bound = expected_height_bound(params);
        auto [matrix, x_max] = reset_time_bound(params);
        report.reset_time = std::move(matrix);
        report.reset_time_max = x_max;
        report.error_bound = params.ell * x_max * std::pow(2.0 * params.alpha, params.ell);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        report.expected_height_bound = nan;
        report.reset_time_max = nan;
        report.error_bound = nan;
    }
    return report;
}

}  // namespace randao
