#include "randao/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "randao/errors.hpp"

namespace randao {

namespace {

constexpr double kStationaryTol = 1e-10;
constexpr double kBellmanTol = 1e-9;
constexpr double kModelTol = 1e-12;
constexpr double kGainTol = 1e-13;

SolveResult solve_model(const ModelParams& params, const MarkovModel& model) {
    SolveResult result;
    result.stationary = stationary_distribution(model.transition);
    auto [gain, bias] = gain_bias(model);
    result.gain = gain;
    result.bias = std::move(bias);
    result.fraction = gain / params.ell;
    return result;
}

}  // namespace

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
    const Eigen::Index n = transition.rows();
    if (n == 0 || transition.cols() != n) {
        throw std::invalid_argument("transition matrix must be square and non-empty");
    }
    for (Eigen::Index t = 0; t < n; ++t) {
        if (std::abs(transition.row(t).sum() - 1.0) > 1e-9) {
            throw SolverError("transition matrix is not row-stochastic");
        }
    }
    // sigma (P - I) = 0 with the last balance equation swapped for sum = 1.
    Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < n) {
        throw SolverError("stationary distribution is not unique (reducible chain)");
    }
    Eigen::VectorXd sigma = lu.solve(b);
    if (!sigma.allFinite()) {
        throw SolverError("stationary solve produced non-finite entries");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sigma(i) < 0.0) {
            if (sigma(i) < -1e-9) throw SolverError("stationary distribution has negative mass");
            sigma(i) = 0.0;
        }
    }
    sigma /= sigma.sum();
    const double residual = (sigma.transpose() * transition - sigma.transpose())
                                .cwiseAbs()
                                .maxCoeff();
    if (residual > kStationaryTol) {
        throw SolverError("stationary residual above tolerance (non-ergodic input?)");
    }
    return sigma;
}

std::pair<double, Eigen::VectorXd> gain_bias(const MarkovModel& model) {
    const Eigen::Index n = model.transition.rows();
    // Unknowns: v_0 .. v_{n-1}, gain. Rows 0..n-1 are the evaluation
    // equations v_t + gain = R(t) + sum_t' P(t,t') v_t'; row n pins v_0 = 0.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    a.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) - model.transition;
    a.col(n).head(n).setOnes();
    b.head(n) = model.reward;
    a(n, 0) = 1.0;
    Eigen::VectorXd x = a.partialPivLu().solve(b);
    if (!x.allFinite()) throw SolverError("gain/bias solve produced non-finite entries");
    const double gain = x(n);
    Eigen::VectorXd bias = x.head(n);
    bias.array() -= bias(0);  // v_0 = 0 exactly
    const double residual = (bias.array() + gain - model.reward.array() -
                             (model.transition * bias).array())
                                .abs()
                                .maxCoeff();
    if (residual > kBellmanTol) throw SolverError("Bellman evaluation residual above tolerance");
    return {gain, std::move(bias)};
}

SolveResult evaluate_policy(const ModelParams& params, const PolicySpec& spec) {
    if (spec.kind == PolicyKind::Honest) {
        SolveResult result;
        result.gain = params.alpha * params.ell;
        result.fraction = params.alpha;
        result.bias = Eigen::VectorXd::Zero(params.ell + 1);
        // The honest chain redraws the tail from geom' regardless of state,
        // so the stationary distribution is the tail pmf itself.
        result.stationary = Eigen::VectorXd(params.ell + 1);
        for (int t = 0; t <= params.ell; ++t) result.stationary(t) = tail_pmf(params, t);
        result.closed_form = true;
        return result;
    }
    const PolicyOrder order = resolve_order(spec, params.ell);
    return solve_model(params, transition_and_reward(params, order));
}

OptimalPolicy policy_iteration(const ModelParams& params, const PolicySpec& initial,
                               int max_iter) {
    PolicyOrder order = resolve_order(initial, params.ell);
    MarkovModel model = transition_and_reward(params, order);
    SolveResult result = solve_model(params, model);
    for (int iter = 1; iter <= max_iter; ++iter) {
        PolicyOrder candidate = order_from_values(
            params.ell, std::span<const double>(result.bias.data(),
                                                static_cast<std::size_t>(result.bias.size())));
        MarkovModel candidate_model = transition_and_reward(params, candidate);
        if (models_close(model, candidate_model, kModelTol)) {
            result.iterations = iter;
            return {std::move(result), std::move(order)};
        }
        SolveResult candidate_result = solve_model(params, candidate_model);
        if (candidate_result.gain - result.gain <= kGainTol) {
            if (candidate_result.gain > result.gain) {
                result = std::move(candidate_result);
                order = std::move(candidate);
            }
            result.iterations = iter;
            return {std::move(result), std::move(order)};
        }
        order = std::move(candidate);
        model = std::move(candidate_model);
        result = std::move(candidate_result);
    }
    throw ConvergenceError("policy iteration did not converge within the iteration budget");
}

OptimalPolicy policy_iteration(const ModelParams& params) {
    return policy_iteration(params, PolicySpec::valuemax());
}

double improvement_over_honest(const SolveResult& result, const ModelParams& params) {
    if (params.alpha == 0.0) throw std::domain_error("improvement undefined at alpha = 0");
    return result.fraction / params.alpha - 1.0;
}

}  // namespace randao
