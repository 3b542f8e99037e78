#pragma once

#include <Eigen/Dense>
#include <utility>

#include "randao/evaluator.hpp"
#include "randao/model.hpp"
#include "randao/policy.hpp"

namespace randao {

struct SolveResult {
    double gain{};      // expected slots won per epoch
    double fraction{};  // gain / ell, the fraction of all slots
    Eigen::VectorXd bias;
    Eigen::VectorXd stationary;
    int iterations{0};  // 0 for pure evaluation
    // Honest is evaluated in closed form; bias is degenerate (all zeros).
    bool closed_form{false};
};

// Unique stationary distribution of a row-stochastic ergodic matrix. One
// balance equation is replaced by the normalization and the dense system is
// solved directly; residual above 1e-10 is a solver error.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

// Gain and bias of a Markov reward process, from the augmented linear system
// (gain plus ell + 1 bias unknowns, pinned by bias[0] = 0). The Bellman
// evaluation residual is checked to 1e-9.
std::pair<double, Eigen::VectorXd> gain_bias(const MarkovModel& model);

SolveResult evaluate_policy(const ModelParams& params, const PolicySpec& spec);

struct OptimalPolicy {
    SolveResult result;
    PolicyOrder order;
};

// Howard policy iteration over total orders. Convergence is detected on the
// induced (transition, reward) model, not on raw rankings, so gain-equivalent
// tie permutations cannot cycle.
OptimalPolicy policy_iteration(const ModelParams& params, const PolicySpec& initial,
                               int max_iter = 100);

// Default start is Value-max, empirically the closest named policy to optimal.
OptimalPolicy policy_iteration(const ModelParams& params);

// fraction / alpha - 1; domain error at alpha = 0.
double improvement_over_honest(const SolveResult& result, const ModelParams& params);

}  // namespace randao
