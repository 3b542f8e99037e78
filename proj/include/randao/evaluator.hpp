#pragma once

#include <Eigen/Dense>
#include <vector>

#include "randao/model.hpp"
#include "randao/policy.hpp"

namespace randao {

// Induced Markov reward process of a total-order policy: transition[t][t'] is
// the probability of moving from tail t to tail t', reward[t] the expected
// per-epoch reward (in slots) when leaving state t.
struct MarkovModel {
    Eigen::MatrixXd transition;
    Eigen::VectorXd reward;
};

// Pr(max of 2^t iid tails <= tprime): (1 - alpha^(tprime+1))^(2^t), 1 at the
// boundary tprime = ell.
double maxtail_cdf(const ModelParams& params, int t, int tprime);

// Transition row of the tail-max chain, recovered as CDF differences.
Eigen::VectorXd tailmax_transition_row(const ModelParams& params, int t);

// CDF of the order-maximum observation drawn from state t, evaluated at obs.
double maxpair_cdf(const ModelParams& params, const PolicyOrder& order, int t, Observation obs);

// Same CDF at every observation, aligned with order.ranking(). One pass over
// the order with t + 1 prefix accumulators (one per withhold count).
std::vector<double> maxpair_cdf_all(const ModelParams& params, const PolicyOrder& order, int t);

// Full induced model: point masses from CDF differences, per-state rows.
MarkovModel transition_and_reward(const ModelParams& params, const PolicyOrder& order);

// base^exponent by exponent-by-squaring, with the ell > 32 stability clamp:
// bases within 1e-14 of 1 evaluate directly to 1. Bases above 1 by rounding
// are clipped; above 1 + 1e-12 is a numerical failure.
double clamped_power(double base, uint128 exponent, const ModelParams& params);

bool models_close(const MarkovModel& a, const MarkovModel& b, double tol);

}  // namespace randao
