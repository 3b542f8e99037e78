#pragma once

#include <Eigen/Dense>
#include <utility>

#include "randao/model.hpp"

namespace randao {

// Every appendix quantity in one record, as emitted by the CLI.
struct BoundReport {
    double q{};                       // (2a)^l + (1 - a^l)(4a)^l
    bool stable{};                    // q < 1
    double takeover{};                // (2a)^l, clamped to 1
    double expected_height_bound{};   // 1 + 1/(1 - q); NaN when unstable
    Eigen::MatrixXd reset_time;       // x[(t, t')]; empty when unstable
    double reset_time_max{};          // X; NaN when unstable
    double error_bound{};             // l * X * (2a)^l; NaN when unstable
};

// Union bound on seeding an epoch with no honest proposer: min((2a)^l, 1).
double takeover_probability(const ModelParams& params);

// Tree growth rate q and whether the stability condition q < 1 holds.
std::pair<double, bool> stability_q(const ModelParams& params);

// Pr(tree height >= lambda) <= q^(lambda - 2), clamped to [0, 1].
double tree_height_tail_bound(const ModelParams& params, int lambda);

// E[tree height] <= 1 + 1/(1 - q); stability error when q >= 1.
double expected_height_bound(const ModelParams& params);

// Dense solve of the reset-time system over all (t, t') pairs. Returns the
// solution matrix and its maximum X.
std::pair<Eigen::MatrixXd, double> reset_time_bound(const ModelParams& params);

// Model-simplification error bound l * X * (2a)^l.
double reward_gap_bound(const ModelParams& params);

BoundReport bound_report(const ModelParams& params);

}  // namespace randao
