#include <doctest.h>

#include <cmath>
#include <vector>

#include "randao/errors.hpp"
#include "randao/evaluator.hpp"
#include "randao/model.hpp"
#include "randao/policy.hpp"
#include "support/tailmax_closed_form.hpp"

using namespace randao;

TEST_CASE("maxtail cdf") {
    CHECK(maxtail_cdf(ModelParams(0.3, 32), 4, 32) == 1.0);
    CHECK(maxtail_cdf(ModelParams(0.0, 32), 0, 0) == 1.0);
    // Two iid draws both land a zero tail: (1 - 0.5)^2.
    CHECK(maxtail_cdf(ModelParams(0.5, 4), 1, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("tailmax transition rows") {
    SUBCASE("single draw reduces to the tail pmf") {
        const ModelParams p(0.3, 16);
        const auto row = tailmax_transition_row(p, 0);
        for (int t = 0; t <= 16; ++t) {
            CHECK(row(t) == doctest::Approx(tail_pmf(p, t)).epsilon(1e-12));
        }
    }
    SUBCASE("two-draw enumeration") {
        CHECK(tailmax_transition_row(ModelParams(0.5, 4), 1)(0) ==
              doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("rows sum to one") {
        for (double alpha : {0.1, 0.3}) {
            const ModelParams p(alpha, 32);
            for (int t = 0; t <= 32; ++t) {
                CHECK(tailmax_transition_row(p, t).sum() ==
                      doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("clamped power") {
    const ModelParams p32(0.2, 32);
    const ModelParams p64(0.2, 64);
    CHECK(clamped_power(0.5, 3, p32) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(clamped_power(0.0, 0, p32) == 1.0);
    CHECK(clamped_power(0.0, 5, p32) == 0.0);
    const BinomialTable table(64);
    CHECK(clamped_power(1.0 - 1e-15, table.choose(64, 32), p64) == 1.0);
    // No clamp at ell = 32: the same base decays under a huge exponent.
    CHECK(clamped_power(1.0 - 1e-9, 601080390, p32) ==
          doctest::Approx(std::exp(-0.601080390)).epsilon(1e-6));
    CHECK(clamped_power(1.0 + 1e-13, 2, p32) == 1.0);
    CHECK_THROWS_AS(clamped_power(1.1, 2, p32), NumericalError);
}

TEST_CASE("maxpair cdf") {
    SUBCASE("top of the order carries all mass") {
        const ModelParams p(0.3, 8);
        for (const auto& order : {tailmax_order(8), valuemax_order(8)}) {
            for (int t : {0, 3, 8}) {
                CHECK(maxpair_cdf(p, order, t, order.ranking().back()) ==
                      doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
    SUBCASE("single sample is a plain prefix sum") {
        const ModelParams p(0.25, 8);
        const auto order = valuemax_order(8);
        const auto joint = joint_pmf(p);
        double prefix = 0.0;
        for (std::size_t k = 0; k < order.ranking().size(); k += 7) {
            // recompute the prefix up to k from scratch
            prefix = 0.0;
            for (std::size_t j = 0; j <= k; ++j) {
                const auto obs = order.ranking()[j];
                prefix += joint.prob(obs.tail, obs.omega);
            }
            CHECK(maxpair_cdf(p, order, 0, order.ranking()[k]) ==
                  doctest::Approx(prefix).epsilon(1e-12));
        }
    }
    SUBCASE("monotone along the order") {
        const ModelParams p(0.3, 8);
        std::vector<double> values = {0.0, 0.7, 1.1, 1.2, 1.9, 2.0, 2.4, 2.5, 2.6};
        for (const auto& order :
             {tailmax_order(8), valuemax_order(8), order_from_values(8, values)}) {
            for (int t : {0, 2, 5, 8}) {
                const auto cdf = maxpair_cdf_all(p, order, t);
                for (std::size_t k = 1; k < cdf.size(); ++k) {
                    CHECK(cdf[k] >= cdf[k - 1] - 1e-12);
                }
            }
        }
    }
    SUBCASE("matches the tail-max closed form") {
        const ModelParams p(0.2, 16);
        const auto order = tailmax_order(16);
        for (int t = 0; t <= 16; ++t) {
            const auto cdf = maxpair_cdf_all(p, order, t);
            for (std::size_t k = 0; k < cdf.size(); ++k) {
                const auto obs = order.ranking()[k];
                CHECK(cdf[k] ==
                      doctest::Approx(testing::tailmax_maxpair_cdf(p, t, obs)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("transition and reward") {
    SUBCASE("tailmax rows agree with the dedicated formula") {
        // Exponents of 2^t amplify input rounding by a factor of roughly 2^t,
        // so the achievable agreement between two independent evaluations
        // shrinks with ell: ~1e-11 at ell = 8, ~1e-6 at ell = 32.
        const ModelParams small(0.2, 8);
        const auto model8 = transition_and_reward(small, tailmax_order(8));
        for (int t = 0; t <= 8; ++t) {
            const auto row = tailmax_transition_row(small, t);
            for (int tp = 0; tp <= 8; ++tp) {
                CHECK(std::abs(model8.transition(t, tp) - row(tp)) < 1e-11);
            }
        }
        const ModelParams p(0.2, 32);
        const auto model = transition_and_reward(p, tailmax_order(32));
        for (int t = 0; t <= 32; ++t) {
            const auto row = tailmax_transition_row(p, t);
            for (int tp = 0; tp <= 32; ++tp) {
                CHECK(std::abs(model.transition(t, tp) - row(tp)) < 1e-5);
            }
        }
    }
    SUBCASE("state zero reward is the honest expectation") {
        for (double alpha : {0.1, 0.3}) {
            const ModelParams p(alpha, 16);
            for (const auto& order : {tailmax_order(16), valuemax_order(16)}) {
                const auto model = transition_and_reward(p, order);
                CHECK(model.reward(0) == doctest::Approx(alpha * 16).epsilon(1e-10));
            }
        }
    }
    SUBCASE("row sums and reward range") {
        const ModelParams p(0.3, 16);
        const auto model = transition_and_reward(p, valuemax_order(16));
        for (int t = 0; t <= 16; ++t) {
            CHECK(model.transition.row(t).sum() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(model.transition.row(t).minCoeff() >= 0.0);
            CHECK(model.reward(t) >= -static_cast<double>(t) - 1e-12);
            CHECK(model.reward(t) <= 16.0 + 1e-12);
        }
    }
}
