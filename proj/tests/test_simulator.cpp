#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "randao/model.hpp"
#include "randao/policy.hpp"
#include "randao/simulator.hpp"
#include "randao/solver.hpp"

using namespace randao;

TEST_CASE("counter rng") {
    CounterRng a(42, 0);
    CounterRng b(42, 0);
    CounterRng c(42, 1);
    bool streams_differ = false;
    for (int i = 0; i < 16; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        if (x != c.next_u64()) streams_differ = true;
    }
    CHECK(streams_differ);
    CounterRng d(7, 3);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("joint sampling") {
    SUBCASE("alpha zero is deterministic") {
        const ModelParams p(0.0, 8);
        CounterRng rng(1, 0);
        for (int i = 0; i < 32; ++i) {
            const auto [count, tail] = sample_joint(p, rng);
            CHECK(count == 0);
            CHECK(tail == 0);
        }
    }
    SUBCASE("empirical moments") {
        const ModelParams p(0.3, 8);
        CounterRng rng(99, 0);
        const int n = 200000;
        int zero_tail = 0;
        double slot_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto [count, tail] = sample_joint(p, rng);
            CHECK(tail >= 0);
            CHECK(tail <= 8);
            CHECK(count >= 0);
            CHECK(count <= (tail >= 7 ? 0 : 8 - tail - 1));
            if (tail == 0) ++zero_tail;
            slot_sum += count + tail;
        }
        // Pr(T = 0) = 1 - alpha, sd ~ sqrt(p(1-p)/n)
        const double p0 = static_cast<double>(zero_tail) / n;
        CHECK(std::abs(p0 - 0.7) < 3.0 * std::sqrt(0.7 * 0.3 / n));
        // E[C + T] = alpha * ell = 2.4; slots per epoch vary on [0, 8]
        CHECK(std::abs(slot_sum / n - 2.4) < 3.0 * 2.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("draw batch") {
    const ModelParams p(0.2, 8);
    const auto space = observation_space(8);
    SUBCASE("state zero gives a single unwithheld candidate") {
        CounterRng rng(5, 0);
        const auto batch = draw_batch(p, 0, rng);
        REQUIRE(batch.candidates.size() == 1);
        CHECK(batch.candidates[0].withheld == 0);
        CHECK(space.contains(batch.candidates[0].obs));
    }
    SUBCASE("withhold counts follow the binomial profile") {
        CounterRng rng(5, 1);
        const auto batch = draw_batch(p, 3, rng);
        REQUIRE(batch.candidates.size() == 8);
        int per_count[4] = {0, 0, 0, 0};
        for (const auto& cand : batch.candidates) {
            REQUIRE(cand.withheld >= 0);
            REQUIRE(cand.withheld <= 3);
            ++per_count[cand.withheld];
            CHECK(space.contains(cand.obs));
        }
        CHECK(per_count[0] == 1);
        CHECK(per_count[1] == 3);
        CHECK(per_count[2] == 3);
        CHECK(per_count[3] == 1);
    }
    SUBCASE("refuses states beyond the tail cap") {
        const ModelParams wide(0.2, 32);
        CounterRng rng(5, 2);
        CHECK_THROWS_AS(draw_batch(wide, 17, rng), std::invalid_argument);
    }
}

TEST_CASE("monte carlo simulation") {
    SUBCASE("honest matches alpha") {
        const ModelParams p(0.2, 8);
        const auto est = simulate(p, PolicySpec::honest(), 200000, 7);
        CHECK(est.epochs == 200000);
        CHECK(std::abs(est.mean_fraction - 0.2) < 3.0 * est.std_error);
    }
    SUBCASE("tailmax matches the analytic chain") {
        const ModelParams p(0.2, 8);
        const double analytic = evaluate_policy(p, PolicySpec::tailmax()).fraction;
        const auto est = simulate(p, PolicySpec::tailmax(), 400000, 11);
        CHECK(std::abs(est.mean_fraction - analytic) < 3.0 * est.std_error);
        std::int64_t visits = 0;
        for (const auto v : est.per_state_visits) visits += v;
        CHECK(visits == est.epochs);
    }
    SUBCASE("fixed seed reproduces bit for bit") {
        const ModelParams p(0.15, 8);
        const auto a = simulate(p, PolicySpec::valuemax(), 50000, 123);
        const auto b = simulate(p, PolicySpec::valuemax(), 50000, 123);
        CHECK(a.mean_fraction == b.mean_fraction);
        CHECK(a.std_error == b.std_error);
        CHECK(a.per_state_visits == b.per_state_visits);
        const auto c = simulate(p, PolicySpec::valuemax(), 50000, 124);
        CHECK(a.mean_fraction != c.mean_fraction);
    }
    SUBCASE("input validation") {
        const ModelParams p(0.2, 8);
        CHECK_THROWS_AS(simulate(p, PolicySpec::honest(), 0, 1), std::invalid_argument);
        const ModelParams wide(0.2, 32);
        CHECK_THROWS_AS(simulate(wide, PolicySpec::honest(), 1000, 1), std::invalid_argument);
        CHECK_NOTHROW(simulate(wide, PolicySpec::honest(), 1000, 1, 32));
    }
}
