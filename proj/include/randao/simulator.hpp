#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "randao/model.hpp"
#include "randao/policy.hpp"

namespace randao {

inline constexpr int kDefaultTailCap = 16;

// Counter-based generator (splitmix64 finalizer over a keyed counter).
// Streams are independent, so per-epoch substreams reproduce serial results
// under any execution order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    // Uniform in [0, 1), 53 significant bits.
    double next_double();

private:
    std::uint64_t key_;
    std::uint64_t counter_{0};
};

struct Candidate {
    int withheld{};  // slots withheld (i)
    Observation obs;
};

// One epoch's 2^t draws: exactly C(t, i) candidates per withhold count i.
struct SampleBatch {
    std::vector<Candidate> candidates;
};

struct MonteCarloEstimate {
    double mean_fraction{};
    double std_error{};
    std::int64_t epochs{};
    std::uint64_t seed{};
    std::vector<std::int64_t> per_state_visits;
};

// One draw from the joint distribution: tail by inverse CDF on a single
// uniform, count by ell - tail - 1 coin flips. Returns (count, tail).
std::pair<int, int> sample_joint(const ModelParams& params, CounterRng& rng);

// 2^t joint draws tagged with withhold counts; refuses t above the cap.
SampleBatch draw_batch(const ModelParams& params, int t, CounterRng& rng,
                       int tail_cap = kDefaultTailCap);

// Honest takes the unique i = 0 candidate; order policies take the
// order-maximum, first-drawn winning ties.
Candidate select_candidate(const SampleBatch& batch, const PolicySpec& spec, int ell);

// Monte Carlo run of the manipulation game. Bit-reproducible for a fixed
// (seed, params, spec, epochs); standard error via 100 batch means.
MonteCarloEstimate simulate(const ModelParams& params, const PolicySpec& spec,
                            std::int64_t epochs, std::uint64_t seed,
                            int tail_cap = kDefaultTailCap);

}  // namespace randao
