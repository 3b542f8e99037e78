#include "randao/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace randao {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + 0x9E3779B97F4A7C15ull) ^
           mix64(stream * 0xA24BAED4963EE407ull + 0x9FB21C651E98DF25ull)) {}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
}

double CounterRng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::pair<int, int> sample_joint(const ModelParams& params, CounterRng& rng) {
    const double u = rng.next_double();
    int tail = params.ell;
    for (int t = 0; t < params.ell; ++t) {
        if (u < 1.0 - std::pow(params.alpha, t + 1)) {
            tail = t;
            break;
        }
    }
    int count = 0;
    const int flips = params.ell - tail - 1;
    for (int k = 0; k < flips; ++k) {
        if (rng.next_double() < params.alpha) ++count;
    }
    return {count, tail};
}

SampleBatch draw_batch(const ModelParams& params, int t, CounterRng& rng, int tail_cap) {
    if (t < 0) throw std::domain_error("tail must be >= 0");
    if (t > tail_cap) {
        throw std::invalid_argument("tail exceeds the simulation cap (2^t batch refused)");
    }
    const BinomialTable binomial(t);
    SampleBatch batch;
    batch.candidates.reserve(std::size_t{1} << t);
    for (int i = 0; i <= t; ++i) {
        const auto copies = static_cast<std::uint64_t>(binomial.choose(t, i));
        for (std::uint64_t j = 0; j < copies; ++j) {
            const auto [count, tail] = sample_joint(params, rng);
            batch.candidates.push_back(Candidate{i, Observation{count - i, tail}});
        }
    }
    return batch;
}

Candidate select_candidate(const SampleBatch& batch, const PolicySpec& spec, int ell) {
    if (batch.candidates.empty()) throw std::invalid_argument("empty batch");
    if (spec.kind == PolicyKind::Honest) {
        // Candidates are drawn in ascending i, so the unique i = 0 draw leads.
        return batch.candidates.front();
    }
    const PolicyOrder order = resolve_order(spec, ell);
    const Candidate* best = &batch.candidates.front();
    int best_rank = order.rank_of(best->obs);
    for (const auto& cand : batch.candidates) {
        const int rank = order.rank_of(cand.obs);
        if (rank > best_rank) {  // strict: first-drawn wins ties
            best = &cand;
            best_rank = rank;
        }
    }
    return *best;
}

MonteCarloEstimate simulate(const ModelParams& params, const PolicySpec& spec,
                            std::int64_t epochs, std::uint64_t seed, int tail_cap) {
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (params.ell > tail_cap) {
        throw std::invalid_argument(
            "epoch length exceeds the simulation tail cap; raise the cap to proceed");
    }
    // Resolve order-based specs once so every epoch shares one ranking.
    PolicySpec resolved = spec;
    if (spec.kind != PolicyKind::Honest) {
        resolved = PolicySpec::from_order(resolve_order(spec, params.ell));
    }

    CounterRng init_rng(seed, 0);
    int tail = sample_joint(params, init_rng).second;

    const std::int64_t num_batches = epochs < 100 ? epochs : 100;
    std::vector<double> batch_reward(static_cast<std::size_t>(num_batches), 0.0);
    std::vector<double> batch_rounds(static_cast<std::size_t>(num_batches), 0.0);
    std::vector<std::int64_t> visits(static_cast<std::size_t>(params.ell) + 1, 0);

    double total_reward = 0.0;
    double total_rounds = 0.0;
    for (std::int64_t e = 0; e < epochs; ++e) {
        CounterRng rng(seed, static_cast<std::uint64_t>(e) + 1);
        ++visits[static_cast<std::size_t>(tail)];
        const SampleBatch batch = draw_batch(params, tail, rng, tail_cap);
        const Candidate pick = select_candidate(batch, resolved, params.ell);
        const double reward = pick.obs.omega + pick.obs.tail;
        total_reward += reward;
        total_rounds += params.ell;
        const auto b = static_cast<std::size_t>(e * num_batches / epochs);
        batch_reward[b] += reward;
        batch_rounds[b] += params.ell;
        tail = pick.obs.tail;
    }

    MonteCarloEstimate estimate;
    estimate.mean_fraction = total_reward / total_rounds;
    estimate.epochs = epochs;
    estimate.seed = seed;
    estimate.per_state_visits = std::move(visits);
    if (num_batches >= 2) {
        double mean = 0.0;
        for (std::size_t b = 0; b < batch_reward.size(); ++b) {
            mean += batch_reward[b] / batch_rounds[b];
        }
        mean /= static_cast<double>(num_batches);
        double var = 0.0;
        for (std::size_t b = 0; b < batch_reward.size(); ++b) {
            const double d = batch_reward[b] / batch_rounds[b] - mean;
            var += d * d;
        }
        var /= static_cast<double>(num_batches - 1);
        estimate.std_error = std::sqrt(var / static_cast<double>(num_batches));
    }
    return estimate;
}

}  // namespace randao
