#include "randao/model.hpp"

#include <cmath>
#include <stdexcept>

#include "randao/errors.hpp"

namespace randao {

double u128_to_double(uint128 v) {
    // Split into two 64-bit halves; double covers the magnitude (< 2^128).
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    return static_cast<double>(hi) * 18446744073709551616.0 + static_cast<double>(lo);
}

ModelParams::ModelParams(double alpha_in, int ell_in) : alpha(alpha_in), ell(ell_in) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in [0, 1)");
    }
    if (ell < 1) {
        throw std::domain_error("ell must be >= 1");
    }
}

BinomialTable::BinomialTable(int max_n) : max_n_(max_n) {
    if (max_n < 0) throw std::domain_error("binomial table size must be >= 0");
    rows_.resize(static_cast<std::size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n) {
        auto& row = rows_[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 1);
        for (int k = 1; k < n; ++k) {
            const uint128 a = rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k) - 1];
            const uint128 b = rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k)];
            const uint128 sum = a + b;
            if (sum < a) {
                throw NumericalError("binomial coefficient overflows 128 bits");
            }
            row[static_cast<std::size_t>(k)] = sum;
        }
    }
}

uint128 BinomialTable::choose(int n, int k) const {
    if (n < 0 || n > max_n_) throw std::domain_error("binomial: n out of range");
    if (k < 0 || k > n) return 0;
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

double BinomialTable::choose_d(int n, int k) const { return u128_to_double(choose(n, k)); }

ObservationSpace::ObservationSpace(int ell) : ell_(ell) {
    if (ell < 1) throw std::domain_error("ell must be >= 1");
    for (int t = 0; t <= ell; ++t) {
        const int omega_max = (t == ell) ? 0 : ell - t - 1;
        for (int omega = -ell; omega <= omega_max; ++omega) {
            items_.push_back(Observation{omega, t});
        }
    }
}

bool ObservationSpace::contains(Observation obs) const {
    if (obs.tail < 0 || obs.tail > ell_) return false;
    if (obs.omega < -ell_) return false;
    const int omega_max = (obs.tail == ell_) ? 0 : ell_ - obs.tail - 1;
    return obs.omega <= omega_max;
}

int ObservationSpace::index_of(Observation obs) const {
    if (!contains(obs)) throw std::domain_error("observation not in the space");
    // Tail block t (t < ell) holds 2*ell - t entries.
    const int t = obs.tail;
    const int offset = t * 2 * ell_ - t * (t - 1) / 2;
    return offset + (obs.omega + ell_);
}

double tail_pmf(const ModelParams& params, int t) {
    if (t < 0 || t > params.ell) throw std::domain_error("tail out of [0, ell]");
    if (t == params.ell) return std::pow(params.alpha, params.ell);
    return (1.0 - params.alpha) * std::pow(params.alpha, t);
}

double count_pmf(const ModelParams& params, int t, int c) {
    if (t < 0 || t > params.ell) throw std::domain_error("tail out of [0, ell]");
    if (c < 0) throw std::domain_error("count must be >= 0");
    if (t >= params.ell - 1) {
        return c == 0 ? 1.0 : 0.0;
    }
    const int n = params.ell - t - 1;
    if (c > n) return 0.0;
    const BinomialTable binomial(n);
    return binomial.choose_d(n, c) * std::pow(params.alpha, c) *
           std::pow(1.0 - params.alpha, n - c);
}

JointPmf::JointPmf(const ModelParams& params, const BinomialTable& binomial) : ell_(params.ell) {
    table_.assign(static_cast<std::size_t>(ell_) + 1,
                  std::vector<double>(static_cast<std::size_t>(ell_) + 1, 0.0));
    double total = 0.0;
    for (int t = 0; t <= ell_; ++t) {
        const double pt = tail_pmf(params, t);
        if (t >= ell_ - 1) {
            table_[static_cast<std::size_t>(t)][0] = pt;
            total += pt;
            continue;
        }
        const int n = ell_ - t - 1;
        for (int c = 0; c <= n; ++c) {
            const double pc = binomial.choose_d(n, c) * std::pow(params.alpha, c) *
                              std::pow(1.0 - params.alpha, n - c);
            table_[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)] = pt * pc;
            total += pt * pc;
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw NumericalError("joint pmf mass drifted from 1");
    }
}

double JointPmf::prob(int tail, int count) const {
    if (tail < 0 || tail > ell_ || count < 0 || count > ell_) return 0.0;
    return table_[static_cast<std::size_t>(tail)][static_cast<std::size_t>(count)];
}

JointPmf joint_pmf(const ModelParams& params) {
    const BinomialTable binomial(params.ell);
    return JointPmf(params, binomial);
}

ObservationSpace observation_space(int ell) { return ObservationSpace(ell); }

double honest_fraction(const ModelParams& params) { return params.alpha; }

}  // namespace randao
