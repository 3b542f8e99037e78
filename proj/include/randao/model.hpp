#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace randao {

// 128-bit unsigned integers hold exact binomial coefficients up to C(128, 64).
using uint128 = unsigned __int128;

double u128_to_double(uint128 v);

// Adversarial stake fraction and epoch length. Every computation in this
// library is parameterized by one of these.
struct ModelParams {
    double alpha;
    int ell;

    ModelParams(double alpha, int ell);
};

// A candidate next-epoch outcome: omega is the net non-tail reward
// (count minus withheld slots), tail is the next epoch's tail length.
struct Observation {
    int omega{};
    int tail{};

    friend bool operator==(const Observation&, const Observation&) = default;
};

// Exact Pascal-triangle table of C(n, k) for 0 <= k <= n <= max_n.
// Entries are exact integers; convert to double only at use sites.
class BinomialTable {
public:
    explicit BinomialTable(int max_n);

    uint128 choose(int n, int k) const;
    double choose_d(int n, int k) const;
    int max_n() const { return max_n_; }

private:
    int max_n_;
    std::vector<std::vector<uint128>> rows_;
};

// The observation set, enumerated in canonical order: ascending tail, then
// ascending omega. The canonical order is fixed so serialized policies are
// reproducible byte for byte.
class ObservationSpace {
public:
    explicit ObservationSpace(int ell);

    int ell() const { return ell_; }
    const std::vector<Observation>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

    bool contains(Observation obs) const;
    // Position of obs in the canonical enumeration; throws std::domain_error
    // if obs is not a member.
    int index_of(Observation obs) const;

private:
    int ell_;
    std::vector<Observation> items_;
};

// Joint distribution of (tail, count): table[(t, c)] = tail_pmf(t) * count_pmf(t, c).
class JointPmf {
public:
    JointPmf(const ModelParams& params, const BinomialTable& binomial);

    int ell() const { return ell_; }
    // Zero for (t, c) outside the support.
    double prob(int tail, int count) const;

private:
    int ell_;
    std::vector<std::vector<double>> table_;
};

// Pr(T = t) for the truncated geometric tail distribution:
// (1 - alpha) * alpha^t for t < ell, alpha^ell at the boundary t = ell.
double tail_pmf(const ModelParams& params, int t);

// Pr(C = c) for the conditional count distribution Binom'(ell - t - 1, alpha),
// including the point mass at c = 0 when t is ell - 1 or ell.
double count_pmf(const ModelParams& params, int t, int c);

JointPmf joint_pmf(const ModelParams& params);

ObservationSpace observation_space(int ell);

// Long-run slot fraction of the honest strategy. Equals alpha, via the
// identity E[C + T] = alpha * ell over the joint distribution.
double honest_fraction(const ModelParams& params);

}  // namespace randao
