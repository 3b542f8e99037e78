#include "randao/evaluator.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "randao/errors.hpp"

namespace randao {

namespace {

constexpr double kClampEps = 1e-14;
constexpr double kMassTol = 1e-12;
constexpr double kRowTol = 1e-9;

// CDF of the order-maximum from state t, evaluated at every rank. The
// exponents C(t, i) reach ~6e8 at t = 32, so a direct prefix-sum base would
// have its ~1e-13 summation rounding amplified into ~1e-6 of CDF error.
// Working with complementary suffix sums s in log space via log1p(-s) keeps
// the error proportional to the log contribution instead: the CDF comes out
// with ~1e-12 relative accuracy and is exactly 1 at the order maximum.
std::vector<double> cdf_pass(const ModelParams& params, const PolicyOrder& order, int t,
                             const JointPmf& joint, const BinomialTable& binomial) {
    const auto& items = order.ranking();
    const std::size_t m = items.size();
    const auto shifts = static_cast<std::size_t>(t) + 1;
    // suffix[i][k] = mass of the shifted joint strictly above rank k.
    std::vector<std::vector<double>> suffix(shifts, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < shifts; ++i) {
        double acc = 0.0;
        for (std::size_t k = m; k-- > 0;) {
            suffix[i][k] = acc;
            acc += joint.prob(items[k].tail, items[k].omega + static_cast<int>(i));
        }
        if (std::abs(acc - 1.0) > kRowTol) {
            throw NumericalError("shifted joint mass drifted from 1");
        }
    }
    std::vector<double> cdf(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double log_sum = 0.0;
        bool zero = false;
        for (std::size_t i = 0; i < shifts; ++i) {
            const double s = suffix[i][k];
            if (s >= 1.0) {
                zero = true;
                break;
            }
            if (params.ell > 32 && s <= kClampEps) continue;  // stability clamp
            log_sum += binomial.choose_d(t, static_cast<int>(i)) * std::log1p(-s);
        }
        cdf[k] = (zero || log_sum < -745.0) ? 0.0 : std::exp(log_sum);
    }
    return cdf;
}

}  // namespace

double clamped_power(double base, uint128 exponent, const ModelParams& params) {
    if (base < 0.0) throw std::domain_error("power base must be >= 0");
    if (base > 1.0 + kMassTol) throw NumericalError("power base exceeds 1 beyond tolerance");
    if (base > 1.0) base = 1.0;
    if (exponent == 0) return 1.0;
    if (base == 0.0) return 0.0;
    if (base == 1.0) return 1.0;
    if (params.ell > 32 && base >= 1.0 - kClampEps) return 1.0;
    if (exponent > (uint128{1} << 20)) {
        // A magnitude estimate settles huge exponents before squaring: either
        // the result underflows to zero or the exponent still fits 64 bits.
        const double estimate = u128_to_double(exponent) * std::log(base);
        if (estimate < -745.0) return 0.0;
        if (exponent > uint128{std::numeric_limits<std::uint64_t>::max()}) {
            return std::exp(estimate);
        }
    }
    auto n = static_cast<std::uint64_t>(exponent);
    double result = 1.0;
    double square = base;
    while (n != 0) {
        if (n & 1) result *= square;
        square *= square;
        n >>= 1;
    }
    return result;
}

double maxtail_cdf(const ModelParams& params, int t, int tprime) {
    if (t < 0 || t > params.ell) throw std::domain_error("tail out of [0, ell]");
    if (tprime < 0 || tprime > params.ell) throw std::domain_error("tail bound out of [0, ell]");
    if (tprime == params.ell) return 1.0;
    double base = 1.0 - std::pow(params.alpha, tprime + 1);
    if (params.ell > 32 && base >= 1.0 - kClampEps) return 1.0;
    // Exponent 2^t: t successive squarings.
    for (int k = 0; k < t; ++k) base *= base;
    return base;
}

Eigen::VectorXd tailmax_transition_row(const ModelParams& params, int t) {
    Eigen::VectorXd row(params.ell + 1);
    double prev = 0.0;
    for (int tp = 0; tp <= params.ell; ++tp) {
        const double cdf = maxtail_cdf(params, t, tp);
        row(tp) = cdf - prev;
        prev = cdf;
    }
    return row;
}

std::vector<double> maxpair_cdf_all(const ModelParams& params, const PolicyOrder& order, int t) {
    if (t < 0 || t > params.ell) throw std::domain_error("tail out of [0, ell]");
    const BinomialTable binomial(params.ell);
    const JointPmf joint(params, binomial);
    return cdf_pass(params, order, t, joint, binomial);
}

double maxpair_cdf(const ModelParams& params, const PolicyOrder& order, int t, Observation obs) {
    const int rank = order.rank_of(obs);  // throws for non-members
    return maxpair_cdf_all(params, order, t)[static_cast<std::size_t>(rank)];
}

MarkovModel transition_and_reward(const ModelParams& params, const PolicyOrder& order) {
    const int n = params.ell + 1;
    const BinomialTable binomial(params.ell);
    const JointPmf joint(params, binomial);
    const auto& items = order.ranking();

    MarkovModel model;
    model.transition = Eigen::MatrixXd::Zero(n, n);
    model.reward = Eigen::VectorXd::Zero(n);

    std::vector<double> mass(items.size());
    for (int t = 0; t < n; ++t) {
        const auto cdf = cdf_pass(params, order, t, joint, binomial);
        double prev = 0.0;
        double sum = 0.0;
        for (std::size_t k = 0; k < items.size(); ++k) {
            double d = cdf[k] - prev;
            prev = cdf[k];
            if (d < 0.0) {
                if (d < -kMassTol) {
                    throw NumericalError("negative maxPair point mass beyond tolerance");
                }
                d = 0.0;
            }
            mass[k] = d;
            sum += d;
        }
        if (std::abs(sum - 1.0) > kRowTol) {
            throw NumericalError("maxPair mass drifted from 1 beyond tolerance");
        }
        for (std::size_t k = 0; k < items.size(); ++k) {
            const double m = mass[k] / sum;
            const Observation obs = items[k];
            model.transition(t, obs.tail) += m;
            model.reward(t) += m * static_cast<double>(obs.tail + obs.omega);
        }
    }
    return model;
}

bool models_close(const MarkovModel& a, const MarkovModel& b, double tol) {
    if (a.transition.rows() != b.transition.rows()) return false;
    return (a.transition - b.transition).cwiseAbs().maxCoeff() <= tol &&
           (a.reward - b.reward).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace randao
