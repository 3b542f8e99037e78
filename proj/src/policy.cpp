#include "randao/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace randao {

PolicyOrder::PolicyOrder(ObservationSpace space, std::vector<Observation> ranking,
                         std::vector<double> sort_keys)
    : space_(std::move(space)), ranking_(std::move(ranking)), sort_keys_(std::move(sort_keys)) {
    if (ranking_.size() != space_.size() || sort_keys_.size() != space_.size()) {
        throw std::invalid_argument("ranking must be a permutation of the observation space");
    }
    rank_by_index_.assign(space_.size(), -1);
    for (int r = 0; r < static_cast<int>(ranking_.size()); ++r) {
        const int idx = space_.index_of(ranking_[static_cast<std::size_t>(r)]);
        if (rank_by_index_[static_cast<std::size_t>(idx)] != -1) {
            throw std::invalid_argument("ranking contains a duplicate observation");
        }
        rank_by_index_[static_cast<std::size_t>(idx)] = r;
    }
}

int PolicyOrder::rank_of(Observation obs) const {
    return rank_by_index_[static_cast<std::size_t>(space_.index_of(obs))];
}

std::optional<Observation> PolicyOrder::predecessor(Observation obs) const {
    const int r = rank_of(obs);
    if (r == 0) return std::nullopt;
    return ranking_[static_cast<std::size_t>(r) - 1];
}

PolicyOrder tailmax_order(int ell) {
    ObservationSpace space(ell);
    // The canonical enumeration (ascending tail, then ascending omega) is
    // exactly the tail-max preference order.
    std::vector<Observation> ranking = space.items();
    std::vector<double> keys;
    keys.reserve(ranking.size());
    for (const auto& obs : ranking) {
        keys.push_back(static_cast<double>(obs.tail * (2 * ell + 2) + obs.omega));
    }
    return PolicyOrder(std::move(space), std::move(ranking), std::move(keys));
}

PolicyOrder valuemax_order(int ell) {
    ObservationSpace space(ell);
    std::vector<Observation> ranking = space.items();
    std::sort(ranking.begin(), ranking.end(), [](const Observation& a, const Observation& b) {
        const int ka = a.omega + a.tail;
        const int kb = b.omega + b.tail;
        if (ka != kb) return ka < kb;
        if (a.tail != b.tail) return a.tail < b.tail;
        return a.omega < b.omega;
    });
    std::vector<double> keys;
    keys.reserve(ranking.size());
    for (const auto& obs : ranking) {
        keys.push_back(static_cast<double>(obs.omega + obs.tail));
    }
    return PolicyOrder(std::move(space), std::move(ranking), std::move(keys));
}

PolicyOrder order_from_values(int ell, std::span<const double> values) {
    if (static_cast<int>(values.size()) != ell + 1) {
        throw std::invalid_argument("value vector must have ell + 1 entries");
    }
    ObservationSpace space(ell);
    std::vector<Observation> ranking = space.items();
    const auto key = [&](const Observation& o) {
        return o.omega + o.tail + values[static_cast<std::size_t>(o.tail)];
    };
    std::sort(ranking.begin(), ranking.end(), [&](const Observation& a, const Observation& b) {
        const double ka = key(a);
        const double kb = key(b);
        if (ka != kb) return ka < kb;
        const int ra = a.omega + a.tail;
        const int rb = b.omega + b.tail;
        if (ra != rb) return ra < rb;
        return a.tail < b.tail;
    });
    std::vector<double> keys;
    keys.reserve(ranking.size());
    for (const auto& obs : ranking) keys.push_back(key(obs));
    return PolicyOrder(std::move(space), std::move(ranking), std::move(keys));
}

std::optional<Observation> predecessor(const PolicyOrder& order, Observation obs) {
    return order.predecessor(obs);
}

PolicyOrder resolve_order(const PolicySpec& spec, int ell) {
    switch (spec.kind) {
        case PolicyKind::TailMax:
            return tailmax_order(ell);
        case PolicyKind::ValueMax:
            return valuemax_order(ell);
        case PolicyKind::Order:
            if (!spec.order) throw std::invalid_argument("order spec carries no order");
            if (spec.order->space().ell() != ell) {
                throw std::invalid_argument("order was built for a different ell");
            }
            return *spec.order;
        case PolicyKind::Honest:
            break;
    }
    throw std::invalid_argument("honest policy has no order");
}

std::string policy_kind_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Honest: return "honest";
        case PolicyKind::TailMax: return "tailmax";
        case PolicyKind::ValueMax: return "valuemax";
        case PolicyKind::Order: return "order";
    }
    return "unknown";
}

}  // namespace randao
