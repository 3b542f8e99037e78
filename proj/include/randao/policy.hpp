#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randao/model.hpp"

namespace randao {

// A total order over the observation space: the action object of the reduced
// MDP. ranking() lists observations in ascending preference (most preferred
// last); rank_of() is the inverse map.
class PolicyOrder {
public:
    PolicyOrder(ObservationSpace space, std::vector<Observation> ranking,
                std::vector<double> sort_keys);

    const ObservationSpace& space() const { return space_; }
    const std::vector<Observation>& ranking() const { return ranking_; }
    // Key each observation was sorted by, aligned with ranking().
    const std::vector<double>& sort_keys() const { return sort_keys_; }

    int rank_of(Observation obs) const;
    // Element immediately below obs in the order; empty for the minimum.
    std::optional<Observation> predecessor(Observation obs) const;

private:
    ObservationSpace space_;
    std::vector<Observation> ranking_;
    std::vector<double> sort_keys_;
    std::vector<int> rank_by_index_;
};

// Prefer higher tail, break ties in favor of higher net reward.
PolicyOrder tailmax_order(int ell);

// Prefer higher next-epoch reward omega + tail; ties by ascending tail, then
// ascending omega.
PolicyOrder valuemax_order(int ell);

// Order induced by tail values: ascending omega + t + values[t]. Ties cannot
// change the gain (equal Bellman value); they are broken by higher omega + t,
// then higher tail, so identical value vectors always yield identical
// rankings.
PolicyOrder order_from_values(int ell, std::span<const double> values);

std::optional<Observation> predecessor(const PolicyOrder& order, Observation obs);

enum class PolicyKind { Honest, TailMax, ValueMax, Order };

// Honest is a forced i = 0 choice, not a ranking, so it carries no order.
struct PolicySpec {
    PolicyKind kind;
    std::optional<PolicyOrder> order;

    static PolicySpec honest() { return {PolicyKind::Honest, std::nullopt}; }
    static PolicySpec tailmax() { return {PolicyKind::TailMax, std::nullopt}; }
    static PolicySpec valuemax() { return {PolicyKind::ValueMax, std::nullopt}; }
    static PolicySpec from_order(PolicyOrder order) {
        return {PolicyKind::Order, std::move(order)};
    }
};

// Materializes the order behind an order-based spec; throws for Honest.
PolicyOrder resolve_order(const PolicySpec& spec, int ell);

std::string policy_kind_name(PolicyKind kind);

}  // namespace randao
