#pragma once

#include "nomalpwa/clustering.hpp"
#include "nomalpwa/network_model.hpp"
#include "nomalpwa/radio_profile.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace nomalpwa {

/// Received-power ordering constraint between consecutive members of a
/// channel's decode order (index 0 = highest normalized gain).
enum class OrderingConstraint {
    /// p_n g_n >= p_{n-1} g_{n-1}: later-decoded nodes arrive at least as strong.
    ascending,
    /// p_{n-1} g_{n-1} >= p_n g_n: received powers follow the decode order.
    decode_order,
    off,
};
OrderingConstraint parse_ordering(std::string_view name);
std::string_view to_string(OrderingConstraint o);

struct PowerMember {
    std::size_t node = 0;   ///< deployment node id
    double gain = 0.0;      ///< linear channel gain on this channel
    double theta_mw = 0.0;  ///< sensitivity at the node's time index
    double time_s = 0.0;    ///< time on air at the node's time index
};

/// One channel's max-min power problem. Channels do not interfere, so each
/// is solved on its own; every member of the channel is a decision variable.
struct PowerProblem {
    std::size_t channel = 0;
    /// Sorted by descending gain (the SIC decode order).
    std::vector<PowerMember> members;
    double noise_mw = 0.0;
    double p_min_mw = 1.0;
    double p_max_mw = 100.0;
    double bandwidth_hz = 125'000.0;
    /// Bisection stopping width in bits/second.
    double epsilon_bps = 1e-6;
    OrderingConstraint ordering = OrderingConstraint::ascending;
};

struct PowerOptions {
    OrderingConstraint ordering = OrderingConstraint::ascending;
    double epsilon_bps = 1e-6;
    /// Clamp theta to p_max * g for nodes that cannot reach their sensitivity
    /// even at full power, instead of failing the whole channel.
    bool relax_unreachable_sensitivity = false;
};

/// Throws UsageError when the problem is malformed (unsorted members, bad
/// limits, non-positive epsilon).
void validate(const PowerProblem& problem);

/// Collects the members of channel k. Requires a complete allocation.
PowerProblem make_power_problem(const Deployment& deployment, const Allocation& alloc,
                                const RadioProfile& profile, std::size_t channel,
                                const PowerOptions& options = {});

/// Nodes of the problem whose sensitivity was clamped by make_power_problem.
std::vector<std::size_t> relaxed_members(const Deployment& deployment, const Allocation& alloc,
                                         const RadioProfile& profile, std::size_t channel);

/// B log2(1 + p_max max(g) / sigma^2); the lower end of the search is 0.
double tau_upper_bound(const PowerProblem& problem);

/// 2^(tau / B) - 1, the SINR every member must reach for rate tau.
double sinr_target(double tau_bps, double bandwidth_hz);

enum class FeasibilityStatus {
    feasible,
    infeasible,
    numerical_failure, ///< a received power overflowed
};

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::infeasible;
    /// Component-wise least feasible transmit powers (mW), member order.
    /// Meaningful only when feasible.
    std::vector<double> powers_mw;
    /// Ordering-chain merges performed (ascending mode only).
    std::size_t merges = 0;
    /// Member index that crossed its power ceiling when infeasible.
    std::size_t blocking_member = 0;

    bool feasible() const noexcept { return status == FeasibilityStatus::feasible; }
};

/// Least-power solution of the power box, the sensitivity floor, the ordering
/// constraint and the rate constraint p_n g_n >= c (I_n + sigma^2) with
/// c = 2^(tau/B) - 1 and I_n the post-SIC interference inside the channel.
///
/// Works on received powers q_n = p_n g_n, where every constraint is a lower
/// bound that is non-decreasing in the other q's, so a least solution exists
/// whenever any solution does. It is computed exactly in one weakest-first
/// pass; under the ascending ordering, members whose chain constraint binds
/// are merged into blocks of equal received power. Any q_n > p_max g_n on
/// the least solution proves infeasibility.
///
/// Throws StructuralInfeasibility if the problem is infeasible at tau = 0.
FeasibilityResult feasibility_solve(const PowerProblem& problem, double tau_bps);

/// Same as feasibility_solve but never throws on tau = 0 infeasibility.
FeasibilityResult feasibility_probe(const PowerProblem& problem, double tau_bps);

struct BisectionProbe {
    double tau_bps;
    FeasibilityStatus status;
};

struct PowerSolution {
    std::size_t channel = 0;
    std::vector<std::size_t> nodes;  ///< member order
    std::vector<double> powers_mw;   ///< member order
    double tau_star_bps = 0.0;
    double tau_upper_bps = 0.0;
    std::size_t iterations = 0;
    std::size_t numerical_failures = 0;
    std::vector<BisectionProbe> probes;
};

/// Bisection on the common rate target between 0 and tau_upper_bound().
/// Returns the last feasible powers; tau_star is the final lower end.
PowerSolution maximize_min_rate(const PowerProblem& problem);

/// Slacks of every lower-bound constraint at (powers, tau), in received-power
/// units (mW). Negative entries are violations.
struct ConstraintSlacks {
    std::vector<double> rate;        ///< q_n - c (I_n + sigma^2)
    std::vector<double> sensitivity; ///< q_n - theta_n
    std::vector<double> ordering;    ///< per member; 0 where not applicable
    double min() const;
};
ConstraintSlacks constraint_slacks(const PowerProblem& problem, std::span<const double> powers_mw,
                                   double tau_bps);

struct NetworkPowerResult {
    std::vector<double> powers_mw;          ///< per deployment node
    std::vector<PowerSolution> channels;    ///< one per non-empty channel
    std::vector<std::size_t> relaxed_nodes; ///< sensitivity clamped
};

/// Solves every channel independently and scatters powers back to nodes.
NetworkPowerResult optimize_powers(const Deployment& deployment, const Allocation& alloc,
                                   const RadioProfile& profile, const PowerOptions& options = {});

} // namespace nomalpwa
