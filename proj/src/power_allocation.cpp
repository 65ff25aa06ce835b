#include "nomalpwa/power_allocation.hpp"

#include "nomalpwa/errors.hpp"
#include "nomalpwa/interference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nomalpwa {

OrderingConstraint parse_ordering(std::string_view name)
{
    if (name == "ascending") return OrderingConstraint::ascending;
    if (name == "decode_order") return OrderingConstraint::decode_order;
    if (name == "off") return OrderingConstraint::off;
    throw ConfigError("unknown ordering constraint '" + std::string(name) +
                      "' (ascending|decode_order|off)");
}

std::string_view to_string(OrderingConstraint o)
{
    switch (o) {
    case OrderingConstraint::ascending: return "ascending";
    case OrderingConstraint::decode_order: return "decode_order";
    case OrderingConstraint::off: return "off";
    }
    return "?";
}

void validate(const PowerProblem& problem)
{
    if (!(problem.noise_mw > 0.0))
        throw UsageError("noise variance must be positive");
    if (!(problem.p_min_mw > 0.0) || problem.p_min_mw > problem.p_max_mw)
        throw UsageError("power limits must satisfy 0 < p_min <= p_max");
    if (!(problem.bandwidth_hz > 0.0))
        throw UsageError("bandwidth must be positive");
    if (!(problem.epsilon_bps > 0.0))
        throw UsageError("bisection tolerance must be positive");
    for (std::size_t i = 0; i < problem.members.size(); ++i) {
        const auto& m = problem.members[i];
        if (!(m.gain > 0.0) || !(m.time_s > 0.0) || m.theta_mw < 0.0)
            throw UsageError("member " + std::to_string(i) + " has a non-positive gain or time");
        if (i > 0 && m.gain > problem.members[i - 1].gain)
            throw UsageError("members must be sorted by descending gain");
    }
}

PowerProblem make_power_problem(const Deployment& deployment, const Allocation& alloc,
                                const RadioProfile& profile, std::size_t channel,
                                const PowerOptions& options)
{
    if (channel >= alloc.channel_count)
        throw UsageError("channel index out of range: " + std::to_string(channel));
    if (!alloc.has_times())
        throw UsageError("power allocation needs a complete time allocation");

    PowerProblem problem;
    problem.channel = channel;
    problem.noise_mw = deployment.noise_variance_mw();
    problem.p_min_mw = profile.p_min_mw();
    problem.p_max_mw = profile.p_max_mw();
    problem.bandwidth_hz = profile.bandwidth_hz();
    problem.epsilon_bps = options.epsilon_bps;
    problem.ordering = options.ordering;
    for (std::size_t n : alloc.channel_order[channel]) {
        const auto f = static_cast<std::size_t>(alloc.time_of[n]);
        PowerMember m{n, deployment.gain(channel, n), profile.sensitivity_mw(f),
                      profile.transmission_time_s(f)};
        if (options.relax_unreachable_sensitivity)
            m.theta_mw = std::min(m.theta_mw, problem.p_max_mw * m.gain);
        problem.members.push_back(m);
    }
    return problem;
}

std::vector<std::size_t> relaxed_members(const Deployment& deployment, const Allocation& alloc,
                                         const RadioProfile& profile, std::size_t channel)
{
    std::vector<std::size_t> out;
    for (std::size_t n : alloc.channel_order.at(channel)) {
        const auto f = static_cast<std::size_t>(alloc.time_of[n]);
        if (profile.sensitivity_mw(f) > profile.p_max_mw() * deployment.gain(channel, n))
            out.push_back(n);
    }
    return out;
}

double tau_upper_bound(const PowerProblem& problem)
{
    if (problem.members.empty())
        throw UsageError("power problem has no members");
    double best = 0.0;
    for (const auto& m : problem.members)
        best = std::max(best, m.gain);
    return shannon_rate(problem.p_max_mw * best / problem.noise_mw, problem.bandwidth_hz);
}

double sinr_target(double tau_bps, double bandwidth_hz)
{
    return std::expm1(tau_bps / bandwidth_hz * std::numbers::ln2);
}

namespace {

// Relative slack on the power ceiling so a constraint met with equality at
// p_max (up to rounding) still counts as feasible.
constexpr double kCeilingSlack = 1e-12;

// Distinct member times and the collision factor table between them.
struct TimeBuckets {
    std::vector<std::size_t> bucket_of;
    std::vector<double> col; // col[desired * count + interferer]
    std::size_t count = 0;

    explicit TimeBuckets(const PowerProblem& problem)
    {
        std::vector<double> times;
        for (const auto& m : problem.members) {
            auto it = std::find(times.begin(), times.end(), m.time_s);
            if (it == times.end()) {
                times.push_back(m.time_s);
                it = times.end() - 1;
            }
            bucket_of.push_back(static_cast<std::size_t>(it - times.begin()));
        }
        count = times.size();
        col.resize(count * count);
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = 0; b < count; ++b)
                col[a * count + b] = collision_factor(times[a], times[b]);
    }

    // Interference on a member in bucket t from per-bucket sums of others.
    double weighted(std::size_t t, const std::vector<double>& sums) const
    {
        double total = 0.0;
        for (std::size_t s = 0; s < count; ++s)
            total += col[t * count + s] * sums[s];
        return total;
    }
};

// Consecutive members [first, last] sharing one received power.
struct Block {
    std::size_t first = 0;
    std::size_t last = 0;
    double value = 0.0;
    std::vector<double> sums; // value times the member count, per bucket
};

} // namespace

FeasibilityResult feasibility_probe(const PowerProblem& problem, double tau_bps)
{
    validate(problem);
    if (tau_bps < 0.0)
        throw UsageError("rate target must be non-negative");

    const std::size_t n = problem.members.size();
    FeasibilityResult result;
    if (n == 0) {
        result.status = FeasibilityStatus::feasible;
        return result;
    }

    const double c = sinr_target(tau_bps, problem.bandwidth_hz);
    const TimeBuckets buckets(problem);
    const std::size_t nb = buckets.count;

    std::vector<double> lower(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = problem.members[i];
        lower[i] = std::max(problem.p_min_mw * m.gain, m.theta_mw);
        upper[i] = problem.p_max_mw * m.gain * (1.0 + kCeilingSlack);
    }
    auto fail = [&](FeasibilityStatus status, std::size_t member) {
        result.status = status;
        result.blocking_member = member;
        return result;
    };

    // Every constraint on q_r except the ascending chain involves only later
    // members, so a weakest-first pass gives the least solution directly.
    // The chain q_{r-1} <= q_r is handled by merging r into the following
    // block whenever it would end up stronger; a merged block takes the
    // smallest common value meeting all of its members' constraints.
    std::vector<Block> stack; // back() is the block right after the current member
    std::vector<double> after(nb, 0.0);
    std::vector<double> inner(nb);
    for (std::size_t r = n; r-- > 0;) {
        Block b{r, r, 0.0, std::vector<double>(nb, 0.0)};
        while (true) {
            double v = 0.0;
            std::fill(inner.begin(), inner.end(), 0.0);
            for (std::size_t m = b.last + 1; m-- > b.first;) {
                const std::size_t t = buckets.bucket_of[m];
                // v >= c (v * self + outside + sigma^2)
                const double self = buckets.weighted(t, inner);
                const double denom = 1.0 - c * self;
                if (!(denom > 0.0))
                    return fail(FeasibilityStatus::infeasible, m);
                v = std::max({v, lower[m], c * (buckets.weighted(t, after) + problem.noise_mw) / denom});
                inner[t] += 1.0;
            }
            if (problem.ordering == OrderingConstraint::decode_order && !stack.empty())
                v = std::max(v, stack.back().value);
            if (!std::isfinite(v))
                return fail(FeasibilityStatus::numerical_failure, b.last);
            // gains descend, so the last member has the lowest ceiling
            if (v > upper[b.last]) {
                std::size_t m = b.first;
                while (v <= upper[m])
                    ++m;
                return fail(FeasibilityStatus::infeasible, m);
            }
            if (problem.ordering == OrderingConstraint::ascending && !stack.empty() &&
                v > stack.back().value) {
                const Block next = std::move(stack.back());
                stack.pop_back();
                for (std::size_t s = 0; s < nb; ++s)
                    after[s] -= next.sums[s];
                b.last = next.last;
                ++result.merges;
                continue;
            }
            b.value = v;
            break;
        }
        for (std::size_t m = b.first; m <= b.last; ++m)
            b.sums[buckets.bucket_of[m]] += b.value;
        for (std::size_t s = 0; s < nb; ++s)
            after[s] += b.sums[s];
        stack.push_back(std::move(b));
    }

    result.status = FeasibilityStatus::feasible;
    result.powers_mw.resize(n);
    for (const auto& b : stack)
        for (std::size_t m = b.first; m <= b.last; ++m)
            result.powers_mw[m] =
                std::clamp(b.value / problem.members[m].gain, problem.p_min_mw, problem.p_max_mw);
    return result;
}

namespace {

[[noreturn]] void throw_structural(const PowerProblem& problem, const FeasibilityResult& at_zero)
{
    const std::size_t i = at_zero.blocking_member;
    const auto& m = problem.members.at(i);
    std::string why;
    if (m.theta_mw > problem.p_max_mw * m.gain) {
        why = "sensitivity needs " + std::to_string(m.theta_mw / m.gain) + " mW > p_max " +
              std::to_string(problem.p_max_mw) + " mW";
    } else if (at_zero.status == FeasibilityStatus::numerical_failure) {
        why = "received power overflowed at a zero rate target";
    } else {
        why = "ordering constraint (" + std::string(to_string(problem.ordering)) +
              ") pushes it past p_max at a zero rate target";
    }
    throw StructuralInfeasibility("channel " + std::to_string(problem.channel + 1) + ", node " +
                                      std::to_string(m.node) + ": " + why,
                                  m.node);
}

} // namespace

FeasibilityResult feasibility_solve(const PowerProblem& problem, double tau_bps)
{
    auto result = feasibility_probe(problem, tau_bps);
    if (result.feasible())
        return result;
    if (tau_bps == 0.0)
        throw_structural(problem, result);
    if (auto at_zero = feasibility_probe(problem, 0.0); !at_zero.feasible())
        throw_structural(problem, at_zero);
    return result;
}

PowerSolution maximize_min_rate(const PowerProblem& problem)
{
    validate(problem);
    PowerSolution solution;
    solution.channel = problem.channel;
    for (const auto& m : problem.members)
        solution.nodes.push_back(m.node);
    if (problem.members.empty())
        return solution;

    auto best = feasibility_solve(problem, 0.0);
    double lo = 0.0;
    double hi = tau_upper_bound(problem);
    solution.tau_upper_bps = hi;

    while (hi - lo >= problem.epsilon_bps) {
        const double tau = 0.5 * (lo + hi);
        if (tau <= lo || tau >= hi)
            break; // interval narrower than one ulp
        auto probe = feasibility_probe(problem, tau);
        ++solution.iterations;
        solution.probes.push_back({tau, probe.status});
        if (probe.feasible()) {
            best = std::move(probe);
            lo = tau;
        } else {
            if (probe.status == FeasibilityStatus::numerical_failure)
                ++solution.numerical_failures;
            hi = tau;
        }
    }
    solution.powers_mw = std::move(best.powers_mw);
    solution.tau_star_bps = lo;
    return solution;
}

double ConstraintSlacks::min() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto* v : {&rate, &sensitivity, &ordering})
        for (double x : *v)
            m = std::min(m, x);
    return m;
}

ConstraintSlacks constraint_slacks(const PowerProblem& problem, std::span<const double> powers_mw,
                                   double tau_bps)
{
    const std::size_t n = problem.members.size();
    if (powers_mw.size() != n)
        throw UsageError("one power per member is required");
    const double c = sinr_target(tau_bps, problem.bandwidth_hz);

    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = powers_mw[i] * problem.members[i].gain;

    ConstraintSlacks s;
    s.rate.resize(n);
    s.sensitivity.resize(n);
    s.ordering.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double interference = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            interference += collision_factor(problem.members[i].time_s, problem.members[j].time_s) * q[j];
        s.rate[i] = q[i] - c * (interference + problem.noise_mw);
        s.sensitivity[i] = q[i] - problem.members[i].theta_mw;
        if (problem.ordering == OrderingConstraint::ascending && i > 0)
            s.ordering[i] = q[i] - q[i - 1];
        if (problem.ordering == OrderingConstraint::decode_order && i + 1 < n)
            s.ordering[i] = q[i] - q[i + 1];
    }
    return s;
}

NetworkPowerResult optimize_powers(const Deployment& deployment, const Allocation& alloc,
                                   const RadioProfile& profile, const PowerOptions& options)
{
    NetworkPowerResult out;
    out.powers_mw.assign(deployment.node_count(), profile.p_max_mw());
    for (std::size_t k = 0; k < alloc.channel_count; ++k) {
        if (alloc.channel_order[k].empty())
            continue;
        if (options.relax_unreachable_sensitivity)
            for (std::size_t n : relaxed_members(deployment, alloc, profile, k))
                out.relaxed_nodes.push_back(n);
        const auto problem = make_power_problem(deployment, alloc, profile, k, options);
        auto solution = maximize_min_rate(problem);
        for (std::size_t i = 0; i < solution.nodes.size(); ++i)
            out.powers_mw[solution.nodes[i]] = solution.powers_mw[i];
        out.channels.push_back(std::move(solution));
    }
    std::sort(out.relaxed_nodes.begin(), out.relaxed_nodes.end());
    return out;
}

} // namespace nomalpwa
