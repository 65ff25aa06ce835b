#include "nomalpwa/errors.hpp"
#include "nomalpwa/interference.hpp"
#include "nomalpwa/power_allocation.hpp"
#include "nomalpwa/time_allocation.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nomalpwa;

namespace {

constexpr OrderingConstraint kAllOrderings[] = {OrderingConstraint::ascending,
                                                OrderingConstraint::decode_order,
                                                OrderingConstraint::off};

PowerProblem single(double gain, double theta, double sigma2)
{
    PowerProblem p;
    p.noise_mw = sigma2;
    p.members = {{0, gain, theta, 0.01}};
    return p;
}

// Feasibility of given transmit powers, evaluated straight from the constraint list.
bool direct_feasible(const PowerProblem& p, const std::vector<double>& powers, double tau)
{
    const double c = std::pow(2.0, tau / p.bandwidth_hz) - 1.0;
    const std::size_t n = p.members.size();
    for (std::size_t j = 0; j < n; ++j) {
        const auto& m = p.members[j];
        const double q = powers[j] * m.gain;
        if (powers[j] < p.p_min_mw || powers[j] > p.p_max_mw || q < m.theta_mw)
            return false;
        double interference = 0.0;
        for (std::size_t i = j + 1; i < n; ++i)
            interference += std::min(m.time_s, p.members[i].time_s) / m.time_s * powers[i] * p.members[i].gain;
        if (q < c * (interference + p.noise_mw))
            return false;
        if (j > 0) {
            const double prev = powers[j - 1] * p.members[j - 1].gain;
            if (p.ordering == OrderingConstraint::ascending && q < prev)
                return false;
            if (p.ordering == OrderingConstraint::decode_order && prev < q)
                return false;
        }
    }
    return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST_CASE("upper bound and SINR target")
{
    PowerProblem p = single(1e-12, 0.0, 100.0 * 1e-12);
    CHECK(tau_upper_bound(p) == doctest::Approx(125'000.0));

    p = single(3.162e-11, 0.0, 1.981e-12);
    CHECK(tau_upper_bound(p) == doctest::Approx(125'000.0 * std::log2(1.0 + 100.0 * 3.162e-11 / 1.981e-12)));
    CHECK(tau_upper_bound(p) == doctest::Approx(1.330e6).epsilon(1e-3));

    CHECK(sinr_target(0.0, 125'000.0) == 0.0);
    CHECK(sinr_target(125'000.0, 125'000.0) == doctest::Approx(1.0));
    CHECK(sinr_target(250'000.0, 125'000.0) == doctest::Approx(3.0));
}

TEST_CASE("single node")
{
    const double sigma2 = 1.981e-12, g = 3.162e-11;
    const PowerProblem p = single(g, 1e-13, sigma2);

    const auto at_zero = feasibility_solve(p, 0.0);
    REQUIRE(at_zero.feasible());
    CHECK(at_zero.powers_mw[0] == doctest::Approx(1.0));

    // rate needing more than p_max
    const double tau_over = 125'000.0 * std::log2(1.0 + 1.01 * 100.0 * g / sigma2);
    CHECK_FALSE(feasibility_solve(p, tau_over).feasible());

    const auto sol = maximize_min_rate(p);
    const double closed = 125'000.0 * std::log2(1.0 + 100.0 * g / sigma2);
    CHECK(sol.tau_star_bps <= closed);
    CHECK(closed - sol.tau_star_bps <= p.epsilon_bps);
    CHECK(sol.powers_mw[0] == doctest::Approx(100.0).epsilon(1e-9));

    // sensitivity unreachable even at full power
    const PowerProblem deaf = single(g, 200.0 * g, sigma2);
    CHECK_THROWS_AS(feasibility_solve(deaf, 0.0), StructuralInfeasibility);
    CHECK_THROWS_AS(maximize_min_rate(deaf), StructuralInfeasibility);
    CHECK_FALSE(feasibility_probe(deaf, 0.0).feasible());
}

TEST_CASE("two nodes match the hand-solved system")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int feasible = 0, checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        for (auto ordering : kAllOrderings) {
            const auto p = oracle::random_problem(rng, 2, ordering);
            const double tau = tau_upper_bound(p) * std::pow(u(rng), 2.0);
            const auto expected = oracle::two_node_closed_form(p, tau);
            const auto got = feasibility_probe(p, tau);
            ++checked;
            REQUIRE(got.status != FeasibilityStatus::numerical_failure);
            CHECK(got.feasible() == expected.has_value());
            if (expected && got.feasible()) {
                ++feasible;
                CHECK(rel(got.powers_mw[0], expected->first) <= 1e-12);
                CHECK(rel(got.powers_mw[1], expected->second) <= 1e-12);
            }
        }
    }
    CHECK(feasible > checked / 10);
}

TEST_CASE("same-cluster pair: weak node sees only noise")
{
    PowerProblem p;
    p.noise_mw = 1e-12;
    p.ordering = OrderingConstraint::off;
    p.members = {{0, 4e-11, 1e-13, 0.01}, {1, 1e-11, 1e-13, 0.01}};
    const double tau = 250'000.0; // c = 3
    const auto r = feasibility_solve(p, tau);
    REQUIRE(r.feasible());
    const double q2 = std::max(3.0 * 1e-12, 1.0 * 1e-11);
    const double q1 = std::max(3.0 * (q2 + 1e-12), 1.0 * 4e-11);
    CHECK(r.powers_mw[1] * 1e-11 == doctest::Approx(q2).epsilon(1e-13));
    CHECK(r.powers_mw[0] * 4e-11 == doctest::Approx(q1).epsilon(1e-13));
}

TEST_CASE("feasibility agrees with the vertex-enumeration oracle")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0, total = 0, feasible = 0, merged = 0;
    for (int trial = 0; trial < 540; ++trial) {
        const auto ordering = kAllOrderings[trial % 3];
        const std::size_t n = 1 + static_cast<std::size_t>(trial / 3) % 4;
        const auto p = oracle::random_problem(rng, n, ordering);
        const double tau = tau_upper_bound(p) * std::pow(u(rng), 3.0);
        const auto ref = oracle::vertex_feasibility(p, tau);
        const auto got = feasibility_probe(p, tau);
        REQUIRE(got.status != FeasibilityStatus::numerical_failure);
        ++total;
        agree += got.feasible() == ref.has_value();
        if (ref && got.feasible()) {
            ++feasible;
            merged += got.merges > 0;
            for (std::size_t j = 0; j < n; ++j)
                CHECK(rel(got.powers_mw[j], (*ref)[j]) <= 1e-9);
        }
    }
    MESSAGE("oracle agreement: ", agree, "/", total, ", feasible ", feasible, ", with chain merges ", merged);
    CHECK(agree == total);
    CHECK(feasible > 50);
    CHECK(merged > 10);
}

TEST_CASE("feasibility is monotone in tau")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = oracle::random_problem(rng, 2 + trial % 20, kAllOrderings[trial % 3]);
        const double hi = tau_upper_bound(p);
        double a = hi * u(rng), b = hi * u(rng);
        if (a > b)
            std::swap(a, b);
        const auto low = feasibility_probe(p, a);
        const auto high = feasibility_probe(p, b);
        if (high.feasible()) {
            CHECK(low.feasible());
            for (std::size_t j = 0; j < p.members.size(); ++j)
                CHECK(low.powers_mw[j] <= high.powers_mw[j] * (1 + 1e-12));
        }
    }
}

TEST_CASE("returned powers are least among sampled feasible points")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int accepted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto ordering = trial % 2 ? OrderingConstraint::off : OrderingConstraint::decode_order;
        const auto p = oracle::random_problem(rng, 1 + trial % 3, ordering);
        const auto top = feasibility_probe(p, 0.0);
        if (!top.feasible())
            continue;
        const double tau = 0.3 * maximize_min_rate(p).tau_star_bps;
        const auto least = feasibility_probe(p, tau);
        REQUIRE(least.feasible());
        CHECK(direct_feasible(p, least.powers_mw, tau * (1 - 1e-9)));
        for (int s = 0; s < 2000; ++s) {
            std::vector<double> sample(p.members.size());
            for (auto& x : sample)
                x = p.p_min_mw * std::pow(p.p_max_mw / p.p_min_mw, u(rng));
            if (!direct_feasible(p, sample, tau))
                continue;
            ++accepted;
            for (std::size_t j = 0; j < sample.size(); ++j)
                CHECK(least.powers_mw[j] <= sample[j] * (1 + 1e-12));
        }
    }
    CHECK(accepted > 100);
}

TEST_CASE("bisection brackets tau_star")
{
    std::mt19937_64 rng(5);
    int solved = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const auto p = oracle::random_problem(rng, 1 + trial % 12, kAllOrderings[trial % 3]);
        if (!feasibility_probe(p, 0.0).feasible()) {
            CHECK_THROWS_AS(maximize_min_rate(p), StructuralInfeasibility);
            continue;
        }
        const auto sol = maximize_min_rate(p);
        ++solved;
        CHECK(feasibility_probe(p, sol.tau_star_bps).feasible());
        CHECK_FALSE(feasibility_probe(p, sol.tau_star_bps + 2 * p.epsilon_bps).feasible());
        CHECK(sol.tau_star_bps <= sol.tau_upper_bps);
        CHECK(sol.numerical_failures == 0);

        // realized NOMA rates under the returned powers
        const double c = sinr_target(sol.tau_star_bps, p.bandwidth_hz);
        const auto slacks = constraint_slacks(p, sol.powers_mw, sol.tau_star_bps);
        CHECK(slacks.min() >= -1e-9 * p.p_max_mw * p.members.front().gain);
        for (std::size_t j = 0; j < p.members.size(); ++j) {
            CHECK(sol.powers_mw[j] >= p.p_min_mw * (1 - 1e-12));
            CHECK(sol.powers_mw[j] <= p.p_max_mw * (1 + 1e-12));
            double interference = 0.0;
            const auto& m = p.members[j];
            for (std::size_t i = j + 1; i < p.members.size(); ++i)
                interference += std::min(m.time_s, p.members[i].time_s) / m.time_s * sol.powers_mw[i] * p.members[i].gain;
            const double sinr = sol.powers_mw[j] * m.gain / (interference + p.noise_mw);
            CHECK(sinr >= c * (1 - 1e-9));
        }
    }
    CHECK(solved > 50);
}

TEST_CASE("tau_star matches a grid search over the exact oracle")
{
    std::mt19937_64 rng(3);
    int done = 0;
    for (int trial = 0; done < 12 && trial < 200; ++trial) {
        const auto ordering = trial % 2 ? OrderingConstraint::off : OrderingConstraint::decode_order;
        const auto p = oracle::random_problem(rng, 3, ordering);
        if (!feasibility_probe(p, 0.0).feasible())
            continue;
        const double grid = oracle::grid_search_tau(p, p.epsilon_bps / 2.0);
        const double tau_star = maximize_min_rate(p).tau_star_bps;
        CHECK(std::abs(grid - tau_star) <= p.epsilon_bps);
        ++done;
    }
    CHECK(done == 12);
}

TEST_CASE("slacks are invariant to doubling gains and halving powers")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = oracle::random_problem(rng, 1 + trial % 8, kAllOrderings[trial % 3]);
        std::uniform_real_distribution<double> u(1.0, 100.0);
        std::vector<double> powers(p.members.size());
        for (auto& x : powers)
            x = u(rng);
        const double tau = 0.1 * tau_upper_bound(p);
        const auto before = constraint_slacks(p, powers, tau);
        for (auto& m : p.members)
            m.gain *= 2.0;
        for (auto& x : powers)
            x /= 2.0;
        const auto after = constraint_slacks(p, powers, tau);
        for (std::size_t j = 0; j < powers.size(); ++j) {
            CHECK(after.rate[j] == doctest::Approx(before.rate[j]).epsilon(1e-12).scale(1e-20));
            CHECK(after.sensitivity[j] == doctest::Approx(before.sensitivity[j]).epsilon(1e-12).scale(1e-20));
            CHECK(after.ordering[j] == doctest::Approx(before.ordering[j]).epsilon(1e-12).scale(1e-20));
        }
    }
}

TEST_CASE("literal ordering rejects a weak node it cannot lift")
{
    PowerProblem p;
    p.noise_mw = 1e-12;
    p.ordering = OrderingConstraint::ascending;
    // the weak node would need 1000x its gain ratio to match p_min of the strong one
    p.members = {{0, 1e-8, 1e-13, 0.01}, {1, 1e-12, 1e-13, 0.01}};
    try {
        feasibility_solve(p, 0.0);
        FAIL("expected structural infeasibility");
    } catch (const StructuralInfeasibility& e) {
        CHECK(e.node() == 1);
    }
    p.ordering = OrderingConstraint::decode_order;
    CHECK(feasibility_solve(p, 0.0).feasible());
}

TEST_CASE("problem validation")
{
    PowerProblem p = single(1e-11, 0.0, 1e-12);
    p.epsilon_bps = 0.0;
    CHECK_THROWS_AS(validate(p), UsageError);
    p = single(1e-11, 0.0, 1e-12);
    p.members.push_back({1, 1e-10, 0.0, 0.01});
    CHECK_THROWS_AS(validate(p), UsageError);
    p = single(1e-11, 0.0, 1e-12);
    p.p_min_mw = 200.0;
    CHECK_THROWS_AS(validate(p), UsageError);
}

TEST_CASE("network-level optimization")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 200;
    c.rng_seed = 11;
    const auto d = generate_deployment(c, profile);
    const auto a = allocate_time_unfair(allocate_channels_roundrobin(d), profile);

    PowerOptions opt;
    opt.ordering = OrderingConstraint::decode_order;
    opt.relax_unreachable_sensitivity = true;
    const auto result = optimize_powers(d, a, profile, opt);
    REQUIRE(result.powers_mw.size() == 200);
    CHECK(result.channels.size() == 8);

    const auto rates = evaluate_rates(ReceiverModel::noma_sic, result.powers_mw, a, d, profile);
    for (const auto& ch : result.channels)
        CHECK(rates.channel_min_rate_bps[ch.channel] >= ch.tau_star_bps * (1 - 1e-9));

    const std::vector<double> full(200, profile.p_max_mw());
    const auto at_max = evaluate_rates(ReceiverModel::noma_sic, full, a, d, profile);
    CHECK(rates.min_rate_bps >= at_max.min_rate_bps * (1 - 1e-9));

    const auto p = make_power_problem(d, a, profile, 0, opt);
    CHECK(p.members.size() == a.channel_order[0].size());
    for (std::size_t j = 0; j < p.members.size(); ++j)
        CHECK(p.members[j].node == a.channel_order[0][j]);
}
