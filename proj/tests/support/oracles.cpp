#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

using nomalpwa::OrderingConstraint;
using nomalpwa::PowerProblem;

Terms brute_force_interference(std::size_t n, bool sic, std::span<const double> powers_mw,
                               const nomalpwa::Allocation& alloc,
                               const nomalpwa::Deployment& deployment,
                               const nomalpwa::RadioProfile& profile)
{
    Terms t;
    const int k = alloc.channel_of[n];
    const auto kk = static_cast<std::size_t>(k);
    const double own_time = profile.transmission_time_s(static_cast<std::size_t>(alloc.time_of[n]));
    const double own_gamma = deployment.normalized_gain(kk, n);
    for (std::size_t i = 0; i < alloc.node_count(); ++i) {
        if (i == n || alloc.channel_of[i] != k)
            continue;
        const double gamma_i = deployment.normalized_gain(kk, i);
        // mu = 1 when n is decoded first: higher gamma, or equal gamma and lower id
        const bool decoded_after_n = own_gamma > gamma_i || (own_gamma == gamma_i && n < i);
        if (sic && !decoded_after_n)
            continue;
        const double rx = powers_mw[i] * deployment.gain(kk, i);
        if (alloc.time_of[i] == alloc.time_of[n]) {
            t.intra += rx;
        } else {
            const double ti = profile.transmission_time_s(static_cast<std::size_t>(alloc.time_of[i]));
            t.inter += std::min(own_time, ti) / own_time * rx;
        }
    }
    return t;
}

namespace {

// Rows a.q >= b in units of sigma^2.
struct Polytope {
    std::vector<Eigen::VectorXd> a;
    std::vector<double> b;
};

Polytope build(const PowerProblem& p, double tau)
{
    const std::size_t n = p.members.size();
    const double c = std::pow(2.0, tau / p.bandwidth_hz) - 1.0;
    const double s2 = p.noise_mw;
    Polytope poly;
    auto row = [&] { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)).eval(); };
    for (std::size_t j = 0; j < n; ++j) {
        const auto J = static_cast<Eigen::Index>(j);
        const auto& m = p.members[j];
        auto lo = row(); lo[J] = 1.0;
        poly.a.push_back(lo); poly.b.push_back(p.p_min_mw * m.gain / s2);
        auto hi = row(); hi[J] = -1.0;
        poly.a.push_back(hi); poly.b.push_back(-p.p_max_mw * m.gain / s2);
        poly.a.push_back(lo); poly.b.push_back(m.theta_mw / s2);
        auto rate = row(); rate[J] = 1.0;
        for (std::size_t i = j + 1; i < n; ++i)
            rate[static_cast<Eigen::Index>(i)] = -c * std::min(m.time_s, p.members[i].time_s) / m.time_s;
        poly.a.push_back(rate); poly.b.push_back(c);
        if (p.ordering == OrderingConstraint::ascending && j > 0) {
            auto o = row(); o[J] = 1.0; o[J - 1] = -1.0;
            poly.a.push_back(o); poly.b.push_back(0.0);
        }
        if (p.ordering == OrderingConstraint::decode_order && j + 1 < n) {
            auto o = row(); o[J] = 1.0; o[J + 1] = -1.0;
            poly.a.push_back(o); poly.b.push_back(0.0);
        }
    }
    return poly;
}

bool satisfies(const Polytope& poly, const Eigen::VectorXd& q)
{
    for (std::size_t r = 0; r < poly.a.size(); ++r) {
        const double lhs = poly.a[r].dot(q);
        const double scale = poly.a[r].cwiseAbs().dot(q.cwiseAbs()) + std::abs(poly.b[r]);
        if (lhs - poly.b[r] < -1e-13 * scale)
            return false;
    }
    return true;
}

} // namespace

std::optional<std::vector<double>> vertex_feasibility(const PowerProblem& problem, double tau_bps)
{
    const std::size_t n = problem.members.size();
    const Polytope poly = build(problem, tau_bps);
    const std::size_t m = poly.a.size();

    std::optional<Eigen::VectorXd> best;
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    const auto N = static_cast<Eigen::Index>(n);
    while (true) {
        Eigen::MatrixXd A(N, N);
        Eigen::VectorXd b(N);
        for (std::size_t r = 0; r < n; ++r) {
            A.row(static_cast<Eigen::Index>(r)) = poly.a[pick[r]].transpose();
            b[static_cast<Eigen::Index>(r)] = poly.b[pick[r]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rank() == N) {
            const Eigen::VectorXd q = lu.solve(b);
            if (q.allFinite() && satisfies(poly, q) && (!best || q.sum() < best->sum()))
                best = q;
        }
        // next n-combination of m rows
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == m - n + i - 1)
            --i;
        if (i == 0)
            break;
        ++pick[i - 1];
        for (std::size_t j = i; j < n; ++j)
            pick[j] = pick[j - 1] + 1;
    }
    if (!best)
        return std::nullopt;
    std::vector<double> powers(n);
    for (std::size_t j = 0; j < n; ++j)
        powers[j] = (*best)[static_cast<Eigen::Index>(j)] * problem.noise_mw / problem.members[j].gain;
    return powers;
}

double grid_search_tau(const PowerProblem& problem, double resolution)
{
    double hi = 0.0;
    for (const auto& m : problem.members)
        hi = std::max(hi, problem.bandwidth_hz * std::log2(1.0 + problem.p_max_mw * m.gain / problem.noise_mw));
    double lo = 0.0;
    double step = hi / 16.0;
    while (true) {
        double last = lo;
        for (double tau = lo; tau <= hi + 0.5 * step; tau += step) {
            if (!vertex_feasibility(problem, tau))
                break;
            last = tau;
        }
        lo = last;
        hi = std::min(hi, last + step);
        if (step < resolution)
            return lo;
        step /= 16.0;
    }
}

std::optional<std::pair<double, double>> two_node_closed_form(const PowerProblem& p, double tau_bps)
{
    const auto& a = p.members[0];
    const auto& b = p.members[1];
    const double c = std::pow(2.0, tau_bps / p.bandwidth_hz) - 1.0;
    const double col = std::min(a.time_s, b.time_s) / a.time_s;
    const double lb_a = std::max(p.p_min_mw * a.gain, a.theta_mw);
    const double lb_b = std::max(p.p_min_mw * b.gain, b.theta_mw);

    // node b is decoded last and sees only noise
    double qb = std::max(lb_b, c * p.noise_mw);
    double qa = std::max(lb_a, c * (col * qb + p.noise_mw));
    switch (p.ordering) {
    case OrderingConstraint::off:
        break;
    case OrderingConstraint::decode_order:
        qa = std::max(qa, qb);
        break;
    case OrderingConstraint::ascending:
        if (qa > qb) {
            // qb = qa = q with q >= lb_a and q >= c (col q + sigma^2)
            if (c * col >= 1.0)
                return std::nullopt;
            qa = qb = std::max(qa, c * p.noise_mw / (1.0 - c * col));
        }
        break;
    }
    const double slack = 1.0 + 1e-12;
    if (qa > p.p_max_mw * a.gain * slack || qb > p.p_max_mw * b.gain * slack)
        return std::nullopt;
    return std::pair{qa / a.gain, qb / b.gain};
}

PowerProblem random_problem(std::mt19937_64& rng, std::size_t members, OrderingConstraint ordering)
{
    static const nomalpwa::RadioProfile profile;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> h(1.0);
    std::uniform_int_distribution<std::size_t> sf(0, profile.time_count() - 1);

    PowerProblem p;
    p.noise_mw = profile.noise_variance_mw();
    p.p_min_mw = profile.p_min_mw();
    p.p_max_mw = profile.p_max_mw();
    p.bandwidth_hz = profile.bandwidth_hz();
    p.ordering = ordering;
    for (std::size_t i = 0; i < members; ++i) {
        const double d = std::max(1.0, 1000.0 * std::sqrt(u(rng)));
        const std::size_t f = sf(rng);
        p.members.push_back({i, h(rng) * std::pow(d, -3.5), profile.sensitivity_mw(f),
                             profile.transmission_time_s(f)});
    }
    std::sort(p.members.begin(), p.members.end(),
              [](const auto& x, const auto& y) { return x.gain > y.gain; });
    return p;
}

double ks_statistic(std::vector<double> samples, double (*cdf)(double))
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

} // namespace oracle
