#include "nomalpwa/interference.hpp"

#include "nomalpwa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nomalpwa {

ReceiverModel parse_receiver_model(std::string_view name)
{
    if (name == "noma_sic") return ReceiverModel::noma_sic;
    if (name == "plain") return ReceiverModel::plain;
    if (name == "oma") return ReceiverModel::oma;
    throw ConfigError("unknown receiver model '" + std::string(name) + "' (noma_sic|plain|oma)");
}

std::string_view to_string(ReceiverModel m)
{
    switch (m) {
    case ReceiverModel::noma_sic: return "noma_sic";
    case ReceiverModel::plain: return "plain";
    case ReceiverModel::oma: return "oma";
    }
    return "?";
}

double collision_factor(double desired_time_s, double interferer_time_s)
{
    return std::min(desired_time_s, interferer_time_s) / desired_time_s;
}

double shannon_rate(double sinr, double bandwidth_hz)
{
    return bandwidth_hz * std::log2(1.0 + sinr);
}

namespace {

void check_inputs(std::span<const double> powers_mw, const Allocation& alloc,
                  const Deployment& deployment, bool need_times)
{
    if (powers_mw.size() != deployment.node_count() || alloc.node_count() != deployment.node_count())
        throw UsageError("powers, allocation and deployment disagree on the node count");
    if (need_times && !alloc.has_times())
        throw UsageError("interference needs a complete time allocation");
}

std::size_t at(int index) { return static_cast<std::size_t>(index); }

} // namespace

InterferenceTerms interference_at(std::size_t n, bool sic, std::span<const double> powers_mw,
                                  const Allocation& alloc, const Deployment& deployment,
                                  const RadioProfile& profile)
{
    check_inputs(powers_mw, alloc, deployment, true);
    if (n >= deployment.node_count())
        throw UsageError("node index out of range: " + std::to_string(n));

    const std::size_t k = at(alloc.channel_of[n]);
    const auto& order = alloc.channel_order[k];
    const double own_time = profile.transmission_time_s(at(alloc.time_of[n]));

    InterferenceTerms terms;
    // decode order position decides SIC membership (ties already broken by id)
    bool past_self = false;
    for (std::size_t i : order) {
        if (i == n) {
            past_self = true;
            continue;
        }
        if (sic && !past_self)
            continue;
        const double received = powers_mw[i] * deployment.gain(k, i);
        if (alloc.time_of[i] == alloc.time_of[n])
            terms.intra += received;
        else
            terms.inter += collision_factor(own_time, profile.transmission_time_s(at(alloc.time_of[i]))) * received;
    }
    return terms;
}

double sinr_plain(std::size_t n, std::span<const double> powers_mw, const Allocation& alloc,
                  const Deployment& deployment, const RadioProfile& profile)
{
    const auto terms = interference_at(n, false, powers_mw, alloc, deployment, profile);
    const std::size_t k = at(alloc.channel_of[n]);
    return powers_mw[n] * deployment.gain(k, n) / (terms.intra + terms.inter + deployment.noise_variance_mw());
}

double sinr_noma(std::size_t n, std::span<const double> powers_mw, const Allocation& alloc,
                 const Deployment& deployment, const RadioProfile& profile)
{
    const auto terms = interference_at(n, true, powers_mw, alloc, deployment, profile);
    const std::size_t k = at(alloc.channel_of[n]);
    return powers_mw[n] * deployment.gain(k, n) / (terms.intra + terms.inter + deployment.noise_variance_mw());
}

namespace {

void finish_report(RateReport& report, const Allocation& alloc)
{
    const std::size_t n_count = report.rate_bps.size();
    report.channel_min_rate_bps.assign(alloc.channel_count, std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    for (std::size_t n = 0; n < n_count; ++n) {
        sum += report.rate_bps[n];
        double& cmin = report.channel_min_rate_bps[at(alloc.channel_of[n])];
        if (std::isnan(cmin) || report.rate_bps[n] < cmin)
            cmin = report.rate_bps[n];
    }
    report.mean_rate_bps = n_count ? sum / static_cast<double>(n_count) : 0.0;
    report.min_rate_bps = min_rate(report);
}

} // namespace

RateReport evaluate_rates(ReceiverModel model, std::span<const double> powers_mw,
                          const Allocation& alloc, const Deployment& deployment,
                          const RadioProfile& profile)
{
    if (model == ReceiverModel::oma)
        return oma_min_rate(deployment, alloc, profile, powers_mw);

    check_inputs(powers_mw, alloc, deployment, true);
    const std::size_t n_count = deployment.node_count();
    const std::size_t f_count = profile.time_count();
    const double noise = deployment.noise_variance_mw();
    const double bw = profile.bandwidth_hz();

    // col[desired * F + interferer]
    std::vector<double> col(f_count * f_count);
    for (std::size_t a = 0; a < f_count; ++a)
        for (std::size_t b = 0; b < f_count; ++b)
            col[a * f_count + b] = collision_factor(profile.transmission_time_s(a), profile.transmission_time_s(b));

    RateReport report;
    report.model = model;
    report.sinr.assign(n_count, 0.0);
    report.rate_bps.assign(n_count, 0.0);

    std::vector<double> sums(f_count);
    std::vector<double> interference(n_count, 0.0);
    // Weighted interference from the members already walked past.
    auto accumulated = [&](std::size_t n) {
        const std::size_t t = at(alloc.time_of[n]);
        double total = sums[t];
        for (std::size_t s = 0; s < f_count; ++s)
            if (s != t)
                total += col[t * f_count + s] * sums[s];
        return total;
    };

    for (std::size_t k = 0; k < alloc.channel_count; ++k) {
        const auto& order = alloc.channel_order[k];
        const auto gains = deployment.gains(k);

        // weakest first: the running sums hold exactly the nodes decoded after n
        std::fill(sums.begin(), sums.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            interference[*it] = accumulated(*it);
            sums[at(alloc.time_of[*it])] += powers_mw[*it] * gains[*it];
        }
        if (model == ReceiverModel::plain) {
            // without SIC the nodes decoded before n interfere as well
            std::fill(sums.begin(), sums.end(), 0.0);
            for (std::size_t n : order) {
                interference[n] += accumulated(n);
                sums[at(alloc.time_of[n])] += powers_mw[n] * gains[n];
            }
        }
        for (std::size_t n : order)
            report.sinr[n] = powers_mw[n] * gains[n] / (interference[n] + noise);
    }
    for (std::size_t n = 0; n < n_count; ++n)
        report.rate_bps[n] = shannon_rate(report.sinr[n], bw);
    finish_report(report, alloc);
    return report;
}

double min_rate(const RateReport& report)
{
    double m = std::numeric_limits<double>::infinity();
    for (double r : report.rate_bps)
        if (!std::isnan(r))
            m = std::min(m, r);
    return std::isinf(m) ? 0.0 : m;
}

RateReport oma_min_rate(const Deployment& deployment, const Allocation& alloc,
                        const RadioProfile& profile, std::span<const double> powers_mw)
{
    check_inputs(powers_mw, alloc, deployment, false);
    const std::size_t n_count = deployment.node_count();
    const double share = profile.bandwidth_hz() / static_cast<double>(n_count);

    RateReport report;
    report.model = ReceiverModel::oma;
    report.sinr.resize(n_count);
    report.rate_bps.resize(n_count);
    for (std::size_t n = 0; n < n_count; ++n) {
        const std::size_t k = at(alloc.channel_of[n]);
        report.sinr[n] = powers_mw[n] * deployment.gain(k, n) / deployment.noise_variance_mw();
        report.rate_bps[n] = shannon_rate(report.sinr[n], share);
    }
    finish_report(report, alloc);
    return report;
}

} // namespace nomalpwa
