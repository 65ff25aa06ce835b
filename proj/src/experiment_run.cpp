#include "nomalpwa/experiment.hpp"

#include "nomalpwa/errors.hpp"
#include "nomalpwa/network_model.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace nomalpwa {

std::string_view to_string(RowKind k)
{
    switch (k) {
    case RowKind::trial: return "trial";
    case RowKind::mean: return "mean";
    case RowKind::p10: return "p10";
    }
    return "?";
}

std::string_view csv_header()
{
    return "row_type,nodes,trial,seed,channel_strategy,time_strategy,power_strategy,"
           "receiver_model,min_rate_bps,mean_rate_bps,channel_min_rate_bps,wall_time_s,status";
}

namespace {

std::string sci(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto at = line.find(sep);
        out.push_back(line.substr(0, at));
        if (at == std::string_view::npos)
            return out;
        line.remove_prefix(at + 1);
    }
}

double parse_double(std::string_view s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return std::stod(std::string(s));
}

RowKind parse_row_kind(std::string_view s)
{
    if (s == "trial") return RowKind::trial;
    if (s == "mean") return RowKind::mean;
    if (s == "p10") return RowKind::p10;
    throw UsageError("unknown row_type '" + std::string(s) + "'");
}

} // namespace

std::string format_csv_row(const ResultRow& r)
{
    std::string channel_mins;
    for (std::size_t k = 0; k < r.channel_min_rate_bps.size(); ++k) {
        if (k) channel_mins += ';';
        channel_mins += sci(r.channel_min_rate_bps[k]);
    }
    std::string line;
    line += to_string(r.kind);
    line += ',' + std::to_string(r.node_count);
    line += ',' + std::to_string(r.trial);
    line += ',' + (r.seed ? std::to_string(*r.seed) : std::string());
    line += ',' + std::string(to_string(r.channel_strategy));
    line += ',' + std::string(to_string(r.time_strategy));
    line += ',' + std::string(to_string(r.power_strategy));
    line += ',' + std::string(to_string(r.model));
    line += ',' + sci(r.min_rate_bps);
    line += ',' + sci(r.mean_rate_bps);
    line += ',' + channel_mins;
    line += ',' + (r.wall_time_s ? sci(*r.wall_time_s) : std::string());
    line += ',' + r.status;
    return line;
}

void write_csv(std::ostream& out, const ResultTable& table)
{
    out << csv_header() << '\n';
    for (const auto& row : table.rows)
        out << format_csv_row(row) << '\n';
}

ResultTable read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw UsageError("not a result table: header does not match");
    ResultTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 13)
            throw UsageError("line " + std::to_string(line_no) + ": expected 13 fields");
        try {
            ResultRow r;
            r.kind = parse_row_kind(f[0]);
            r.node_count = std::stoull(std::string(f[1]));
            r.trial = std::stoull(std::string(f[2]));
            if (!f[3].empty())
                r.seed = std::stoull(std::string(f[3]));
            r.channel_strategy = parse_channel_strategy(f[4]);
            r.time_strategy = parse_time_strategy(f[5]);
            r.power_strategy = parse_power_strategy(f[6]);
            r.model = parse_receiver_model(f[7]);
            r.min_rate_bps = parse_double(f[8]);
            r.mean_rate_bps = parse_double(f[9]);
            if (!f[10].empty())
                for (auto v : split(f[10], ';'))
                    r.channel_min_rate_bps.push_back(parse_double(v));
            if (!f[11].empty())
                r.wall_time_s = parse_double(f[11]);
            r.status = std::string(f[12]);
            table.rows.push_back(std::move(r));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

ResultTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open " + path.string());
    try {
        return read_csv(in);
    } catch (const UsageError& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t node_count, std::size_t trial)
{
    return derive_seed(base_seed, {node_count, trial});
}

namespace {

using Clock = std::chrono::steady_clock;

// Stream labels under a trial seed.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kTimeStream = 2;

Allocation allocate_times(TimeStrategy strategy, const Allocation& channels,
                          const Deployment& deployment, const RadioProfile& profile,
                          std::uint64_t seed, ChannelStrategy channel_strategy)
{
    switch (strategy) {
    case TimeStrategy::unfair: return allocate_time_unfair(channels, profile);
    case TimeStrategy::fair: return allocate_time_fair(channels, profile);
    case TimeStrategy::distance: return allocate_time_distance(channels, deployment, profile);
    case TimeStrategy::random: {
        Rng rng(derive_seed(seed, {kTimeStream, static_cast<std::uint64_t>(channel_strategy)}));
        return allocate_time_random(channels, profile, rng);
    }
    }
    throw UsageError("unhandled time strategy");
}

struct PowerOutcome {
    std::vector<double> powers_mw;
    std::vector<std::string> flags;
    bool infeasible = false;
};

PowerOutcome allocate_powers(PowerStrategy strategy, const ExperimentConfig& config,
                             const Deployment& deployment, const Allocation& alloc,
                             const RadioProfile& profile)
{
    PowerOutcome out;
    if (strategy == PowerStrategy::max_power) {
        out.powers_mw.assign(deployment.node_count(), profile.p_max_mw());
        return out;
    }
    PowerOptions options;
    options.ordering = config.ordering;
    options.epsilon_bps = config.epsilon_bps;
    NetworkPowerResult result;
    try {
        result = optimize_powers(deployment, alloc, profile, options);
    } catch (const StructuralInfeasibility&) {
        options.relax_unreachable_sensitivity = true;
        try {
            result = optimize_powers(deployment, alloc, profile, options);
        } catch (const StructuralInfeasibility&) {
            out.infeasible = true;
            return out;
        }
        out.flags.push_back("sensitivity_relaxed");
    }
    std::size_t failures = 0;
    for (const auto& ch : result.channels)
        failures += ch.numerical_failures;
    if (failures)
        out.flags.push_back("numerical_failure");
    out.powers_mw = std::move(result.powers_mw);
    return out;
}

std::string join_flags(const std::vector<std::string>& flags)
{
    if (flags.empty())
        return "ok";
    std::string s;
    for (const auto& f : flags)
        s += (s.empty() ? "" : "+") + f;
    return s;
}

double percentile(std::vector<double> values, double q)
{
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace

std::vector<ResultRow> run_trial(const ExperimentConfig& config, std::size_t node_count,
                                 std::size_t trial)
{
    const RadioProfile profile(config.radio);
    const std::uint64_t seed = trial_seed(config.seed, node_count, trial);

    NetworkConfig net;
    net.node_count = node_count;
    net.radius_m = config.radius_m;
    net.channel_count = config.channel_count;
    net.time_slot_count = profile.time_count();
    net.path_loss_exponent = config.path_loss_exponent;
    net.path_loss_constant = config.path_loss_constant;
    net.min_distance_m = config.min_distance_m;
    net.rng_seed = seed;
    net.fading = config.fading;
    const Deployment deployment = generate_deployment(net, profile);

    std::vector<ResultRow> rows;
    for (auto channel_strategy : config.channel_strategies) {
        Allocation channels;
        if (channel_strategy == ChannelStrategy::roundrobin) {
            channels = allocate_channels_roundrobin(deployment, config.rank_by);
        } else {
            Rng rng(derive_seed(seed, {kChannelStream}));
            channels = allocate_channels_random(deployment, rng);
        }
        for (auto time_strategy : config.time_strategies) {
            const Allocation alloc =
                allocate_times(time_strategy, channels, deployment, profile, seed, channel_strategy);
            for (auto power_strategy : config.power_strategies) {
                const auto started = Clock::now();
                auto power = allocate_powers(power_strategy, config, deployment, alloc, profile);
                const double power_time = std::chrono::duration<double>(Clock::now() - started).count();
                if (alloc.fair_repair_fallback)
                    power.flags.insert(power.flags.begin(), "fair_fallback");

                for (auto model : config.models) {
                    const auto eval_started = Clock::now();
                    ResultRow row;
                    row.kind = RowKind::trial;
                    row.node_count = node_count;
                    row.trial = trial;
                    row.seed = seed;
                    row.channel_strategy = channel_strategy;
                    row.time_strategy = time_strategy;
                    row.power_strategy = power_strategy;
                    row.model = model;
                    if (power.infeasible) {
                        row.status = "infeasible";
                        row.channel_min_rate_bps.assign(config.channel_count,
                                                        std::numeric_limits<double>::quiet_NaN());
                    } else {
                        // an interference-free user is best served at full power
                        std::vector<double> oma_powers;
                        std::span<const double> powers = power.powers_mw;
                        if (model == ReceiverModel::oma && power_strategy == PowerStrategy::optimal) {
                            oma_powers.assign(node_count, profile.p_max_mw());
                            powers = oma_powers;
                        }
                        const auto report = evaluate_rates(model, powers, alloc, deployment, profile);
                        row.min_rate_bps = report.min_rate_bps;
                        row.mean_rate_bps = report.mean_rate_bps;
                        row.channel_min_rate_bps = report.channel_min_rate_bps;
                        row.status = join_flags(power.flags);
                    }
                    if (config.timing)
                        row.wall_time_s = power_time +
                            std::chrono::duration<double>(Clock::now() - eval_started).count();
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

namespace {

std::vector<std::vector<ResultRow>> run_trials(const ExperimentConfig& config, std::size_t node_count)
{
    std::vector<std::vector<ResultRow>> per_trial(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                per_trial[t] = run_trial(config, node_count, t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::min(config.workers, config.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return per_trial;
}

std::vector<ResultRow> aggregate(const std::vector<std::vector<ResultRow>>& per_trial)
{
    std::vector<ResultRow> out;
    const std::size_t combos = per_trial.front().size();
    for (RowKind kind : {RowKind::mean, RowKind::p10}) {
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<double> mins, means;
            for (const auto& rows : per_trial) {
                mins.push_back(rows[c].min_rate_bps);
                means.push_back(rows[c].mean_rate_bps);
            }
            ResultRow row = per_trial.front()[c];
            row.kind = kind;
            row.trial = per_trial.size();
            row.seed.reset();
            row.channel_min_rate_bps.clear();
            row.wall_time_s.reset();
            row.status = "ok";
            if (kind == RowKind::mean) {
                double a = 0.0, b = 0.0;
                for (std::size_t i = 0; i < mins.size(); ++i) {
                    a += mins[i];
                    b += means[i];
                }
                row.min_rate_bps = a / static_cast<double>(mins.size());
                row.mean_rate_bps = b / static_cast<double>(means.size());
            } else {
                row.min_rate_bps = percentile(mins, 0.1);
                row.mean_rate_bps = percentile(means, 0.1);
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

} // namespace

ResultTable run_experiment(const ExperimentConfig& config, std::ostream* csv)
{
    validate(config);
    ResultTable table;
    if (csv)
        *csv << csv_header() << '\n' << std::flush;

    for (std::size_t node_count : config.node_counts) {
        const auto per_trial = run_trials(config, node_count);
        const std::size_t first = table.rows.size();
        for (const auto& rows : per_trial)
            table.rows.insert(table.rows.end(), rows.begin(), rows.end());
        for (auto& row : aggregate(per_trial))
            table.rows.push_back(std::move(row));
        if (csv) {
            for (std::size_t i = first; i < table.rows.size(); ++i)
                *csv << format_csv_row(table.rows[i]) << '\n';
            csv->flush();
        }
    }
    return table;
}

} // namespace nomalpwa
