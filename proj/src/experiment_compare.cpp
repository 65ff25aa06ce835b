#include "nomalpwa/experiment.hpp"

#include "nomalpwa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <tuple>

namespace nomalpwa {

StrategySelector StrategySelector::parse(std::string_view text)
{
    StrategySelector s;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text.remove_prefix(comma == std::string_view::npos ? text.size() : comma + 1);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("selector item '" + std::string(item) + "' is not key=value");
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        try {
            if (key == "channel") s.channel = parse_channel_strategy(value);
            else if (key == "time") s.time = parse_time_strategy(value);
            else if (key == "power") s.power = parse_power_strategy(value);
            else if (key == "model") s.model = parse_receiver_model(value);
            else throw UsageError("selector key '" + std::string(key) + "' (channel|time|power|model)");
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    return s;
}

bool StrategySelector::matches(const ResultRow& row) const
{
    return (!channel || *channel == row.channel_strategy) && (!time || *time == row.time_strategy) &&
           (!power || *power == row.power_strategy) && (!model || *model == row.model);
}

std::string StrategySelector::describe() const
{
    std::string out;
    auto add = [&](const char* key, auto value) {
        if (!value) return;
        out += (out.empty() ? "" : ",") + std::string(key) + "=" + std::string(to_string(*value));
    };
    add("channel", channel);
    add("time", time);
    add("power", power);
    add("model", model);
    return out.empty() ? "*" : out;
}

double db_ratio(double a, double b)
{
    if (a == b)
        return 0.0;
    if (b == 0.0)
        return std::numeric_limits<double>::infinity();
    if (a == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(a / b);
}

double sign_test_p_value(std::size_t wins, std::size_t losses)
{
    const std::size_t n = wins + losses;
    if (n == 0 || wins == 0)
        return 1.0;
    // P(X >= wins), X ~ Bin(n, 1/2), summed in log space
    const double log_half_n = -static_cast<double>(n) * std::log(2.0);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    double p = 0.0;
    for (std::size_t i = wins; i <= n; ++i) {
        const double log_choose = log_n_fact - std::lgamma(static_cast<double>(i) + 1.0) -
                                  std::lgamma(static_cast<double>(n - i) + 1.0);
        p += std::exp(log_choose + log_half_n);
    }
    return std::min(1.0, p);
}

namespace {

using PairKey = std::tuple<std::size_t, std::size_t, std::uint64_t>;

std::map<PairKey, const ResultRow*> index_rows(const ResultTable& table, const StrategySelector& sel)
{
    std::map<PairKey, const ResultRow*> out;
    for (const auto& row : table.rows) {
        if (row.kind != RowKind::trial || !sel.matches(row))
            continue;
        const PairKey key{row.node_count, row.trial, row.seed.value_or(0)};
        if (!out.emplace(key, &row).second)
            throw UsageError("selector '" + sel.describe() + "' matches several rows for nodes=" +
                             std::to_string(row.node_count) + " trial=" + std::to_string(row.trial) +
                             "; narrow it");
    }
    if (out.empty())
        throw UsageError("selector '" + sel.describe() + "' matches no trial rows");
    return out;
}

} // namespace

ComparisonSummary compare_strategies(const ResultTable& table, const StrategySelector& a,
                                     const StrategySelector& b)
{
    const auto rows_a = index_rows(table, a);
    const auto rows_b = index_rows(table, b);
    for (const auto& [key, row] : rows_a)
        if (!rows_b.contains(key))
            throw UsageError("no '" + b.describe() + "' row pairs with nodes=" +
                             std::to_string(row->node_count) + " trial=" + std::to_string(row->trial));
    for (const auto& [key, row] : rows_b)
        if (!rows_a.contains(key))
            throw UsageError("no '" + a.describe() + "' row pairs with nodes=" +
                             std::to_string(row->node_count) + " trial=" + std::to_string(row->trial));

    ComparisonSummary summary;
    summary.label_a = a.describe();
    summary.label_b = b.describe();

    std::map<std::size_t, std::vector<std::pair<double, double>>> by_n;
    for (const auto& [key, row] : rows_a)
        by_n[std::get<0>(key)].emplace_back(row->min_rate_bps, rows_b.at(key)->min_rate_bps);

    for (const auto& [n, pairs] : by_n) {
        PointComparison p;
        p.node_count = n;
        p.pairs = pairs.size();
        p.min_trial_db = std::numeric_limits<double>::infinity();
        double sum_a = 0.0, sum_b = 0.0, sum_db = 0.0;
        for (const auto& [va, vb] : pairs) {
            sum_a += va;
            sum_b += vb;
            const double db = db_ratio(va, vb);
            sum_db += db;
            p.min_trial_db = std::min(p.min_trial_db, db);
            if (va > vb) ++p.wins;
            else if (va < vb) ++p.losses;
            else ++p.ties;
        }
        const double count = static_cast<double>(pairs.size());
        p.mean_a_bps = sum_a / count;
        p.mean_b_bps = sum_b / count;
        p.mean_difference_bps = p.mean_a_bps - p.mean_b_bps;
        p.db_of_means = db_ratio(p.mean_a_bps, p.mean_b_bps);
        p.mean_trial_db = sum_db / count;
        p.sign_test_p = sign_test_p_value(p.wins, p.losses);
        summary.points.push_back(p);
    }
    return summary;
}

std::string format_comparison_csv(const ComparisonSummary& s)
{
    std::string out = "# a: " + s.label_a + "\n# b: " + s.label_b + "\n";
    out += "nodes,pairs,mean_a_bps,mean_b_bps,mean_difference_bps,db_of_means,mean_trial_db,"
           "min_trial_db,wins,losses,ties,sign_test_p\n";
    char buf[512];
    for (const auto& p : s.points) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e,%zu,%zu,%zu,%.8e\n",
                      p.node_count, p.pairs, p.mean_a_bps, p.mean_b_bps, p.mean_difference_bps,
                      p.db_of_means, p.mean_trial_db, p.min_trial_db, p.wins, p.losses, p.ties,
                      p.sign_test_p);
        out += buf;
    }
    return out;
}

} // namespace nomalpwa
