#include "nomalpwa/clustering.hpp"

#include "nomalpwa/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace nomalpwa {

bool Allocation::has_times() const noexcept
{
    return !time_of.empty() &&
           std::none_of(time_of.begin(), time_of.end(), [](int t) { return t == kUnassigned; });
}

std::vector<std::size_t> Allocation::channel_sizes() const
{
    std::vector<std::size_t> sizes(channel_count, 0);
    for (int k : channel_of)
        ++sizes.at(static_cast<std::size_t>(k));
    return sizes;
}

std::vector<std::size_t> Allocation::cluster_sizes() const
{
    if (!has_times())
        throw UsageError("cluster sizes need a time allocation");
    std::vector<std::size_t> sizes(channel_count * time_count, 0);
    for (std::size_t n = 0; n < node_count(); ++n)
        ++sizes.at(static_cast<std::size_t>(channel_of[n]) * time_count + static_cast<std::size_t>(time_of[n]));
    return sizes;
}

ChannelStrategy parse_channel_strategy(std::string_view name)
{
    if (name == "roundrobin") return ChannelStrategy::roundrobin;
    if (name == "random") return ChannelStrategy::random;
    throw ConfigError("unknown channel strategy '" + std::string(name) + "' (roundrobin|random)");
}

std::string_view to_string(ChannelStrategy s)
{
    return s == ChannelStrategy::roundrobin ? "roundrobin" : "random";
}

RankBy parse_rank_by(std::string_view name)
{
    if (name == "mean") return RankBy::mean;
    if (name == "channel-0" || name == "channel0") return RankBy::channel0;
    throw ConfigError("unknown rank-by policy '" + std::string(name) + "' (mean|channel-0)");
}

std::string_view to_string(RankBy r)
{
    return r == RankBy::mean ? "mean" : "channel-0";
}

namespace {

// Descending value, ascending id on ties.
void sort_descending(std::vector<std::size_t>& ids, const auto& value_of)
{
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
        const double va = value_of(a);
        const double vb = value_of(b);
        if (va != vb) return va > vb;
        return a < b;
    });
}

} // namespace

std::vector<std::size_t> rank_nodes(const Deployment& deployment, RankBy rank_by)
{
    const std::size_t n = deployment.node_count();
    std::vector<double> stat(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (rank_by == RankBy::channel0) {
            stat[i] = deployment.normalized_gain(0, i);
        } else {
            double sum = 0.0;
            for (std::size_t k = 0; k < deployment.channel_count(); ++k)
                sum += deployment.normalized_gain(k, i);
            stat[i] = sum / static_cast<double>(deployment.channel_count());
        }
    }
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    sort_descending(ids, [&](std::size_t i) { return stat[i]; });
    return ids;
}

Allocation make_allocation(const Deployment& deployment, std::vector<int> channel_of)
{
    const std::size_t k_count = deployment.channel_count();
    if (channel_of.size() != deployment.node_count())
        throw UsageError("channel map must cover every node");

    Allocation alloc;
    alloc.channel_count = k_count;
    alloc.channel_of = std::move(channel_of);
    alloc.time_of.assign(alloc.channel_of.size(), kUnassigned);
    alloc.channel_order.resize(k_count);
    for (std::size_t n = 0; n < alloc.channel_of.size(); ++n) {
        const int k = alloc.channel_of[n];
        if (k < 0 || static_cast<std::size_t>(k) >= k_count)
            throw UsageError("channel index out of range for node " + std::to_string(n));
        alloc.channel_order[static_cast<std::size_t>(k)].push_back(n);
    }
    for (std::size_t k = 0; k < k_count; ++k)
        sort_descending(alloc.channel_order[k],
                        [&](std::size_t i) { return deployment.normalized_gain(k, i); });
    return alloc;
}

Allocation allocate_channels_roundrobin(const Deployment& deployment, RankBy rank_by)
{
    const auto ranked = rank_nodes(deployment, rank_by);
    const std::size_t k_count = deployment.channel_count();
    std::vector<int> channel_of(deployment.node_count());
    for (std::size_t m = 0; m < ranked.size(); ++m)
        channel_of[ranked[m]] = static_cast<int>(m % k_count);
    return make_allocation(deployment, std::move(channel_of));
}

Allocation allocate_channels_random(const Deployment& deployment, Rng& rng)
{
    std::vector<int> channel_of(deployment.node_count());
    for (auto& k : channel_of)
        k = static_cast<int>(rng.index(deployment.channel_count()));
    return make_allocation(deployment, std::move(channel_of));
}

} // namespace nomalpwa
