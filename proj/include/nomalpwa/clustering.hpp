#pragma once

#include "nomalpwa/network_model.hpp"
#include "nomalpwa/rng.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace nomalpwa {

inline constexpr int kUnassigned = -1;

/// Node -> (channel, time) assignment plus the per-channel SIC decode order.
/// Channel and time indices are 0-based here; reports print them 1-based.
struct Allocation {
    std::size_t channel_count = 0;
    std::size_t time_count = 0;
    std::vector<int> channel_of;
    std::vector<int> time_of;
    /// Members of each channel sorted by descending normalized gain on that
    /// channel, ties by ascending node id.
    std::vector<std::vector<std::size_t>> channel_order;
    /// Set when the fair time allocation needed the fallback repair.
    bool fair_repair_fallback = false;

    std::size_t node_count() const noexcept { return channel_of.size(); }
    bool has_times() const noexcept;

    /// N_k for each channel.
    std::vector<std::size_t> channel_sizes() const;
    /// N_k^f as a K x F row-major table. Requires has_times().
    std::vector<std::size_t> cluster_sizes() const;
};

enum class ChannelStrategy { roundrobin, random };
ChannelStrategy parse_channel_strategy(std::string_view name);
std::string_view to_string(ChannelStrategy s);

/// Statistic used to rank nodes before any channel is assigned.
enum class RankBy {
    mean,     ///< normalized gain averaged over all K channels
    channel0, ///< normalized gain on channel 0
};
RankBy parse_rank_by(std::string_view name);
std::string_view to_string(RankBy r);

/// Node ids sorted by the ranking statistic, strongest first.
std::vector<std::size_t> rank_nodes(const Deployment& deployment, RankBy rank_by);

/// Round-robin clustering: the node of global rank m (0-based) goes to
/// channel m mod K, so channel k takes ranks k, k+K, k+2K, ...
Allocation allocate_channels_roundrobin(const Deployment& deployment, RankBy rank_by = RankBy::mean);

/// Baseline: every node picks a channel uniformly at random.
Allocation allocate_channels_random(const Deployment& deployment, Rng& rng);

/// Builds an allocation from an explicit node -> channel map and fills the
/// decode order. Used by the strategies above and by tests.
Allocation make_allocation(const Deployment& deployment, std::vector<int> channel_of);

} // namespace nomalpwa
