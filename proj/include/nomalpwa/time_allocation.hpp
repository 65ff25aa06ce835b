#pragma once

#include "nomalpwa/clustering.hpp"
#include "nomalpwa/network_model.hpp"
#include "nomalpwa/radio_profile.hpp"
#include "nomalpwa/rng.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace nomalpwa {

enum class TimeStrategy { unfair, random, fair, distance };
TimeStrategy parse_time_strategy(std::string_view name);
std::string_view to_string(TimeStrategy s);

/// Equal split of n nodes over F time indices. Group g (0-based, walked from
/// the head of the decode order) receives time index F-1-g; the n mod F
/// leftover nodes go one each to the first groups. Returned per time index.
std::vector<std::size_t> unfair_counts(std::size_t n, std::size_t time_count);

struct FairCounts {
    /// Real-valued targets n / T_f / sum_i(1 / T_i).
    std::vector<double> targets;
    /// Integer counts after repair; they sum to n.
    std::vector<std::size_t> counts;
    bool fallback_used = false;
};

/// Per-time node counts that equalize N^f * T_f, with the rounding repair.
FairCounts fair_counts(std::size_t n, std::span<const double> times_s);

/// The f (0-based) with f r / F < d <= (f + 1) r / F.
/// Throws AssignmentError when d is outside (0, r].
std::size_t distance_time_index(double distance_m, double radius_m, std::size_t time_count);

Allocation allocate_time_unfair(Allocation alloc, const RadioProfile& profile);
Allocation allocate_time_random(Allocation alloc, const RadioProfile& profile, Rng& rng);
Allocation allocate_time_fair(Allocation alloc, const RadioProfile& profile);
Allocation allocate_time_distance(Allocation alloc, const Deployment& deployment, const RadioProfile& profile);

} // namespace nomalpwa
