#include "nomalpwa/time_allocation.hpp"

#include "nomalpwa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nomalpwa {

TimeStrategy parse_time_strategy(std::string_view name)
{
    if (name == "unfair") return TimeStrategy::unfair;
    if (name == "random") return TimeStrategy::random;
    if (name == "fair") return TimeStrategy::fair;
    if (name == "distance") return TimeStrategy::distance;
    throw ConfigError("unknown time strategy '" + std::string(name) +
                      "' (unfair|random|fair|distance)");
}

std::string_view to_string(TimeStrategy s)
{
    switch (s) {
    case TimeStrategy::unfair: return "unfair";
    case TimeStrategy::random: return "random";
    case TimeStrategy::fair: return "fair";
    case TimeStrategy::distance: return "distance";
    }
    return "?";
}

std::vector<std::size_t> unfair_counts(std::size_t n, std::size_t time_count)
{
    if (time_count == 0)
        throw UsageError("time_count must be >= 1");
    std::vector<std::size_t> counts(time_count, n / time_count);
    const std::size_t extra = n % time_count;
    // group g holds time index F-1-g
    for (std::size_t g = 0; g < extra; ++g)
        ++counts[time_count - 1 - g];
    return counts;
}

FairCounts fair_counts(std::size_t n, std::span<const double> times_s)
{
    const std::size_t f_count = times_s.size();
    if (f_count == 0)
        throw UsageError("at least one transmission time is required");

    double inverse_sum = 0.0;
    for (double t : times_s) {
        if (!(t > 0.0))
            throw UsageError("transmission times must be positive");
        inverse_sum += 1.0 / t;
    }

    FairCounts out;
    out.targets.resize(f_count);
    std::vector<long long> rounded(f_count);
    std::vector<double> frac(f_count);
    long long rounded_sum = 0;
    for (std::size_t f = 0; f < f_count; ++f) {
        out.targets[f] = static_cast<double>(n) / times_s[f] / inverse_sum;
        rounded[f] = std::llround(out.targets[f]);
        frac[f] = out.targets[f] - std::floor(out.targets[f]);
        rounded_sum += rounded[f];
    }
    long long j = static_cast<long long>(n) - rounded_sum;

    std::vector<std::size_t> order(f_count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    if (j >= 0) {
        // +1 for the j entries with the largest fractional part
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
        for (std::size_t i = 0; i < order.size() && j > 0; ++i, --j)
            ++rounded[order[i]];
    } else {
        // -1 for |j| entries that were rounded up (fraction above one half),
        // closest to one half first
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return frac[a] < frac[b]; });
        for (std::size_t i = 0; i < order.size() && j < 0; ++i) {
            if (frac[order[i]] > 0.5) {
                --rounded[order[i]];
                ++j;
            }
        }
    }

    if (j != 0) {
        // Fallback: spread the remaining deficit over the entries whose
        // fraction is nearest one half, decrementing before incrementing.
        out.fallback_used = true;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(frac[a] - 0.5) < std::abs(frac[b] - 0.5);
        });
        while (j < 0) {
            bool moved = false;
            for (std::size_t i = 0; i < order.size() && j < 0; ++i) {
                if (rounded[order[i]] > 0) {
                    --rounded[order[i]];
                    ++j;
                    moved = true;
                }
            }
            if (!moved)
                break;
        }
        for (std::size_t i = 0; j > 0; i = (i + 1) % order.size(), --j)
            ++rounded[order[i]];
    }

    out.counts.resize(f_count);
    for (std::size_t f = 0; f < f_count; ++f)
        out.counts[f] = static_cast<std::size_t>(rounded[f]);
    return out;
}

std::size_t distance_time_index(double distance_m, double radius_m, std::size_t time_count)
{
    if (time_count == 0)
        throw UsageError("time_count must be >= 1");
    if (!(distance_m > 0.0) || distance_m > radius_m)
        throw AssignmentError("distance " + std::to_string(distance_m) + " m is outside (0, " +
                              std::to_string(radius_m) + "]");
    const double f_count = static_cast<double>(time_count);
    // (f - 1) r / F < d <= f r / F, written with 1-based f
    for (std::size_t f = 1; f <= time_count; ++f) {
        const double upper = static_cast<double>(f) * radius_m / f_count;
        if (distance_m <= upper)
            return f - 1;
    }
    return time_count - 1;
}

namespace {

void require_channels(const Allocation& alloc)
{
    if (alloc.channel_order.size() != alloc.channel_count)
        throw UsageError("allocation has no channel order");
}

// Walks each channel's decode order, handing out count[f] nodes per time
// index in the order given by `sequence`.
Allocation assign_in_order(Allocation alloc, std::size_t time_count, const auto& counts_for,
                           const std::vector<std::size_t>& sequence)
{
    for (std::size_t k = 0; k < alloc.channel_count; ++k) {
        const auto& members = alloc.channel_order[k];
        const std::vector<std::size_t> counts = counts_for(members.size());
        std::size_t pos = 0;
        for (std::size_t f : sequence)
            for (std::size_t c = 0; c < counts[f]; ++c)
                alloc.time_of[members[pos++]] = static_cast<int>(f);
    }
    alloc.time_count = time_count;
    return alloc;
}

} // namespace

Allocation allocate_time_unfair(Allocation alloc, const RadioProfile& profile)
{
    require_channels(alloc);
    const std::size_t f_count = profile.time_count();
    std::vector<std::size_t> sequence(f_count);
    for (std::size_t g = 0; g < f_count; ++g)
        sequence[g] = f_count - 1 - g;
    return assign_in_order(std::move(alloc), f_count,
                           [&](std::size_t n) { return unfair_counts(n, f_count); }, sequence);
}

Allocation allocate_time_random(Allocation alloc, const RadioProfile& profile, Rng& rng)
{
    require_channels(alloc);
    const std::size_t f_count = profile.time_count();
    // channel-major walk keeps the draw order independent of node ids
    for (const auto& members : alloc.channel_order)
        for (std::size_t n : members)
            alloc.time_of[n] = static_cast<int>(rng.index(f_count));
    alloc.time_count = f_count;
    return alloc;
}

Allocation allocate_time_fair(Allocation alloc, const RadioProfile& profile)
{
    require_channels(alloc);
    const std::size_t f_count = profile.time_count();
    std::vector<std::size_t> sequence(f_count);
    std::iota(sequence.begin(), sequence.end(), std::size_t{0});
    bool fallback = false;
    auto counts_for = [&](std::size_t n) {
        auto fc = fair_counts(n, profile.transmission_times_s());
        fallback = fallback || fc.fallback_used;
        return fc.counts;
    };
    alloc = assign_in_order(std::move(alloc), f_count, counts_for, sequence);
    alloc.fair_repair_fallback = fallback;
    return alloc;
}

Allocation allocate_time_distance(Allocation alloc, const Deployment& deployment,
                                  const RadioProfile& profile)
{
    require_channels(alloc);
    const std::size_t f_count = profile.time_count();
    for (std::size_t n = 0; n < alloc.node_count(); ++n)
        alloc.time_of[n] = static_cast<int>(
            distance_time_index(deployment.distance_m(n), deployment.radius_m(), f_count));
    alloc.time_count = f_count;
    return alloc;
}

} // namespace nomalpwa
