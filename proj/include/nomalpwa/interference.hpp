#pragma once

#include "nomalpwa/clustering.hpp"
#include "nomalpwa/network_model.hpp"
#include "nomalpwa/radio_profile.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace nomalpwa {

enum class ReceiverModel { noma_sic, plain, oma };
ReceiverModel parse_receiver_model(std::string_view name);
std::string_view to_string(ReceiverModel m);

/// Fraction of the desired node's time on air overlapped by an interferer,
/// both starting together: min(T_desired, T_interferer) / T_desired.
double collision_factor(double desired_time_s, double interferer_time_s);

/// Shannon rate B log2(1 + sinr).
double shannon_rate(double sinr, double bandwidth_hz);

struct InterferenceTerms {
    double intra = 0.0; ///< same (channel, time) cluster
    double inter = 0.0; ///< same channel, other times, weighted by collision factor
};

/// Interference seen by node n, with or without SIC. Under SIC only nodes
/// decoded after n (lower normalized gain on the channel) remain.
/// Direct summation over the channel members.
InterferenceTerms interference_at(std::size_t n, bool sic, std::span<const double> powers_mw,
                                  const Allocation& alloc, const Deployment& deployment,
                                  const RadioProfile& profile);

/// SINR without interference cancellation.
double sinr_plain(std::size_t n, std::span<const double> powers_mw, const Allocation& alloc,
                  const Deployment& deployment, const RadioProfile& profile);

/// SINR after SIC in descending normalized-gain order.
double sinr_noma(std::size_t n, std::span<const double> powers_mw, const Allocation& alloc,
                 const Deployment& deployment, const RadioProfile& profile);

struct RateReport {
    ReceiverModel model = ReceiverModel::noma_sic;
    std::vector<double> sinr;
    std::vector<double> rate_bps;
    double min_rate_bps = 0.0;
    double mean_rate_bps = 0.0;
    /// Minimum rate per channel; NaN for channels without members.
    std::vector<double> channel_min_rate_bps;
};

/// Evaluates every node under the chosen receiver model in O(N * F) using
/// per-time running sums along each channel's decode order.
/// OMA uses the node's gain on its assigned channel and a 1/N time share.
RateReport evaluate_rates(ReceiverModel model, std::span<const double> powers_mw,
                          const Allocation& alloc, const Deployment& deployment,
                          const RadioProfile& profile);

/// Minimum over nodes with a defined rate.
double min_rate(const RateReport& report);

/// TDMA baseline: each of the N nodes alone in 1/N of the time.
RateReport oma_min_rate(const Deployment& deployment, const Allocation& alloc,
                        const RadioProfile& profile, std::span<const double> powers_mw);

} // namespace nomalpwa
