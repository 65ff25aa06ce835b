#pragma once

#include "nomalpwa/radio_profile.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nomalpwa {

/// How small-scale fading is drawn.
enum class FadingModel {
    per_node,    ///< one draw per node, shared by all channels
    per_channel, ///< an independent draw per (channel, node)
};
FadingModel parse_fading_model(std::string_view name);
std::string_view to_string(FadingModel m);

struct NetworkConfig {
    std::size_t node_count = 100;
    double radius_m = 1000.0;
    std::size_t channel_count = 8;
    std::size_t time_slot_count = 6;
    double path_loss_exponent = 3.5;
    double path_loss_constant = 1.0;
    std::uint64_t rng_seed = 1;
    FadingModel fading = FadingModel::per_node;
    /// Nodes closer than this are clamped to it (keeps d^-beta finite).
    double min_distance_m = 1.0;
};

/// Throws ConfigError on hard violations; returns soft warnings
/// (path-loss exponent outside [3, 5]).
std::vector<std::string> validate(const NetworkConfig& config);

/// A random network instance: node distances, per-channel fading and gains.
/// Immutable after construction; matrices are channel-major (k * N + n).
class Deployment {
public:
    /// Assembles a deployment from explicit distances and a K x N fading
    /// matrix; gains follow g = eta * h * d^-beta.
    static Deployment from_parts(std::vector<double> distances_m,
                                 std::vector<double> fading,
                                 std::size_t channel_count,
                                 double radius_m,
                                 double path_loss_constant,
                                 double path_loss_exponent,
                                 double noise_variance_mw);

    std::size_t node_count() const noexcept { return distances_.size(); }
    std::size_t channel_count() const noexcept { return channels_; }
    double radius_m() const noexcept { return radius_; }
    double noise_variance_mw() const noexcept { return noise_mw_; }

    std::span<const double> distances_m() const noexcept { return distances_; }
    double distance_m(std::size_t n) const;
    double fading(std::size_t k, std::size_t n) const;
    double gain(std::size_t k, std::size_t n) const;
    double normalized_gain(std::size_t k, std::size_t n) const;

    /// Channel-k row of the gain matrix.
    std::span<const double> gains(std::size_t k) const;

private:
    Deployment() = default;
    std::size_t flat(std::size_t k, std::size_t n) const;

    std::vector<double> distances_;
    std::vector<double> fading_;
    std::vector<double> gains_;
    std::vector<double> normalized_;
    std::size_t channels_ = 0;
    double radius_ = 0.0;
    double noise_mw_ = 0.0;
};

/// Draws node distances area-uniformly on the disc (d = r sqrt(u)) and
/// unit-mean exponential fading (see FadingModel).
Deployment generate_deployment(const NetworkConfig& config, const RadioProfile& profile);

/// g[k][n] / sigma^2. Throws UsageError on bad indices.
double normalized_gain(const Deployment& deployment, std::size_t k, std::size_t n);

} // namespace nomalpwa
