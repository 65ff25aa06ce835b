#include "nomalpwa/network_model.hpp"

#include "nomalpwa/errors.hpp"
#include "nomalpwa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nomalpwa {

FadingModel parse_fading_model(std::string_view name)
{
    if (name == "per_node") return FadingModel::per_node;
    if (name == "per_channel") return FadingModel::per_channel;
    throw ConfigError("unknown fading model '" + std::string(name) + "' (per_node|per_channel)");
}

std::string_view to_string(FadingModel m)
{
    return m == FadingModel::per_node ? "per_node" : "per_channel";
}

std::vector<std::string> validate(const NetworkConfig& config)
{
    if (config.node_count < 1)
        throw ConfigError("node_count must be >= 1");
    if (config.channel_count < 1)
        throw ConfigError("channel_count must be >= 1");
    if (config.time_slot_count < 1)
        throw ConfigError("time_slot_count must be >= 1");
    if (!(config.radius_m > 0.0))
        throw ConfigError("radius must be positive");
    if (!(config.path_loss_constant > 0.0))
        throw ConfigError("path_loss_constant must be positive");
    if (!(config.min_distance_m > 0.0) || config.min_distance_m > config.radius_m)
        throw ConfigError("min_distance must lie in (0, radius]");

    std::vector<std::string> warnings;
    if (config.path_loss_exponent < 3.0 || config.path_loss_exponent > 5.0)
        warnings.push_back("path_loss_exponent " + std::to_string(config.path_loss_exponent) +
                           " is outside the urban range [3, 5]");
    return warnings;
}

Deployment Deployment::from_parts(std::vector<double> distances_m, std::vector<double> fading,
                                  std::size_t channel_count, double radius_m,
                                  double path_loss_constant, double path_loss_exponent,
                                  double noise_variance_mw)
{
    const std::size_t n = distances_m.size();
    if (channel_count == 0 || fading.size() != channel_count * n)
        throw UsageError("fading matrix must be channel_count x node_count");
    if (!(noise_variance_mw > 0.0))
        throw UsageError("noise variance must be positive");

    Deployment d;
    d.channels_ = channel_count;
    d.radius_ = radius_m;
    d.noise_mw_ = noise_variance_mw;
    d.distances_ = std::move(distances_m);
    d.fading_ = std::move(fading);
    d.gains_.resize(d.fading_.size());
    d.normalized_.resize(d.fading_.size());
    for (std::size_t k = 0; k < channel_count; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t at = k * n + i;
            d.gains_[at] = path_loss_constant * d.fading_[at] * std::pow(d.distances_[i], -path_loss_exponent);
            d.normalized_[at] = d.gains_[at] / noise_variance_mw;
        }
    }
    return d;
}

std::size_t Deployment::flat(std::size_t k, std::size_t n) const
{
    if (k >= channels_ || n >= distances_.size())
        throw UsageError("channel/node index out of range: (" + std::to_string(k) + ", " +
                         std::to_string(n) + ")");
    return k * distances_.size() + n;
}

double Deployment::distance_m(std::size_t n) const
{
    if (n >= distances_.size())
        throw UsageError("node index out of range: " + std::to_string(n));
    return distances_[n];
}

double Deployment::fading(std::size_t k, std::size_t n) const { return fading_[flat(k, n)]; }
double Deployment::gain(std::size_t k, std::size_t n) const { return gains_[flat(k, n)]; }
double Deployment::normalized_gain(std::size_t k, std::size_t n) const { return normalized_[flat(k, n)]; }

std::span<const double> Deployment::gains(std::size_t k) const
{
    if (k >= channels_)
        throw UsageError("channel index out of range: " + std::to_string(k));
    return std::span<const double>(gains_).subspan(k * distances_.size(), distances_.size());
}

Deployment generate_deployment(const NetworkConfig& config, const RadioProfile& profile)
{
    validate(config);
    if (config.time_slot_count != profile.time_count())
        throw ConfigError("time_slot_count (" + std::to_string(config.time_slot_count) +
                          ") differs from the profile's SF count (" +
                          std::to_string(profile.time_count()) + ")");

    const std::size_t n = config.node_count;
    const std::size_t k = config.channel_count;
    Rng rng(config.rng_seed);

    std::vector<double> distances(n);
    for (auto& d : distances)
        d = std::max(config.min_distance_m, config.radius_m * std::sqrt(rng.uniform()));

    std::vector<double> fading(k * n);
    if (config.fading == FadingModel::per_channel) {
        for (auto& h : fading)
            h = rng.exponential();
    } else {
        for (std::size_t i = 0; i < n; ++i)
            fading[i] = rng.exponential();
        for (std::size_t c = 1; c < k; ++c)
            std::copy_n(fading.begin(), n, fading.begin() + static_cast<std::ptrdiff_t>(c * n));
    }

    return Deployment::from_parts(std::move(distances), std::move(fading), k, config.radius_m,
                                  config.path_loss_constant, config.path_loss_exponent,
                                  profile.noise_variance_mw());
}

double normalized_gain(const Deployment& deployment, std::size_t k, std::size_t n)
{
    return deployment.normalized_gain(k, n);
}

} // namespace nomalpwa
