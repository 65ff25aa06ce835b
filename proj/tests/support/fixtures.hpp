#pragma once

#include "nomalpwa/network_model.hpp"

#include <vector>

namespace fixture {

/// Deployment on `channels` identical channels where node n has received
/// gain gains[n] (all nodes at 1 m, so fading == gain). Radius 10 m.
inline nomalpwa::Deployment flat_deployment(const std::vector<double>& gains, double sigma2,
                                            std::size_t channels = 1)
{
    std::vector<double> dist(gains.size(), 1.0);
    std::vector<double> fading;
    fading.reserve(gains.size() * channels);
    for (std::size_t k = 0; k < channels; ++k)
        fading.insert(fading.end(), gains.begin(), gains.end());
    return nomalpwa::Deployment::from_parts(dist, fading, channels, 10.0, 1.0, 3.5, sigma2);
}

} // namespace fixture
