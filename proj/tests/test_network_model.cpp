#include "nomalpwa/errors.hpp"
#include "nomalpwa/network_model.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace nomalpwa;

TEST_CASE("gain follows eta * h * d^-beta")
{
    const Deployment d = Deployment::from_parts({1000.0}, {1.0}, 1, 1000.0, 1.0, 3.5, 1.981e-12);
    CHECK(d.gain(0, 0) == doctest::Approx(std::pow(1000.0, -3.5)).epsilon(1e-14));
    CHECK(d.gain(0, 0) == doctest::Approx(3.162e-11).epsilon(1e-3));
    CHECK(normalized_gain(d, 0, 0) == doctest::Approx(3.162e-11 / 1.981e-12).epsilon(1e-3));
    CHECK(normalized_gain(d, 0, 0) == doctest::Approx(15.96).epsilon(1e-3));
}

TEST_CASE("normalized gain is g / sigma^2")
{
    const Deployment a = Deployment::from_parts({1.0}, {2e-12}, 1, 10.0, 1.0, 3.5, 1e-12);
    CHECK(normalized_gain(a, 0, 0) == doctest::Approx(2.0));
    const Deployment b = Deployment::from_parts({1.0}, {1e-12}, 1, 10.0, 1.0, 3.5, 1e-12);
    CHECK(normalized_gain(b, 0, 0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(normalized_gain(a, 1, 0), UsageError);
    CHECK_THROWS_AS(normalized_gain(a, 0, 1), UsageError);
}

TEST_CASE("gain strictly decreases with distance")
{
    std::vector<double> dist;
    for (double r = 1.0; r <= 1000.0; r *= 1.3)
        dist.push_back(r);
    const std::vector<double> fading(dist.size(), 0.7);
    const Deployment d = Deployment::from_parts(dist, fading, 1, 1000.0, 2.0, 3.5, 1e-12);
    for (std::size_t i = 1; i < dist.size(); ++i)
        CHECK(d.gain(0, i) < d.gain(0, i - 1));
}

TEST_CASE("config validation")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 0;
    CHECK_THROWS_AS(generate_deployment(c, profile), ConfigError);
    c = {};
    c.channel_count = 0;
    CHECK_THROWS_AS(generate_deployment(c, profile), ConfigError);
    c = {};
    c.time_slot_count = 0;
    CHECK_THROWS_AS(generate_deployment(c, profile), ConfigError);
    c = {};
    c.radius_m = 0.0;
    CHECK_THROWS_AS(generate_deployment(c, profile), ConfigError);
    c = {};
    c.time_slot_count = 3;
    CHECK_THROWS_AS(generate_deployment(c, profile), ConfigError);

    c = {};
    c.path_loss_exponent = 2.0;
    CHECK(validate(c).size() == 1);
    c.path_loss_exponent = 4.0;
    CHECK(validate(c).empty());
}

TEST_CASE("same seed gives a bit-identical deployment")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 200;
    c.rng_seed = 42;
    for (auto model : {FadingModel::per_node, FadingModel::per_channel}) {
        c.fading = model;
        const auto a = generate_deployment(c, profile);
        const auto b = generate_deployment(c, profile);
        for (std::size_t n = 0; n < c.node_count; ++n) {
            CHECK(a.distance_m(n) == b.distance_m(n));
            for (std::size_t k = 0; k < c.channel_count; ++k)
                CHECK(a.fading(k, n) == b.fading(k, n));
        }
    }
    c.rng_seed = 43;
    const auto other = generate_deployment(c, profile);
    c.rng_seed = 42;
    CHECK(other.distance_m(0) != generate_deployment(c, profile).distance_m(0));
}

TEST_CASE("deployment geometry and invariants")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 10'000;
    c.rng_seed = 7;
    const auto d = generate_deployment(c, profile);
    double sum = 0.0;
    for (std::size_t n = 0; n < c.node_count; ++n) {
        const double dn = d.distance_m(n);
        CHECK(dn > 0.0);
        CHECK(dn <= c.radius_m);
        sum += dn;
        for (std::size_t k = 0; k < c.channel_count; ++k) {
            CHECK(d.gain(k, n) == c.path_loss_constant * d.fading(k, n) * std::pow(dn, -c.path_loss_exponent));
            CHECK(d.normalized_gain(k, n) > 0.0);
        }
    }
    // area-uniform disc: E[d] = 2r/3
    CHECK(sum / static_cast<double>(c.node_count) == doctest::Approx(2.0 / 3.0 * c.radius_m).epsilon(0.02));
}

TEST_CASE("per-node fading is shared across channels, per-channel fading is not")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 50;
    const auto shared = generate_deployment(c, profile);
    c.fading = FadingModel::per_channel;
    const auto independent = generate_deployment(c, profile);
    std::size_t differing = 0;
    for (std::size_t n = 0; n < c.node_count; ++n) {
        CHECK(shared.fading(3, n) == shared.fading(0, n));
        differing += independent.fading(3, n) != independent.fading(0, n);
    }
    CHECK(differing == c.node_count);
}

namespace {
double disc_cdf(double x) { return x * x; }
} // namespace

TEST_CASE("distance distribution is area-uniform (KS at 1%) and fading has unit mean")
{
    const RadioProfile profile;
    NetworkConfig c;
    c.node_count = 100'000;
    c.channel_count = 1;
    c.rng_seed = 2024;
    c.fading = FadingModel::per_channel;
    const auto d = generate_deployment(c, profile);

    std::vector<double> ratio(c.node_count);
    double fading_sum = 0.0;
    for (std::size_t n = 0; n < c.node_count; ++n) {
        ratio[n] = d.distance_m(n) / c.radius_m;
        fading_sum += d.fading(0, n);
    }
    const double ks = oracle::ks_statistic(ratio, disc_cdf);
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(c.node_count)));

    // unit-mean exponential: the sample mean has standard error 1/sqrt(n)
    const double mean = fading_sum / static_cast<double>(c.node_count);
    CHECK(std::abs(mean - 1.0) < 3.0 / std::sqrt(static_cast<double>(c.node_count)));
}
