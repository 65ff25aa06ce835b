#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nomalpwa {

/// Noise floor -174 + 10 log10(B) + NF, returned in milliwatts.
double noise_variance_mw(double bandwidth_hz, double noise_figure_db);

/// Time on air of b payload bits at spreading factor sf: (b / sf) * 2^sf / B.
/// Fractional symbol counts are allowed.
double transmission_time_s(int spreading_factor, double payload_bits, double bandwidth_hz);

/// Receiver sensitivity in milliwatts: the noise floor raised by the
/// demodulation SNR (a dB-domain sum).
double sensitivity_threshold_mw(double noise_variance_mw, double demod_snr_db);

/// Default demodulation SNR for a LoRa spreading factor. SF7..SF12 give
/// -7.5 .. -20 dB in 2.5 dB steps (SX1272/73 receiver table).
double default_demod_snr_db(int spreading_factor);

/// User-facing physical-layer knobs. Everything else is derived.
struct RadioSettings {
    double bandwidth_hz = 125'000.0;
    std::vector<int> sf_values = {7, 8, 9, 10, 11, 12};
    double payload_bits = 70.0;
    double noise_figure_db = 6.0;
    /// Per-SF demodulation SNR; empty means default_demod_snr_db() per SF.
    std::vector<double> demod_snr_db;
    double p_min_dbm = 0.0;
    double p_max_dbm = 20.0;
};

/// Immutable LoRa-style radio profile. Time index f (0-based) corresponds to
/// sf_values[f]; with the default SF list, larger f means longer time on air.
class RadioProfile {
public:
    RadioProfile() : RadioProfile(RadioSettings{}) {}
    explicit RadioProfile(RadioSettings settings);

    const RadioSettings& settings() const noexcept { return settings_; }

    double bandwidth_hz() const noexcept { return settings_.bandwidth_hz; }
    double payload_bits() const noexcept { return settings_.payload_bits; }
    std::size_t time_count() const noexcept { return times_s_.size(); }
    int spreading_factor(std::size_t f) const { return settings_.sf_values.at(f); }

    double noise_variance_mw() const noexcept { return noise_mw_; }
    double transmission_time_s(std::size_t f) const { return times_s_.at(f); }
    const std::vector<double>& transmission_times_s() const noexcept { return times_s_; }
    double demod_snr_db(std::size_t f) const { return snr_db_.at(f); }
    double sensitivity_mw(std::size_t f) const { return sensitivity_mw_.at(f); }
    const std::vector<double>& sensitivities_mw() const noexcept { return sensitivity_mw_; }

    double p_min_mw() const noexcept { return p_min_mw_; }
    double p_max_mw() const noexcept { return p_max_mw_; }

private:
    RadioSettings settings_;
    double noise_mw_;
    std::vector<double> times_s_;
    std::vector<double> snr_db_;
    std::vector<double> sensitivity_mw_;
    double p_min_mw_;
    double p_max_mw_;
};

/// Human-readable audit dump of the derived constants (used by `print-profile`).
std::string format_profile(const RadioProfile& profile);

} // namespace nomalpwa
