#include "nomalpwa/radio_profile.hpp"

#include "nomalpwa/errors.hpp"
#include "nomalpwa/units.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nomalpwa {

double noise_variance_mw(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("bandwidth must be positive");
    return dbm_to_mw(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

double transmission_time_s(int spreading_factor, double payload_bits, double bandwidth_hz)
{
    if (spreading_factor < 1)
        throw ConfigError("spreading factor must be >= 1");
    if (!(payload_bits > 0.0))
        throw ConfigError("payload bits must be positive");
    if (!(bandwidth_hz > 0.0))
        throw ConfigError("bandwidth must be positive");
    const double symbols = payload_bits / spreading_factor;
    return symbols * std::ldexp(1.0, spreading_factor) / bandwidth_hz;
}

double sensitivity_threshold_mw(double noise_variance_mw, double demod_snr_db)
{
    return noise_variance_mw * db_to_linear(demod_snr_db);
}

double default_demod_snr_db(int spreading_factor)
{
    return -7.5 - 2.5 * (spreading_factor - 7);
}

RadioProfile::RadioProfile(RadioSettings settings)
    : settings_(std::move(settings))
{
    const auto& s = settings_;
    if (s.sf_values.empty())
        throw ConfigError("at least one spreading factor is required");
    if (!s.demod_snr_db.empty() && s.demod_snr_db.size() != s.sf_values.size())
        throw ConfigError("demod_snr_db must list one value per spreading factor");
    if (s.p_min_dbm > s.p_max_dbm)
        throw ConfigError("p_min must not exceed p_max");

    noise_mw_ = nomalpwa::noise_variance_mw(s.bandwidth_hz, s.noise_figure_db);
    p_min_mw_ = dbm_to_mw(s.p_min_dbm);
    p_max_mw_ = dbm_to_mw(s.p_max_dbm);

    for (std::size_t f = 0; f < s.sf_values.size(); ++f) {
        const int sf = s.sf_values[f];
        times_s_.push_back(nomalpwa::transmission_time_s(sf, s.payload_bits, s.bandwidth_hz));
        const double snr = s.demod_snr_db.empty() ? default_demod_snr_db(sf) : s.demod_snr_db[f];
        snr_db_.push_back(snr);
        sensitivity_mw_.push_back(sensitivity_threshold_mw(noise_mw_, snr));
    }
}

std::string format_profile(const RadioProfile& profile)
{
    std::ostringstream out;
    char line[256];
    const auto& s = profile.settings();
    std::snprintf(line, sizeof line, "bandwidth_hz        = %.1f\n", s.bandwidth_hz);
    out << line;
    std::snprintf(line, sizeof line, "noise_figure_db     = %.3f\n", s.noise_figure_db);
    out << line;
    std::snprintf(line, sizeof line, "payload_bits        = %.3f\n", s.payload_bits);
    out << line;
    std::snprintf(line, sizeof line, "noise_variance_dbm  = %.6f\n", mw_to_dbm(profile.noise_variance_mw()));
    out << line;
    std::snprintf(line, sizeof line, "noise_variance_mw   = %.9e\n", profile.noise_variance_mw());
    out << line;
    std::snprintf(line, sizeof line, "p_min_mw            = %.9e\n", profile.p_min_mw());
    out << line;
    std::snprintf(line, sizeof line, "p_max_mw            = %.9e\n", profile.p_max_mw());
    out << line;
    out << "f,sf,time_ms,demod_snr_db,sensitivity_dbm,sensitivity_mw\n";
    for (std::size_t f = 0; f < profile.time_count(); ++f) {
        std::snprintf(line, sizeof line, "%zu,%d,%.6f,%.3f,%.6f,%.9e\n", f + 1,
                      profile.spreading_factor(f), profile.transmission_time_s(f) * 1e3,
                      profile.demod_snr_db(f), mw_to_dbm(profile.sensitivity_mw(f)),
                      profile.sensitivity_mw(f));
        out << line;
    }
    return out.str();
}

} // namespace nomalpwa
