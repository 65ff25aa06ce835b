#include "nomalpwa/experiment.hpp"

#include "nomalpwa/errors.hpp"
#include "nomalpwa/units.hpp"

#include <json.hpp>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace nomalpwa {

PowerStrategy parse_power_strategy(std::string_view name)
{
    if (name == "max_power") return PowerStrategy::max_power;
    if (name == "optimal") return PowerStrategy::optimal;
    throw ConfigError("unknown power strategy '" + std::string(name) + "' (max_power|optimal)");
}

std::string_view to_string(PowerStrategy s)
{
    return s == PowerStrategy::max_power ? "max_power" : "optimal";
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value)
{
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = value.find(',');
        const auto item = trim(value.substr(0, comma));
        if (!item.empty())
            items.push_back(item);
        if (comma == std::string_view::npos)
            break;
        value.remove_prefix(comma + 1);
    }
    return items;
}

double to_double(std::string_view key, std::string_view text)
{
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError(std::string(key) + ": '" + s + "' is not a number");
    return v;
}

std::uint64_t to_u64(std::string_view key, std::string_view text)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not a non-negative integer");
    return v;
}

bool to_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not a boolean");
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view key, std::string_view value, Parse parse)
{
    std::vector<T> out;
    for (auto item : split_list(value))
        out.push_back(parse(item));
    if (out.empty())
        throw ConfigError(std::string(key) + ": empty list");
    return out;
}

std::string fmt_double(double v)
{
    // shortest text that reads back to the same double
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& items, Fmt fmt)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += fmt(items[i]);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c)
{
    const auto str = [](auto v) { return std::string(to_string(v)); };
    const auto num = [](auto v) { return std::to_string(v); };
    const auto& r = c.radio;
    return {
        {"nodes", join(c.node_counts, num)},
        {"trials", std::to_string(c.trials)},
        {"seed", std::to_string(c.seed)},
        {"workers", std::to_string(c.workers)},
        {"channel_strategy", join(c.channel_strategies, str)},
        {"time_strategy", join(c.time_strategies, str)},
        {"power_strategy", join(c.power_strategies, str)},
        {"models", join(c.models, str)},
        {"fading", str(c.fading)},
        {"rank_by", str(c.rank_by)},
        {"ordering", str(c.ordering)},
        {"epsilon", fmt_double(c.epsilon_bps)},
        {"timing", c.timing ? "true" : "false"},
        {"radius", fmt_double(c.radius_m)},
        {"channels", std::to_string(c.channel_count)},
        {"path_loss_exponent", fmt_double(c.path_loss_exponent)},
        {"path_loss_constant", fmt_double(c.path_loss_constant)},
        {"min_distance", fmt_double(c.min_distance_m)},
        {"bandwidth", fmt_double(r.bandwidth_hz)},
        {"sf_values", join(r.sf_values, num)},
        {"payload_bits", fmt_double(r.payload_bits)},
        {"noise_figure", fmt_double(r.noise_figure_db)},
        {"demod_snr", r.demod_snr_db.empty() ? "default" : join(r.demod_snr_db, fmt_double)},
        {"p_min_dbm", fmt_double(r.p_min_dbm)},
        {"p_max_dbm", fmt_double(r.p_max_dbm)},
        {"out", c.output_path},
    };
}

} // namespace

void set_config_value(ExperimentConfig& c, std::string_view raw_key, std::string_view raw_value)
{
    std::string key(trim(raw_key));
    for (auto& ch : key)
        if (ch == '-') ch = '_';
    const std::string_view value = trim(raw_value);
    const auto size = [&](std::string_view v) { return static_cast<std::size_t>(to_u64(key, v)); };
    const auto real = [&](std::string_view v) { return to_double(key, v); };

    if (key == "nodes" || key == "node_counts")
        c.node_counts = parse_list<std::size_t>(key, value, size);
    else if (key == "trials") c.trials = size(value);
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "workers") c.workers = size(value);
    else if (key == "channel_strategy")
        c.channel_strategies = parse_list<ChannelStrategy>(key, value, parse_channel_strategy);
    else if (key == "time_strategy")
        c.time_strategies = parse_list<TimeStrategy>(key, value, parse_time_strategy);
    else if (key == "power_strategy")
        c.power_strategies = parse_list<PowerStrategy>(key, value, parse_power_strategy);
    else if (key == "models")
        c.models = parse_list<ReceiverModel>(key, value, parse_receiver_model);
    else if (key == "fading") c.fading = parse_fading_model(value);
    else if (key == "rank_by") c.rank_by = parse_rank_by(value);
    else if (key == "ordering") c.ordering = parse_ordering(value);
    else if (key == "epsilon") c.epsilon_bps = real(value);
    else if (key == "timing") c.timing = to_bool(key, value);
    else if (key == "radius") c.radius_m = real(value);
    else if (key == "channels") c.channel_count = size(value);
    else if (key == "path_loss_exponent") c.path_loss_exponent = real(value);
    else if (key == "path_loss_constant") c.path_loss_constant = real(value);
    else if (key == "min_distance") c.min_distance_m = real(value);
    else if (key == "bandwidth") c.radio.bandwidth_hz = real(value);
    else if (key == "sf_values")
        c.radio.sf_values = parse_list<int>(key, value, [&](std::string_view v) { return static_cast<int>(to_u64(key, v)); });
    else if (key == "payload_bits") c.radio.payload_bits = real(value);
    else if (key == "noise_figure") c.radio.noise_figure_db = real(value);
    else if (key == "demod_snr") {
        if (value == "default") c.radio.demod_snr_db.clear();
        else c.radio.demod_snr_db = parse_list<double>(key, value, real);
    }
    else if (key == "p_min_dbm") c.radio.p_min_dbm = real(value);
    else if (key == "p_max_dbm") c.radio.p_max_dbm = real(value);
    else if (key == "out") c.output_path = std::string(value);
    else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        try {
            set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void validate(const ExperimentConfig& c)
{
    if (c.node_counts.empty())
        throw ConfigError("nodes: at least one node count is required");
    for (auto n : c.node_counts)
        if (n < 1)
            throw ConfigError("nodes: every node count must be >= 1");
    if (c.trials < 1)
        throw ConfigError("trials must be >= 1");
    if (c.workers < 1)
        throw ConfigError("workers must be >= 1");
    if (c.channel_strategies.empty() || c.time_strategies.empty() || c.power_strategies.empty() ||
        c.models.empty())
        throw ConfigError("strategy and model lists must be non-empty");
    if (!(c.epsilon_bps > 0.0))
        throw ConfigError("epsilon must be positive");
    if (c.channel_count < 1)
        throw ConfigError("channels must be >= 1");
    if (!(c.radius_m > 0.0))
        throw ConfigError("radius must be positive");
    RadioProfile check(c.radio);
    (void)check;
}

std::string format_config(const ExperimentConfig& config)
{
    std::string out;
    for (const auto& [key, value] : config_entries(config)) {
        if (key == "out" && value.empty())
            continue;
        out += key + " = " + value + "\n";
    }
    return out;
}

std::string_view version()
{
    return NOMALPWA_VERSION;
}

std::string metadata_json(const ExperimentConfig& config)
{
    nlohmann::ordered_json j;
    j["tool"] = "nomalpwa";
    j["version"] = std::string(version());
    auto& cfg = j["config"];
    for (const auto& [key, value] : config_entries(config))
        cfg[key] = value;

    const RadioProfile profile(config.radio);
    auto& derived = j["derived"];
    derived["noise_variance_mw"] = profile.noise_variance_mw();
    derived["noise_variance_dbm"] = mw_to_dbm(profile.noise_variance_mw());
    derived["p_min_mw"] = profile.p_min_mw();
    derived["p_max_mw"] = profile.p_max_mw();
    for (std::size_t f = 0; f < profile.time_count(); ++f) {
        derived["spreading_factors"].push_back(profile.spreading_factor(f));
        derived["transmission_times_s"].push_back(profile.transmission_time_s(f));
        derived["demod_snr_db"].push_back(profile.demod_snr_db(f));
        derived["sensitivity_mw"].push_back(profile.sensitivity_mw(f));
    }
    j["csv_header"] = std::string(csv_header());
    return j.dump(2) + "\n";
}

} // namespace nomalpwa
