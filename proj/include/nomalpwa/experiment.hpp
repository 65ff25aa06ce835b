#pragma once

#include "nomalpwa/clustering.hpp"
#include "nomalpwa/interference.hpp"
#include "nomalpwa/power_allocation.hpp"
#include "nomalpwa/radio_profile.hpp"
#include "nomalpwa/time_allocation.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nomalpwa {

enum class PowerStrategy { max_power, optimal };
PowerStrategy parse_power_strategy(std::string_view name);
std::string_view to_string(PowerStrategy s);

/// A Monte-Carlo sweep. Strategy fields are lists; every combination is
/// evaluated on the same deployment of each (N, trial) so results pair up.
struct ExperimentConfig {
    std::vector<std::size_t> node_counts = {100, 200, 500};
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::vector<ChannelStrategy> channel_strategies = {ChannelStrategy::roundrobin};
    std::vector<TimeStrategy> time_strategies = {TimeStrategy::unfair};
    std::vector<PowerStrategy> power_strategies = {PowerStrategy::max_power};
    std::vector<ReceiverModel> models = {ReceiverModel::noma_sic};
    FadingModel fading = FadingModel::per_node;
    RankBy rank_by = RankBy::mean;
    OrderingConstraint ordering = OrderingConstraint::decode_order;
    double epsilon_bps = 1e-6;
    std::size_t workers = 1;
    /// Record per-row wall time. Off by default so reruns are byte-identical.
    bool timing = false;

    double radius_m = 1000.0;
    std::size_t channel_count = 8;
    double path_loss_exponent = 3.5;
    double path_loss_constant = 1.0;
    double min_distance_m = 1.0;
    RadioSettings radio;

    std::string output_path;
};

/// Parses the flat `key = value` format. `#` starts a comment; lists are
/// comma separated. Unknown keys and malformed values raise ConfigError
/// naming the line.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Applies one `key = value` setting (also used for command-line overrides).
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Throws ConfigError when the sweep cannot run.
void validate(const ExperimentConfig& config);

/// Canonical `key = value` text that parse_config() reads back unchanged.
std::string format_config(const ExperimentConfig& config);

/// JSON sidecar: resolved config, derived radio constants and version.
std::string metadata_json(const ExperimentConfig& config);

enum class RowKind { trial, mean, p10 };
std::string_view to_string(RowKind k);

struct ResultRow {
    RowKind kind = RowKind::trial;
    std::size_t node_count = 0;
    /// Trial index for trial rows; number of aggregated trials otherwise.
    std::size_t trial = 0;
    std::optional<std::uint64_t> seed;
    ChannelStrategy channel_strategy = ChannelStrategy::roundrobin;
    TimeStrategy time_strategy = TimeStrategy::unfair;
    PowerStrategy power_strategy = PowerStrategy::max_power;
    ReceiverModel model = ReceiverModel::noma_sic;
    double min_rate_bps = 0.0;
    double mean_rate_bps = 0.0;
    /// 1-based channel order; NaN for empty channels.
    std::vector<double> channel_min_rate_bps;
    std::optional<double> wall_time_s;
    /// "ok", "fair_fallback", "sensitivity_relaxed", "numerical_failure", ...
    std::string status = "ok";
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

std::string_view csv_header();
std::string format_csv_row(const ResultRow& row);
void write_csv(std::ostream& out, const ResultTable& table);
ResultTable read_csv(std::istream& in);
ResultTable read_csv_file(const std::filesystem::path& path);

/// Seed of the (N, trial) stream. Deployment and random strategies derive
/// their streams from it, so the value fully identifies a trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t node_count, std::size_t trial);

/// All trial rows for one (N, trial): every strategy combination and model.
std::vector<ResultRow> run_trial(const ExperimentConfig& config, std::size_t node_count,
                                 std::size_t trial);

/// Runs the whole sweep. Rows are emitted in canonical order (N, trial,
/// channel, time, power, model), followed per N by mean and p10 rows. When
/// `csv` is given the header and each completed N block are written and
/// flushed as they finish.
ResultTable run_experiment(const ExperimentConfig& config, std::ostream* csv = nullptr);

/// Selects one strategy combination, e.g. "channel=roundrobin,time=unfair,
/// power=max_power,model=noma_sic". Omitted fields match anything.
struct StrategySelector {
    std::optional<ChannelStrategy> channel;
    std::optional<TimeStrategy> time;
    std::optional<PowerStrategy> power;
    std::optional<ReceiverModel> model;

    static StrategySelector parse(std::string_view text);
    bool matches(const ResultRow& row) const;
    std::string describe() const;
};

struct PointComparison {
    std::size_t node_count = 0;
    std::size_t pairs = 0;
    double mean_a_bps = 0.0;
    double mean_b_bps = 0.0;
    double mean_difference_bps = 0.0;
    double db_of_means = 0.0;      ///< 10 log10(mean_a / mean_b)
    double mean_trial_db = 0.0;    ///< mean of per-trial 10 log10(a / b)
    double min_trial_db = 0.0;
    std::size_t wins = 0;          ///< trials with a > b
    std::size_t losses = 0;
    std::size_t ties = 0;
    double sign_test_p = 1.0;      ///< one-sided, H1: a > b
};

struct ComparisonSummary {
    std::string label_a;
    std::string label_b;
    std::vector<PointComparison> points;
};

/// 10 log10(a / b); 0 when both are zero, +/-inf when one is.
double db_ratio(double a, double b);

/// One-sided sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p_value(std::size_t wins, std::size_t losses);

/// Pairs trial rows of `a` and `b` by (N, trial, seed). Throws UsageError
/// when a key is missing on one side or a selector matches several rows.
ComparisonSummary compare_strategies(const ResultTable& table, const StrategySelector& a,
                                     const StrategySelector& b);

std::string format_comparison_csv(const ComparisonSummary& summary);

/// Library version string written to metadata.
std::string_view version();

} // namespace nomalpwa
