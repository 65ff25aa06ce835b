// nomalpwa: command-line front end for the NOMA-LPWA resource allocation
// simulator.
//
//   nomalpwa run --config sweep.cfg --out results.csv [--seed N] [--workers N]
//                [--nodes 100,500] [--trials 20] [--channel-strategy roundrobin,random]
//                [--time-strategy unfair] [--power-strategy max_power,optimal]
//                [--models noma_sic,plain,oma] [--set key=value ...]
//   nomalpwa compare --input results.csv --a "channel=roundrobin" --b "channel=random"
//   nomalpwa print-profile [--config sweep.cfg] [--set bandwidth=250000]
//
// `run` writes the CSV plus a JSON sidecar <out>.meta.json holding the
// resolved configuration.

#include "nomalpwa/errors.hpp"
#include "nomalpwa/experiment.hpp"
#include "nomalpwa/radio_profile.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nomalpwa::ExperimentConfig;

struct Overrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> flags;
    std::vector<std::string> sets;
};

void add_flag(CLI::App* cmd, Overrides& o, const std::string& name, const std::string& help)
{
    cmd->add_option_function<std::string>(
        "--" + name, [&o, name](const std::string& v) { o.flags.emplace_back(name, v); }, help);
}

ExperimentConfig resolve(const Overrides& o)
{
    ExperimentConfig config;
    if (!o.config_path.empty())
        config = nomalpwa::load_config(o.config_path);
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw nomalpwa::ConfigError("--set expects key=value, got '" + s + "'");
        nomalpwa::set_config_value(config, s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, value] : o.flags)
        nomalpwa::set_config_value(config, key, value);
    return config;
}

int run_command(const Overrides& o)
{
    const ExperimentConfig config = resolve(o);
    nomalpwa::validate(config);
    if (config.output_path.empty())
        throw nomalpwa::ConfigError("no output path: pass --out PATH (or '-' for stdout)");

    if (config.output_path == "-") {
        nomalpwa::run_experiment(config, &std::cout);
        return 0;
    }

    const std::string meta_path = config.output_path + ".meta.json";
    std::ofstream meta(meta_path);
    if (!meta)
        throw nomalpwa::Error("cannot write " + meta_path);
    meta << nomalpwa::metadata_json(config);

    std::ofstream csv(config.output_path);
    if (!csv)
        throw nomalpwa::Error("cannot write " + config.output_path);
    const auto table = nomalpwa::run_experiment(config, &csv);
    if (!csv)
        throw nomalpwa::Error("write failed: " + config.output_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << config.output_path << " (+ "
              << meta_path << ")\n";
    return 0;
}

int compare_command(const std::vector<std::string>& inputs, const std::string& a,
                    const std::string& b, const std::string& out_path)
{
    nomalpwa::ResultTable table;
    for (const auto& path : inputs) {
        auto part = nomalpwa::read_csv_file(path);
        table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
    }
    const auto summary = nomalpwa::compare_strategies(table, nomalpwa::StrategySelector::parse(a),
                                                      nomalpwa::StrategySelector::parse(b));
    const std::string text = nomalpwa::format_comparison_csv(summary);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out || !(out << text))
            throw nomalpwa::Error("cannot write " + out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"NOMA-enabled LPWA resource allocation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nomalpwa::version()));

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV results");
    run->add_option("--config", run_opts.config_path, "Flat key = value config file");
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"out", "Output CSV path ('-' for stdout)"},
             {"seed", "Base seed (u64)"},
             {"workers", "Concurrent trial workers"},
             {"nodes", "Comma-separated node counts"},
             {"trials", "Trials per node count"},
             {"channel-strategy", "roundrobin,random"},
             {"time-strategy", "unfair,fair,random,distance"},
             {"power-strategy", "max_power,optimal"},
             {"models", "noma_sic,plain,oma"}})
        add_flag(run, run_opts, name, help);
    run->add_option("--set", run_opts.sets, "Override any config key (key=value)");

    std::vector<std::string> inputs;
    std::string sel_a, sel_b, compare_out;
    auto* compare = app.add_subcommand("compare", "Paired comparison of two strategy combinations");
    compare->add_option("--input", inputs, "Result CSV (repeatable)")->required();
    compare->add_option("--a", sel_a, "Selector, e.g. channel=roundrobin,model=noma_sic")->required();
    compare->add_option("--b", sel_b, "Selector for the reference side")->required();
    compare->add_option("--out", compare_out, "Summary CSV path (default stdout)");

    Overrides profile_opts;
    auto* profile = app.add_subcommand("print-profile", "Dump derived radio constants");
    profile->add_option("--config", profile_opts.config_path, "Flat key = value config file");
    profile->add_option("--set", profile_opts.sets, "Override any config key (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return run_command(run_opts);
        if (*compare)
            return compare_command(inputs, sel_a, sel_b, compare_out);
        if (*profile) {
            const auto config = resolve(profile_opts);
            std::cout << nomalpwa::format_profile(nomalpwa::RadioProfile(config.radio));
            return 0;
        }
    } catch (const nomalpwa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
