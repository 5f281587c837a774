// bluefeed-sim: train codebooks, run sweeps, and inspect single channel draws.
//
// Exit codes: 0 success, 1 config error, 2 runtime/numeric error, 3 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bluefeed/allocator.hpp"
#include "bluefeed/config.hpp"
#include "bluefeed/errors.hpp"
#include "bluefeed/estimator.hpp"
#include "bluefeed/flatfile.hpp"
#include "bluefeed/harness.hpp"
#include "bluefeed/results.hpp"

namespace {

using namespace bluefeed;

enum ExitCode { kOk = 0, kConfig = 1, kRuntime = 2, kIo = 3 };

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::optional<std::size_t> trials;
    std::optional<unsigned> threads;
};

ExperimentConfig resolve(const CommonOptions& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.trials) cfg.mc_trials = *o.trials;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.out.empty()) cfg.output_path = o.out;
    if (!o.format.empty()) cfg.format = parse_format(o.format);
    cfg.validate();
    return cfg;
}

void print_row(const char* key, const std::vector<double>& xs) {
    std::cout << key;
    for (double x : xs) std::cout << ' ' << format_double(x);
    std::cout << '\n';
}

int cmd_run(const CommonOptions& o) {
    const ExperimentConfig cfg = resolve(o);
    if (cfg.output_path.empty()) throw ConfigError("run needs an output path (--out or output.path)");
    const auto records = run_experiment(cfg);
    write_results(cfg.output_path, records, cfg.format);
    for (const auto& r : records)
        std::cerr << "K=" << r.sensors << " L=" << (r.bits ? std::to_string(*r.bits) : "full")
                  << " P=" << r.power_dbm << "dBm var=" << r.mean_variance << " se=" << r.std_error
                  << " iters=" << r.codebook_iterations << " (" << r.wall_time_s << " s)\n";
    return kOk;
}

int cmd_train(const CommonOptions& o, std::optional<std::size_t> sensors, std::optional<int> bits,
              std::optional<double> power_dbm, const std::string& network_out) {
    const ExperimentConfig cfg = resolve(o);
    if (cfg.output_path.empty()) throw ConfigError("train needs --out");
    const std::size_t k = sensors.value_or(cfg.sensor_counts.front());
    const int l = bits.value_or(cfg.feedback_bits.front());
    const double dbm = power_dbm.value_or(cfg.power_dbm.front());
    if (k == 0) throw ConfigError("--sensors must be positive");
    if (cfg.training_size < 4 * (std::size_t{1} << l)) throw ConfigError("training_size must be at least 4 * 2^L");

    const Scenario scenario = make_scenario(cfg, k);
    const Codebook book = build_codebook(cfg, scenario, l, dbm_to_watts(dbm));
    save_codebook(cfg.output_path, book);
    if (!network_out.empty()) {
        NetworkInstance net = scenario.network;
        net.params.total_power = dbm_to_watts(dbm);
        save_network(network_out, net);
    }
    std::cerr << "trained K=" << k << " L=" << l << " P=" << dbm << "dBm in " << book.iterations
              << " iterations, D_B=" << book.distortion_history.back()
              << (book.converged ? "" : " (iteration cap reached)") << '\n';
    return kOk;
}

int cmd_eval(const CommonOptions& o, const std::string& codebook_path, const std::string& network_path,
             std::size_t trial) {
    ExperimentConfig cfg = resolve(o);
    const Codebook book = load_codebook(codebook_path);
    if (!o.seed) cfg.master_seed = book.seed;

    Scenario scenario = make_scenario(cfg, book.sensors());
    if (!network_path.empty()) scenario.network = load_network(network_path);
    if (scenario.network.params.size() != book.sensors())
        throw ConfigError("network and codebook disagree on the number of sensors");

    const Trial t = evaluation_trial(scenario, book.total_power, trial);
    const AllocationResult alloc = optimal_gains(t.params, t.chan);
    const double full = blue_variance(t.params, alloc.gains, t.chan);
    const std::size_t index = select_index(t.params, book, t.chan);
    const double limited = blue_variance(t.params, book.codewords[index], t.chan);

    std::cout << "K " << book.sensors() << '\n' << "P_total_W " << format_double(book.total_power) << '\n';
    print_row("channel", t.chan.g);
    print_row("optimal_gains", alloc.gains.a);
    std::cout << "active_count " << alloc.active_count << '\n'
              << "optimal_variance " << format_double(full) << '\n'
              << "selected_index " << index << '\n';
    print_row("codeword", book.codewords[index].a);
    std::cout << "limited_variance " << format_double(limited) << '\n';
    return kOk;
}

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "JSON experiment config");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output path");
    sub->add_option("--format", o.format, "Result format: csv or jsonl");
    sub->add_option("--trials", o.trials, "Monte-Carlo trials per point");
    sub->add_option("--threads", o.threads, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limited-feedback power allocation for distributed BLUE estimation"};
    app.require_subcommand(1);

    CommonOptions run_opts, train_opts, eval_opts;
    auto* run = app.add_subcommand("run", "Run the full sweep and write averaged results");
    add_common(run, run_opts);

    auto* train = app.add_subcommand("train", "Train one codebook and save it");
    add_common(train, train_opts);
    std::optional<std::size_t> sensors;
    std::optional<int> bits;
    std::optional<double> power_dbm;
    std::string network_out;
    train->add_option("--sensors", sensors, "K (default: first entry of the config)");
    train->add_option("--bits", bits, "L (default: first entry of the config)");
    train->add_option("--power-dbm", power_dbm, "Total power in dBm (default: first sweep point)");
    train->add_option("--network-out", network_out, "Also write the network instance here");

    auto* eval = app.add_subcommand("eval", "Evaluate one channel realization against a saved codebook");
    add_common(eval, eval_opts);
    std::string codebook_path, network_path;
    std::size_t trial = 0;
    eval->add_option("--codebook", codebook_path, "Codebook file")->required();
    eval->add_option("--network", network_path, "Network file (default: regenerate from config and seed)");
    eval->add_option("--trial", trial, "Evaluation trial index selecting the channel draw");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*train) return cmd_train(train_opts, sensors, bits, power_dbm, network_out);
        if (*eval) return cmd_eval(eval_opts, codebook_path, network_path, trial);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
