#include "bluefeed/harness.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bluefeed/allocator.hpp"
#include "bluefeed/errors.hpp"
#include "bluefeed/estimator.hpp"
#include "bluefeed/parallel.hpp"

namespace bluefeed {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Every input that changes the trained codebook.
std::string cache_key(const ExperimentConfig& c, const Scenario& s, int bits, double p_total) {
    std::ostringstream key;
    key << "v" << kFlatFileVersion << ";K=" << s.sensors << ";L=" << bits << ";P=" << format_double(p_total)
        << ";M=" << c.training_size << ";eps=" << format_double(c.epsilon) << ";cap=" << c.max_iterations
        << ";seed=" << c.master_seed << ";eta0=" << format_double(c.fading.nominal_gain)
        << ";d0=" << format_double(c.fading.ref_distance) << ";alpha=" << format_double(c.fading.path_loss_exp)
        << ";d=" << format_double(c.fading.min_distance) << "," << format_double(c.fading.max_distance)
        << ";ray=" << static_cast<int>(c.fading.normalization) << ";net=" << format_double(c.network.prior_variance)
        << "," << format_double(c.network.obs_gain_mean) << "," << format_double(c.network.obs_gain_variance) << ","
        << format_double(c.network.obs_noise_var_min) << "," << format_double(c.network.obs_noise_var_max) << ","
        << format_double(c.network.chan_noise_var) << "," << c.network.rescale_obs_gains << ","
        << format_double(c.network.obs_gain_power_target);
    return key.str();
}

ResultRecord make_record(std::size_t sensors, std::optional<int> bits, double power_dbm,
                         std::span<const double> variances) {
    const TrialSummary s = summarize(variances);
    ResultRecord r;
    r.sensors = sensors;
    r.bits = bits;
    r.power_dbm = power_dbm;
    r.power_watts = dbm_to_watts(power_dbm);
    r.mean_variance = s.mean;
    r.std_error = s.std_error;
    r.trials = variances.size();
    r.num_infinite_trials = s.infinite;
    return r;
}

}  // namespace

Scenario make_scenario(const ExperimentConfig& config, std::size_t sensors) {
    Scenario s;
    s.sensors = sensors;
    s.master_seed = config.master_seed;
    s.fading = config.fading;
    s.model = config.network;
    s.resample_geometry = config.resample_geometry;
    s.network.seed = config.master_seed;

    // Sensor i comes from its own substream, so the K-sensor network is the
    // first K sensors of every larger one.
    NetworkModel single = config.network;
    single.rescale_obs_gains = false;
    auto& params = s.network.params;
    params.prior_variance = config.network.prior_variance;
    params.total_power = dbm_to_watts(config.power_dbm.front());
    for (std::size_t i = 0; i < sensors; ++i) {
        Rng net_rng(derive_seed(config.master_seed, {stream::network, i}));
        const NetworkParams one = sample_network(single, 1, params.total_power, net_rng);
        params.obs_gains.push_back(one.obs_gains[0]);
        params.obs_noise_vars.push_back(one.obs_noise_vars[0]);
        params.chan_noise_vars.push_back(one.chan_noise_vars[0]);
        Rng geo_rng(derive_seed(config.master_seed, {stream::geometry, i}));
        s.network.distances.push_back(sample_distances(config.fading, 1, geo_rng)[0]);
    }
    if (config.network.rescale_obs_gains) rescale_obs_gains(params, config.network.obs_gain_power_target);
    return s;
}

Trial evaluation_trial(const Scenario& scenario, double p_total, std::size_t trial) {
    Trial t;
    const std::vector<double>* distances = &scenario.network.distances;
    std::vector<double> own_distances;
    if (scenario.resample_geometry) {
        Rng rng(derive_seed(scenario.master_seed, {stream::trial_geometry, scenario.sensors, trial}));
        t.params = sample_network(scenario.model, scenario.sensors, p_total, rng);
        own_distances = sample_distances(scenario.fading, scenario.sensors, rng);
        distances = &own_distances;
    } else {
        t.params = scenario.network.params.with_total_power(p_total);
    }
    Rng rng(derive_seed(scenario.master_seed, {stream::evaluation, scenario.sensors, trial}));
    t.chan = sample_fading(scenario.fading, *distances, rng);
    return t;
}

std::vector<ChannelRealization> training_channels(const Scenario& scenario, std::size_t count) {
    Rng rng(derive_seed(scenario.master_seed, {stream::training, scenario.sensors}));
    std::vector<ChannelRealization> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) out.push_back(sample_fading(scenario.fading, scenario.network.distances, rng));
    return out;
}

Codebook build_codebook(const ExperimentConfig& config, const Scenario& scenario, int bits, double p_total) {
    std::filesystem::path cached;
    if (!config.cache_dir.empty()) {
        char name[40];
        std::snprintf(name, sizeof(name), "codebook-%016llx.txt",
                      static_cast<unsigned long long>(fnv1a(cache_key(config, scenario, bits, p_total))));
        cached = config.cache_dir / name;
        if (std::filesystem::exists(cached)) return load_codebook(cached);
    }

    const NetworkParams params = scenario.network.params.with_total_power(p_total);
    const auto channels = training_channels(scenario, config.training_size);
    const auto samples = make_training_samples(params, channels, config.threads);
    Rng init(derive_seed(config.master_seed,
                         {stream::codebook_init, scenario.sensors, static_cast<std::uint64_t>(bits),
                          std::bit_cast<std::uint64_t>(p_total)}));
    TrainOptions options;
    options.epsilon = config.epsilon;
    options.max_iterations = config.max_iterations;
    options.threads = config.threads;
    Codebook book = train(params, samples, bits, init, options);
    book.seed = config.master_seed;

    if (!cached.empty()) {
        std::filesystem::create_directories(config.cache_dir);
        save_codebook(cached, book);
    }
    return book;
}

std::vector<double> full_feedback_trials(const Scenario& scenario, double p_total, std::size_t trials,
                                         unsigned threads) {
    std::vector<double> out(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const Trial trial = evaluation_trial(scenario, p_total, t);
        const AllocationResult alloc = optimal_gains(trial.params, trial.chan);
        out[t] = blue_variance(trial.params, alloc.gains, trial.chan);
    });
    return out;
}

std::vector<double> limited_feedback_trials(const Scenario& scenario, const Codebook& book, double p_total,
                                            std::size_t trials, unsigned threads) {
    std::vector<double> out(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const Trial trial = evaluation_trial(scenario, p_total, t);
        const std::size_t index = select_index(trial.params, book, trial.chan);
        out[t] = blue_variance(trial.params, book.codewords[index], trial.chan);
    });
    return out;
}

TrialSummary summarize(std::span<const double> variances) {
    TrialSummary s;
    CompensatedSum sum;
    for (double v : variances) {
        if (std::isfinite(v)) {
            sum.add(v);
            ++s.finite;
        } else {
            ++s.infinite;
        }
    }
    if (s.finite == 0) {
        s.mean = std::numeric_limits<double>::infinity();
        return s;
    }
    s.mean = sum.value() / static_cast<double>(s.finite);
    if (s.finite > 1) {
        CompensatedSum squares;
        for (double v : variances)
            if (std::isfinite(v)) squares.add((v - s.mean) * (v - s.mean));
        const double n = static_cast<double>(s.finite);
        s.std_error = std::sqrt(squares.value() / (n - 1.0) / n);
    }
    return s;
}

std::vector<ResultRecord> run_full_feedback(const ExperimentConfig& config, const Scenario& scenario) {
    std::vector<ResultRecord> out;
    for (double dbm : config.power_dbm) {
        const auto start = Clock::now();
        const auto v = full_feedback_trials(scenario, dbm_to_watts(dbm), config.mc_trials, config.threads);
        ResultRecord r = make_record(scenario.sensors, std::nullopt, dbm, v);
        r.wall_time_s = seconds_since(start);
        out.push_back(r);
    }
    return out;
}

std::vector<ResultRecord> run_limited_feedback(const ExperimentConfig& config, const Scenario& scenario) {
    std::vector<ResultRecord> out;
    for (int bits : config.feedback_bits) {
        for (double dbm : config.power_dbm) {
            const auto start = Clock::now();
            const double p_total = dbm_to_watts(dbm);
            const Codebook book = build_codebook(config, scenario, bits, p_total);
            const auto v = limited_feedback_trials(scenario, book, p_total, config.mc_trials, config.threads);
            ResultRecord r = make_record(scenario.sensors, bits, dbm, v);
            r.codebook_iterations = book.iterations;
            r.wall_time_s = seconds_since(start);
            out.push_back(r);
        }
    }
    return out;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<ResultRecord> out;
    for (std::size_t k : config.sensor_counts) {
        const Scenario scenario = make_scenario(config, k);
        auto full = run_full_feedback(config, scenario);
        auto limited = run_limited_feedback(config, scenario);
        out.insert(out.end(), full.begin(), full.end());
        out.insert(out.end(), limited.begin(), limited.end());
    }
    return out;
}

}  // namespace bluefeed
