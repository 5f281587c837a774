#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bluefeed/codebook.hpp"
#include "bluefeed/config.hpp"
#include "bluefeed/flatfile.hpp"
#include "bluefeed/results.hpp"

namespace bluefeed {

/// Fixed network geometry for one sensor count, shared by every sweep point
/// and every L so curves are paired.
struct Scenario {
    std::size_t sensors = 0;
    std::uint64_t master_seed = 0;
    NetworkInstance network;  // params.total_power is overridden per point
    FadingModel fading;
    NetworkModel model;
    bool resample_geometry = false;
};

/// Network and distances; sensor i is drawn from the (seed, i) substreams.
Scenario make_scenario(const ExperimentConfig& config, std::size_t sensors);

/// One evaluation trial: its network (the scenario's unless geometry is
/// resampled) and a fresh fading draw. Depends only on (seed, K, trial), so
/// every power level and every L sees the same channels.
struct Trial {
    NetworkParams params;
    ChannelRealization chan;
};
Trial evaluation_trial(const Scenario& scenario, double p_total, std::size_t trial);

/// Training channels, from a substream disjoint from the evaluation trials.
std::vector<ChannelRealization> training_channels(const Scenario& scenario, std::size_t count);

/// Codebook for one (K, L, P_total) point, loaded from the cache when present.
Codebook build_codebook(const ExperimentConfig& config, const Scenario& scenario, int bits, double p_total);

/// Per-trial BLUE variance with the exact optimal gains fed back.
std::vector<double> full_feedback_trials(const Scenario& scenario, double p_total, std::size_t trials,
                                         unsigned threads = 1);

/// Per-trial BLUE variance with the codeword the fusion center selects.
std::vector<double> limited_feedback_trials(const Scenario& scenario, const Codebook& book, double p_total,
                                            std::size_t trials, unsigned threads = 1);

struct TrialSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t finite = 0;
    std::size_t infinite = 0;
};

/// Mean and standard error over the finite entries; infinite ones are only counted.
TrialSummary summarize(std::span<const double> variances);

std::vector<ResultRecord> run_full_feedback(const ExperimentConfig& config, const Scenario& scenario);
std::vector<ResultRecord> run_limited_feedback(const ExperimentConfig& config, const Scenario& scenario);

/// Every K in the config: full feedback first, then each L in config order,
/// each over the whole power sweep.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

}  // namespace bluefeed
