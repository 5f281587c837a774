#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bluefeed/channel.hpp"

namespace bluefeed {

enum class ResultFormat { csv, jsonl };

/// Full description of a sweep. Defaults reproduce the published simulation
/// setup except for the Monte-Carlo trial count (5,000 instead of 50,000).
struct ExperimentConfig {
    std::vector<std::size_t> sensor_counts{5, 10};
    std::vector<int> feedback_bits{2, 4};
    std::vector<double> power_dbm = default_power_sweep();
    std::size_t training_size = 5000;  // M
    double epsilon = 1e-6;
    std::size_t max_iterations = 500;
    std::size_t mc_trials = 5000;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    bool resample_geometry = false;
    FadingModel fading;
    NetworkModel network;
    std::filesystem::path output_path;
    ResultFormat format = ResultFormat::csv;
    std::filesystem::path cache_dir;  // empty: no codebook cache

    /// 16 points, 5 dBm to 20 dBm in 1 dB steps.
    static std::vector<double> default_power_sweep();

    // Throws ConfigError.
    void validate() const;
};

/// Parses the JSON config format documented in README.md. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

ResultFormat parse_format(const std::string& name);

}  // namespace bluefeed
