#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bluefeed/config.hpp"

namespace bluefeed {

/// One averaged sweep point.
struct ResultRecord {
    std::size_t sensors = 0;           // K
    std::optional<int> bits;           // L; empty for full feedback
    double power_dbm = 0.0;
    double power_watts = 0.0;
    double mean_variance = 0.0;        // mean over trials with finite variance
    double std_error = 0.0;
    std::size_t trials = 0;
    std::size_t num_infinite_trials = 0;
    std::size_t codebook_iterations = 0;
    double wall_time_s = 0.0;          // not written to result files

    bool is_full_feedback() const { return !bits.has_value(); }

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

// Columns, in order. wall_time_s is left out so reruns are byte-identical.
inline constexpr const char* kResultColumns =
    "K,L,P_total_dBm,P_total_W,mean_variance,std_error,trials,num_infinite_trials,codebook_iterations";

void write_results(std::ostream& out, const std::vector<ResultRecord>& records, ResultFormat format);

/// Writes the records to `path`. An empty list is an error and creates no file.
void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records,
                   ResultFormat format);

/// Reads back a CSV written by write_results (wall_time_s is zero).
std::vector<ResultRecord> read_results_csv(std::istream& in);

}  // namespace bluefeed
