#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bluefeed/model.hpp"
#include "bluefeed/rng.hpp"

namespace bluefeed {

/// A training channel together with its optimal gains and the variance they achieve.
struct TrainingSample {
    ChannelRealization chan;
    GainVector opt_gains;
    double opt_variance = 0.0;
};

TrainingSample make_training_sample(const NetworkParams& params, ChannelRealization chan);

std::vector<TrainingSample> make_training_samples(const NetworkParams& params,
                                                  std::span<const ChannelRealization> channels,
                                                  unsigned threads = 1);

/// 2^L quantized power-allocation vectors plus the metadata of the run that produced them.
struct Codebook {
    std::vector<GainVector> codewords;
    int bits = 0;  // L
    double total_power = 0.0;
    std::uint64_t seed = 0;
    std::size_t training_size = 0;  // M
    double epsilon = 0.0;
    std::size_t iterations = 0;
    bool converged = true;  // false when the iteration cap stopped training
    // D_B of the initial codebook followed by one entry per iteration.
    std::vector<double> distortion_history;
    // Nearest codeword of every training sample under the final codebook. Not persisted.
    std::vector<std::size_t> assignment;

    std::size_t size() const { return codewords.size(); }
    std::size_t sensors() const { return codewords.empty() ? 0 : codewords.front().size(); }
};

struct TrainOptions {
    double epsilon = 1e-6;
    std::size_t max_iterations = 500;
    unsigned threads = 1;
};

/// |Var(codeword | g) - Var(opt | g)|. Zero when both variances are infinite.
double codeword_distortion(const NetworkParams& params, const GainVector& codeword, const TrainingSample& sample);

/// Mean over the samples of the smallest codeword distortion.
double codebook_distortion(const NetworkParams& params, const Codebook& book,
                           std::span<const TrainingSample> samples, unsigned threads = 1);

/// Nearest codeword of every sample; ties go to the lowest index.
std::vector<std::size_t> partition(const NetworkParams& params, const Codebook& book,
                                   std::span<const TrainingSample> samples, unsigned threads = 1);

/// Restricted centroid of a quantization cell: the candidate with the smallest
/// mean distortion over the cell, drawn from the previous codeword followed by
/// the optimal gains of each member. Ties keep the earliest candidate.
/// Throws EmptyCell for an empty cell.
GainVector centroid(const NetworkParams& params, std::span<const TrainingSample> cell,
                    const GainVector& previous_codeword, unsigned threads = 1);

/// Generalized Lloyd design. The initial codebook is the optimal gains of 2^L
/// distinct training samples picked with `rng`; iterations alternate the
/// nearest-neighbor partition and the centroid update until the drop in mean
/// distortion is at most epsilon or max_iterations is reached.
/// Throws InsufficientTrainingData when M < 2^L.
Codebook train(const NetworkParams& params, std::span<const TrainingSample> samples, int bits, Rng& rng,
               const TrainOptions& options = {});

/// Lloyd iterations from a caller-supplied initial codebook.
Codebook train_from(const NetworkParams& params, std::span<const TrainingSample> samples,
                    std::vector<GainVector> initial_codewords, const TrainOptions& options = {});

/// Index the fusion center broadcasts for a fresh channel: the codeword closest
/// to the channel's optimal allocation in codeword distortion.
std::size_t select_index(const NetworkParams& params, const Codebook& book, const ChannelRealization& chan);

}  // namespace bluefeed
