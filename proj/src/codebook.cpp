#include "bluefeed/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "bluefeed/allocator.hpp"
#include "bluefeed/errors.hpp"
#include "bluefeed/estimator.hpp"
#include "bluefeed/parallel.hpp"

namespace bluefeed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distortion_between(double variance, double opt_variance) {
    if (std::isinf(variance) && std::isinf(opt_variance)) return 0.0;
    return std::abs(variance - opt_variance);
}

// Training-time view of the samples. The BLUE variance of gains a under sample s is
//   sigma_theta^2 / sum_i beta_i u_i / (1 + u_i),  u_i = (gamma_i sigma_o,i^2) a_i^2,
// evaluated in the same order as blue_variance().
class DistortionTable {
public:
    DistortionTable(const NetworkParams& params, std::span<const TrainingSample> samples)
        : k_(params.size()), prior_(params.prior_variance), beta_(observation_snrs(params)),
          opt_(samples.size()), csnr_noise_(samples.size() * params.size()) {
        for (std::size_t s = 0; s < samples.size(); ++s) {
            check_dimensions(params, samples[s].chan);
            opt_[s] = samples[s].opt_variance;
            for (std::size_t i = 0; i < k_; ++i) {
                const double g = samples[s].chan.g[i];
                const double gamma = g * g / params.chan_noise_vars[i];
                csnr_noise_[s * k_ + i] = gamma * params.obs_noise_vars[i];
            }
        }
    }

    std::size_t sensors() const { return k_; }

    double variance(std::span<const double> squared_gains, std::size_t s) const {
        CompensatedSum info;
        const double* c = &csnr_noise_[s * k_];
        for (std::size_t i = 0; i < k_; ++i) {
            if (squared_gains[i] == 0.0) continue;
            const double u = c[i] * squared_gains[i];
            info.add(beta_[i] * u / (1.0 + u));
        }
        if (!(info.value() > 0.0)) return kInf;
        return prior_ / info.value();
    }

    double distortion(std::span<const double> squared_gains, std::size_t s) const {
        return distortion_between(variance(squared_gains, s), opt_[s]);
    }

private:
    std::size_t k_;
    double prior_;
    std::vector<double> beta_;
    std::vector<double> opt_;
    std::vector<double> csnr_noise_;  // gamma_i sigma_o,i^2, row per sample
};

std::vector<double> squared(const GainVector& gains) {
    std::vector<double> out(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) out[i] = gains[i] * gains[i];
    return out;
}

std::vector<std::vector<double>> squared_all(const std::vector<GainVector>& codewords) {
    std::vector<std::vector<double>> out;
    out.reserve(codewords.size());
    for (const auto& c : codewords) out.push_back(squared(c));
    return out;
}

struct NearestResult {
    std::vector<std::size_t> index;
    std::vector<double> distortion;
    double mean = 0.0;
};

NearestResult nearest(const DistortionTable& table, const std::vector<std::vector<double>>& codewords,
                      std::size_t num_samples, unsigned threads) {
    NearestResult out;
    out.index.assign(num_samples, 0);
    out.distortion.assign(num_samples, kInf);
    parallel_for(num_samples, threads, [&](std::size_t s) {
        double best = kInf;
        std::size_t best_index = 0;
        for (std::size_t l = 0; l < codewords.size(); ++l) {
            const double d = table.distortion(codewords[l], s);
            if (d < best) {
                best = d;
                best_index = l;
            }
        }
        out.index[s] = best_index;
        out.distortion[s] = best;
    });
    CompensatedSum total;
    for (double d : out.distortion) total.add(d);
    out.mean = total.value() / static_cast<double>(num_samples);
    return out;
}

// Position in `candidates` of the smallest mean distortion over `members`.
std::size_t medoid(const DistortionTable& table, std::span<const std::vector<double>> candidates,
                   std::span<const std::size_t> members, unsigned threads) {
    std::vector<double> cost(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t c) {
        CompensatedSum sum;
        for (std::size_t s : members) sum.add(table.distortion(candidates[c], s));
        cost[c] = sum.value();
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < cost.size(); ++c)
        if (cost[c] < cost[best]) best = c;
    return best;
}

void validate_codewords(const NetworkParams& params, const std::vector<GainVector>& codewords) {
    if (codewords.empty()) throw InvalidArgument("codebook has no codewords");
    for (const auto& c : codewords) check_dimensions(params, c);
}

}  // namespace

TrainingSample make_training_sample(const NetworkParams& params, ChannelRealization chan) {
    TrainingSample sample;
    AllocationResult alloc = optimal_gains(params, chan);
    sample.opt_variance = blue_variance(params, alloc.gains, chan);
    sample.opt_gains = std::move(alloc.gains);
    sample.chan = std::move(chan);
    return sample;
}

std::vector<TrainingSample> make_training_samples(const NetworkParams& params,
                                                  std::span<const ChannelRealization> channels,
                                                  unsigned threads) {
    std::vector<TrainingSample> samples(channels.size());
    parallel_for(channels.size(), threads,
                 [&](std::size_t s) { samples[s] = make_training_sample(params, channels[s]); });
    return samples;
}

double codeword_distortion(const NetworkParams& params, const GainVector& codeword, const TrainingSample& sample) {
    return distortion_between(blue_variance(params, codeword, sample.chan), sample.opt_variance);
}

double codebook_distortion(const NetworkParams& params, const Codebook& book,
                           std::span<const TrainingSample> samples, unsigned threads) {
    if (samples.empty()) throw InvalidArgument("codebook distortion needs at least one sample");
    validate_codewords(params, book.codewords);
    const DistortionTable table(params, samples);
    return nearest(table, squared_all(book.codewords), samples.size(), threads).mean;
}

std::vector<std::size_t> partition(const NetworkParams& params, const Codebook& book,
                                   std::span<const TrainingSample> samples, unsigned threads) {
    validate_codewords(params, book.codewords);
    const DistortionTable table(params, samples);
    return nearest(table, squared_all(book.codewords), samples.size(), threads).index;
}

GainVector centroid(const NetworkParams& params, std::span<const TrainingSample> cell,
                    const GainVector& previous_codeword, unsigned threads) {
    if (cell.empty()) throw EmptyCell();
    check_dimensions(params, previous_codeword);
    const DistortionTable table(params, cell);
    std::vector<std::vector<double>> candidates;
    candidates.reserve(cell.size() + 1);
    candidates.push_back(squared(previous_codeword));
    for (const auto& s : cell) candidates.push_back(squared(s.opt_gains));
    std::vector<std::size_t> members(cell.size());
    std::iota(members.begin(), members.end(), std::size_t{0});
    const std::size_t best = medoid(table, candidates, members, threads);
    return best == 0 ? previous_codeword : cell[best - 1].opt_gains;
}

Codebook train(const NetworkParams& params, std::span<const TrainingSample> samples, int bits, Rng& rng,
               const TrainOptions& options) {
    if (bits < 0 || bits > 30) throw InvalidArgument("feedback bits must lie in [0, 30]");
    const std::size_t size = std::size_t{1} << bits;
    if (samples.size() < size)
        throw InsufficientTrainingData("training needs at least 2^L = " + std::to_string(size) + " samples, got " +
                                       std::to_string(samples.size()));

    // Partial Fisher-Yates over the sample indices: 2^L distinct picks.
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<GainVector> initial;
    initial.reserve(size);
    for (std::size_t l = 0; l < size; ++l) {
        const std::size_t j = l + static_cast<std::size_t>(rng.below(samples.size() - l));
        std::swap(order[l], order[j]);
        initial.push_back(samples[order[l]].opt_gains);
    }
    Codebook book = train_from(params, samples, std::move(initial), options);
    book.bits = bits;
    return book;
}

Codebook train_from(const NetworkParams& params, std::span<const TrainingSample> samples,
                    std::vector<GainVector> initial_codewords, const TrainOptions& options) {
    if (samples.empty()) throw InsufficientTrainingData("training set is empty");
    if (!(options.epsilon > 0.0)) throw InvalidArgument("distortion threshold epsilon must be positive");
    validate_codewords(params, initial_codewords);

    Codebook book;
    book.codewords = std::move(initial_codewords);
    book.bits = static_cast<int>(std::bit_width(book.codewords.size()) - 1);
    book.total_power = params.total_power;
    book.training_size = samples.size();
    book.epsilon = options.epsilon;

    const DistortionTable table(params, samples);
    const std::size_t num_codewords = book.codewords.size();
    auto sq = squared_all(book.codewords);
    NearestResult current = nearest(table, sq, samples.size(), options.threads);
    book.distortion_history.push_back(current.mean);

    book.converged = false;
    while (book.iterations < options.max_iterations) {
        ++book.iterations;
        const double old_cost = current.mean;

        std::vector<std::vector<std::size_t>> cells(num_codewords);
        for (std::size_t s = 0; s < samples.size(); ++s) cells[current.index[s]].push_back(s);

        std::vector<std::size_t> empty_cells;
        for (std::size_t l = 0; l < num_codewords; ++l) {
            if (cells[l].empty()) {
                empty_cells.push_back(l);
                continue;
            }
            std::vector<std::vector<double>> candidates;
            candidates.reserve(cells[l].size() + 1);
            candidates.push_back(sq[l]);
            for (std::size_t s : cells[l]) candidates.push_back(squared(samples[s].opt_gains));
            const std::size_t best = medoid(table, candidates, cells[l], options.threads);
            if (best != 0) {
                book.codewords[l] = samples[cells[l][best - 1]].opt_gains;
                sq[l] = std::move(candidates[best]);
            }
        }

        // Empty cells take the sample that is currently served worst.
        for (std::size_t l : empty_cells) {
            const NearestResult now = nearest(table, sq, samples.size(), options.threads);
            const auto worst = std::max_element(now.distortion.begin(), now.distortion.end());
            if (!(*worst > 0.0)) break;
            const std::size_t s = static_cast<std::size_t>(worst - now.distortion.begin());
            book.codewords[l] = samples[s].opt_gains;
            sq[l] = squared(samples[s].opt_gains);
        }

        current = nearest(table, sq, samples.size(), options.threads);
        book.distortion_history.push_back(current.mean);
        // NaN (both costs infinite) also stops.
        if (!(old_cost - current.mean > options.epsilon)) {
            book.converged = true;
            break;
        }
    }
    book.assignment = std::move(current.index);
    return book;
}

std::size_t select_index(const NetworkParams& params, const Codebook& book, const ChannelRealization& chan) {
    validate_codewords(params, book.codewords);
    const TrainingSample sample = make_training_sample(params, chan);
    std::size_t best_index = 0;
    double best = kInf;
    for (std::size_t l = 0; l < book.size(); ++l) {
        const double d = codeword_distortion(params, book.codewords[l], sample);
        if (d < best) {
            best = d;
            best_index = l;
        }
    }
    return best_index;
}

}  // namespace bluefeed
