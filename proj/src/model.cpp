#include "bluefeed/model.hpp"

#include <cmath>
#include <string>

#include "bluefeed/errors.hpp"

namespace bluefeed {

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void NetworkParams::validate() const {
    const std::size_t k = obs_gains.size();
    if (k == 0) throw InvalidArgument("network must have at least one sensor");
    if (obs_noise_vars.size() != k || chan_noise_vars.size() != k)
        throw DimensionMismatch("network parameter vectors differ in length");
    if (!(prior_variance > 0.0) || !std::isfinite(prior_variance))
        throw InvalidArgument("prior variance must be positive");
    if (!(total_power > 0.0) || !std::isfinite(total_power))
        throw InvalidArgument("total power must be positive");
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(obs_gains[i]))
            throw InvalidArgument("observation gain " + std::to_string(i) + " is not finite");
        if (!(obs_noise_vars[i] > 0.0) || !std::isfinite(obs_noise_vars[i]))
            throw InvalidArgument("observation noise variance " + std::to_string(i) + " must be positive");
        if (!(chan_noise_vars[i] > 0.0) || !std::isfinite(chan_noise_vars[i]))
            throw InvalidArgument("channel noise variance " + std::to_string(i) + " must be positive");
    }
}

NetworkParams NetworkParams::with_total_power(double p_total) const {
    NetworkParams copy = *this;
    copy.total_power = p_total;
    return copy;
}

void check_dimensions(const NetworkParams& params, const ChannelRealization& chan) {
    if (chan.size() != params.size())
        throw DimensionMismatch("channel has " + std::to_string(chan.size()) + " entries, network has " +
                                std::to_string(params.size()) + " sensors");
}

void check_dimensions(const NetworkParams& params, const GainVector& gains) {
    if (gains.size() != params.size())
        throw DimensionMismatch("gain vector has " + std::to_string(gains.size()) + " entries, network has " +
                                std::to_string(params.size()) + " sensors");
}

std::vector<double> observation_snrs(const NetworkParams& params) {
    std::vector<double> beta(params.size());
    for (std::size_t i = 0; i < beta.size(); ++i)
        beta[i] = params.obs_gains[i] * params.obs_gains[i] * params.prior_variance / params.obs_noise_vars[i];
    return beta;
}

DerivedSnr compute_snrs(const NetworkParams& params, const ChannelRealization& chan) {
    check_dimensions(params, chan);
    DerivedSnr out;
    out.osnr = observation_snrs(params);
    out.csnr.resize(params.size());
    out.delta.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double beta = out.osnr[i];
        const double gamma = chan.g[i] * chan.g[i] / params.chan_noise_vars[i];
        out.csnr[i] = gamma;
        out.delta[i] = beta * gamma / (1.0 + beta);
    }
    return out;
}

double sensor_power(const NetworkParams& params, const GainVector& gains, std::size_t i) {
    if (i >= params.size() || i >= gains.size()) throw InvalidArgument("sensor index out of range");
    const double h = params.obs_gains[i];
    const double a = gains[i];
    return a * a * (h * h * params.prior_variance + params.obs_noise_vars[i]);
}

double total_power(const NetworkParams& params, const GainVector& gains) {
    check_dimensions(params, gains);
    CompensatedSum sum;
    for (std::size_t i = 0; i < params.size(); ++i) sum.add(sensor_power(params, gains, i));
    return sum.value();
}

bool is_feasible(const NetworkParams& params, const GainVector& gains, double rel_tol) {
    for (double a : gains.a)
        if (!(a >= 0.0)) return false;
    return total_power(params, gains) <= params.total_power * (1.0 + rel_tol);
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (!std::isfinite(t)) {
        sum_ = t;
        carry_ = 0.0;
        return;
    }
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace bluefeed
