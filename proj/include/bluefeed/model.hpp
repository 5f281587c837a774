#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bluefeed {

// dB and dBm helpers. Everything inside the library is linear, powers in watts.
double db_to_linear(double x_db);
double linear_to_db(double x);
double dbm_to_watts(double x_dbm);
double watts_to_dbm(double watts);

/// Static description of a K-sensor network observing one scalar parameter.
struct NetworkParams {
    double prior_variance = 1.0;          // sigma_theta^2
    std::vector<double> obs_gains;        // h_i, any sign
    std::vector<double> obs_noise_vars;   // sigma_o,i^2
    std::vector<double> chan_noise_vars;  // sigma_c,i^2
    double total_power = 1.0;             // P_total, watts

    std::size_t size() const { return obs_gains.size(); }

    // Throws InvalidArgument when an invariant is broken.
    void validate() const;

    // Same network with a different power budget.
    NetworkParams with_total_power(double p_total) const;
};

/// One draw of the fading magnitudes g_i >= 0.
struct ChannelRealization {
    std::vector<double> g;

    std::size_t size() const { return g.size(); }
};

/// Amplification gains a_i >= 0, one per sensor.
struct GainVector {
    std::vector<double> a;

    GainVector() = default;
    explicit GainVector(std::vector<double> gains) : a(std::move(gains)) {}
    static GainVector zeros(std::size_t k) { return GainVector(std::vector<double>(k, 0.0)); }

    std::size_t size() const { return a.size(); }
    double operator[](std::size_t i) const { return a[i]; }

    friend bool operator==(const GainVector&, const GainVector&) = default;
};

struct DerivedSnr {
    std::vector<double> osnr;   // beta_i = h_i^2 sigma_theta^2 / sigma_o,i^2
    std::vector<double> csnr;   // gamma_i = g_i^2 / sigma_c,i^2
    std::vector<double> delta;  // beta_i gamma_i / (1 + beta_i)
};

std::vector<double> observation_snrs(const NetworkParams& params);

DerivedSnr compute_snrs(const NetworkParams& params, const ChannelRealization& chan);

/// Transmit power of sensor i: a_i^2 sigma_o,i^2 (1 + beta_i).
double sensor_power(const NetworkParams& params, const GainVector& gains, std::size_t i);

double total_power(const NetworkParams& params, const GainVector& gains);

/// True when the summed sensor power stays within P_total up to a relative tolerance.
bool is_feasible(const NetworkParams& params, const GainVector& gains, double rel_tol = 1e-9);

// Throws DimensionMismatch unless every per-sensor vector has length params.size().
void check_dimensions(const NetworkParams& params, const ChannelRealization& chan);
void check_dimensions(const NetworkParams& params, const GainVector& gains);

/// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

}  // namespace bluefeed
