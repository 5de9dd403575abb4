#pragma once

#include <iosfwd>
#include <vector>

namespace falldet {

struct FilterSpec {
    int order = 4;
    double cutoff_hz = 5.0;
    double sample_rate_hz = 200.0;

    void validate() const;  // throws ConfigError
};

// One second-order section with a0 normalized to 1.
struct Biquad {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct BiquadCascade {
    std::vector<Biquad> sections;
};

// Low-pass Butterworth via bilinear transform with prewarped cutoff,
// realized as order/2 cascaded biquads. Unit DC gain by construction.
BiquadCascade design_butterworth(const FilterSpec& spec);

// Causal single pass with zero initial state; output length = input length.
// Throws on non-finite input, naming the first bad index.
std::vector<double> filter_signal(const std::vector<double>& series, const BiquadCascade& cascade);

// Forward-backward application (squared magnitude response, zero phase).
std::vector<double> filter_signal_zero_phase(const std::vector<double>& series,
                                             const BiquadCascade& cascade);

// |H| of the cascade on the unit circle at freq_hz.
double frequency_response(const BiquadCascade& cascade, double freq_hz, double sample_rate_hz);

// Closed-form magnitude of the bilinear-warped Butterworth prototype:
// 1 / sqrt(1 + (tan(pi f/fs) / tan(pi fc/fs))^(2 order)).
double butterworth_magnitude(const FilterSpec& spec, double freq_hz);

// Diagnostic CSV: frequency_hz,magnitude,analytic_magnitude over a log-spaced
// grid that always includes the cutoff and twice the cutoff.
void write_filter_check_csv(const BiquadCascade& cascade, const FilterSpec& spec, std::ostream& out);

}  // namespace falldet
