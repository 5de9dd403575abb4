#include "falldet/dsp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>

#include "falldet/errors.hpp"

namespace falldet {

void FilterSpec::validate() const {
    if (order < 2 || order % 2 != 0) {
        throw ConfigError("filter order must be even and >= 2, got " + std::to_string(order));
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("sample rate must be positive");
    }
    if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0) {
        throw ConfigError("cutoff must lie in (0, Nyquist); got " + std::to_string(cutoff_hz) +
                          " Hz at Fs = " + std::to_string(sample_rate_hz) + " Hz");
    }
}

BiquadCascade design_butterworth(const FilterSpec& spec) {
    spec.validate();
    const int n = spec.order;
    const double warped = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);
    const double w2 = warped * warped;

    BiquadCascade cascade;
    cascade.sections.reserve(static_cast<std::size_t>(n / 2));
    for (int k = 1; k <= n / 2; ++k) {
        // conjugate pole pair of the analog prototype at angle theta
        const double theta = std::numbers::pi * (0.5 + (2.0 * k - 1.0) / (2.0 * n));
        const double q = -2.0 * std::cos(theta);
        const double a0 = 1.0 + q * warped + w2;

        Biquad s;
        s.b0 = w2 / a0;
        s.b1 = 2.0 * w2 / a0;
        s.b2 = w2 / a0;
        s.a1 = 2.0 * (w2 - 1.0) / a0;
        s.a2 = (1.0 - q * warped + w2) / a0;
        cascade.sections.push_back(s);
    }
    return cascade;
}

std::vector<double> filter_signal(const std::vector<double>& series, const BiquadCascade& cascade) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) {
            throw ParseError("non-finite sample at index " + std::to_string(i));
        }
    }

    std::vector<double> out = series;
    for (const Biquad& s : cascade.sections) {
        // direct form II transposed
        double z1 = 0.0, z2 = 0.0;
        for (double& x : out) {
            const double y = s.b0 * x + z1;
            z1 = s.b1 * x - s.a1 * y + z2;
            z2 = s.b2 * x - s.a2 * y;
            x = y;
        }
    }
    return out;
}

std::vector<double> filter_signal_zero_phase(const std::vector<double>& series,
                                             const BiquadCascade& cascade) {
    std::vector<double> out = filter_signal(series, cascade);
    std::reverse(out.begin(), out.end());
    out = filter_signal(out, cascade);
    std::reverse(out.begin(), out.end());
    return out;
}

double frequency_response(const BiquadCascade& cascade, double freq_hz, double sample_rate_hz) {
    if (freq_hz < 0.0 || freq_hz > sample_rate_hz / 2.0) {
        throw ConfigError("probe frequency " + std::to_string(freq_hz) +
                          " Hz outside [0, Nyquist]");
    }
    const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    const std::complex<double> z1 = std::polar(1.0, -omega);
    const std::complex<double> z2 = z1 * z1;

    std::complex<double> h{1.0, 0.0};
    for (const Biquad& s : cascade.sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return std::abs(h);
}

double butterworth_magnitude(const FilterSpec& spec, double freq_hz) {
    if (freq_hz < 0.0 || freq_hz > spec.sample_rate_hz / 2.0) {
        throw ConfigError("probe frequency " + std::to_string(freq_hz) +
                          " Hz outside [0, Nyquist]");
    }
    const double ratio = std::tan(std::numbers::pi * freq_hz / spec.sample_rate_hz) /
                         std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);
    const double r2n = std::pow(ratio, 2.0 * spec.order);
    if (std::isinf(r2n)) return 0.0;  // Nyquist maps to infinite warped frequency
    return 1.0 / std::sqrt(1.0 + r2n);
}

namespace {

void append_double(std::string& line, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, r.ptr);
}

}  // namespace

void write_filter_check_csv(const BiquadCascade& cascade, const FilterSpec& spec, std::ostream& out) {
    const double nyquist = spec.sample_rate_hz / 2.0;
    const double lo = 0.1;
    const double hi = nyquist * 0.999;

    std::vector<double> freqs;
    const int points = 50;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        freqs.push_back(lo * std::pow(hi / lo, t));
    }
    freqs.push_back(spec.cutoff_hz);
    if (2.0 * spec.cutoff_hz < nyquist) freqs.push_back(2.0 * spec.cutoff_hz);
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

    out << "frequency_hz,magnitude,analytic_magnitude\n";
    for (double f : freqs) {
        std::string line;
        append_double(line, f);
        line.push_back(',');
        append_double(line, frequency_response(cascade, f, spec.sample_rate_hz));
        line.push_back(',');
        append_double(line, butterworth_magnitude(spec, f));
        line.push_back('\n');
        out << line;
    }
}

}  // namespace falldet
