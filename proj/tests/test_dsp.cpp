#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "falldet/dsp.hpp"
#include "falldet/errors.hpp"
#include "falldet/rng.hpp"
#include "test_util.hpp"

using namespace falldet;

namespace {

// Analytic magnitude of the bilinear-transformed Butterworth low-pass,
// written out independently of the library.
double oracle_magnitude(int order, double cutoff_hz, double fs, double f) {
    const double r = std::tan(std::numbers::pi * f / fs) / std::tan(std::numbers::pi * cutoff_hz / fs);
    return 1.0 / std::sqrt(1.0 + std::pow(r, 2.0 * order));
}

// Independent designer: maps the analog prototype poles through the bilinear
// transform one complex pole pair at a time and normalizes each section to
// unit DC gain. Exercises a different derivation than the library's
// closed-form coefficients.
BiquadCascade oracle_design(int order, double cutoff_hz, double fs) {
    const double warped = std::tan(std::numbers::pi * cutoff_hz / fs);
    BiquadCascade cascade;
    for (int k = 1; k <= order / 2; ++k) {
        const double theta = std::numbers::pi / 2.0 +
                             std::numbers::pi * (2.0 * k - 1.0) / (2.0 * order);
        const std::complex<double> pole_s = std::polar(warped, theta);
        const std::complex<double> pole_z = (1.0 + pole_s) / (1.0 - pole_s);

        Biquad s;
        s.a1 = -2.0 * pole_z.real();
        s.a2 = std::norm(pole_z);
        const double gain = (1.0 + s.a1 + s.a2) / 4.0;  // zeros at z = -1
        s.b0 = gain;
        s.b1 = 2.0 * gain;
        s.b2 = gain;
        cascade.sections.push_back(s);
    }
    return cascade;
}

std::vector<double> impulse(std::size_t n) {
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    return x;
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("order-4 design yields two sections with unit DC gain") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    REQUIRE(cascade.sections.size() == 2);
    CHECK(frequency_response(cascade, 0.0, 200.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (const Biquad& s : cascade.sections) {
        const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cutoff sits at -3 dB") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    CHECK(std::abs(frequency_response(cascade, 5.0, 200.0) - 1.0 / std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("magnitude at twice the cutoff matches the analytic value") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    const double r = std::tan(std::numbers::pi * 10.0 / 200.0) / std::tan(std::numbers::pi * 5.0 / 200.0);
    const double expected = 1.0 / std::sqrt(1.0 + std::pow(r, 8.0));
    CHECK(frequency_response(cascade, 10.0, 200.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("deep stopband at Nyquist") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    CHECK(frequency_response(cascade, 100.0, 200.0) < 1e-4);
}

TEST_CASE("50 log-spaced frequencies match the analytic response within 1e-6") {
    const FilterSpec spec{4, 5.0, 200.0};
    const BiquadCascade cascade = design_butterworth(spec);
    for (int i = 0; i < 50; ++i) {
        const double t = static_cast<double>(i) / 49.0;
        const double f = 0.1 * std::pow(99.0 / 0.1, t) * 0.999;
        const double expected = oracle_magnitude(4, 5.0, 200.0, f);
        const double got = frequency_response(cascade, f, 200.0);
        CHECK(std::abs(got - expected) <= 1e-6 * std::max(expected, 1e-30));
    }
}

TEST_CASE("all poles lie strictly inside the unit circle") {
    for (const int order : {2, 4, 6, 8}) {
        const BiquadCascade cascade = design_butterworth({order, 5.0, 200.0});
        for (const Biquad& s : cascade.sections) {
            const double disc = s.a1 * s.a1 - 4.0 * s.a2;
            if (disc < 0.0) {
                CHECK(std::sqrt(s.a2) < 1.0);  // conjugate pair, |pole|^2 = a2
            } else {
                const double r1 = (-s.a1 + std::sqrt(disc)) / 2.0;
                const double r2 = (-s.a1 - std::sqrt(disc)) / 2.0;
                CHECK(std::abs(r1) < 1.0);
                CHECK(std::abs(r2) < 1.0);
            }
        }
    }
}

TEST_CASE("impulse response matches the independently designed cascade") {
    const BiquadCascade lib = design_butterworth({4, 5.0, 200.0});
    const BiquadCascade oracle = oracle_design(4, 5.0, 200.0);
    const auto h_lib = filter_signal(impulse(500), lib);
    const auto h_oracle = filter_signal(impulse(500), oracle);
    for (std::size_t i = 0; i < h_lib.size(); ++i) {
        CHECK(h_lib[i] == doctest::Approx(h_oracle[i]).epsilon(1e-9));
    }
}

TEST_CASE("impulse response decays with finite energy") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    const auto h = filter_signal(impulse(4000), cascade);
    double energy = 0.0;
    for (double v : h) energy += v * v;
    CHECK(std::isfinite(energy));
    for (std::size_t i = 3900; i < h.size(); ++i) {
        CHECK(std::abs(h[i]) < 1e-9);
    }
}

TEST_CASE("constant input converges to the constant") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    const std::vector<double> series(2000, 3.25);
    const auto y = filter_signal(series, cascade);
    REQUIRE(y.size() == series.size());
    CHECK(std::abs(y.back() - 3.25) < 1e-6);
}

TEST_CASE("zeros map to zeros") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    for (double v : filter_signal(std::vector<double>(100, 0.0), cascade)) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("filtering is linear") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    Rng rng(7);
    const auto x = testutil::random_series(rng, 256, -2.0, 2.0);
    const auto y = testutil::random_series(rng, 256, -2.0, 2.0);
    const double a = 1.7, b = -0.4;

    std::vector<double> combo(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) combo[i] = a * x[i] + b * y[i];

    const auto fx = filter_signal(x, cascade);
    const auto fy = filter_signal(y, cascade);
    const auto fc = filter_signal(combo, cascade);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(fc[i] == doctest::Approx(a * fx[i] + b * fy[i]).epsilon(1e-9));
    }
}

TEST_CASE("filtering is time-invariant under zero-padded shifts") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    Rng rng(11);
    const auto x = testutil::random_series(rng, 200, -1.0, 1.0);
    const std::size_t shift = 17;

    std::vector<double> shifted(shift, 0.0);
    shifted.insert(shifted.end(), x.begin(), x.end());

    const auto y = filter_signal(x, cascade);
    const auto y_shifted = filter_signal(shifted, cascade);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(y_shifted[i + shift] == doctest::Approx(y[i]).epsilon(1e-9));
    }
}

TEST_CASE("zero-phase pass settles onto constants too") {
    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    const std::vector<double> series(4000, -1.5);
    const auto y = filter_signal_zero_phase(series, cascade);
    REQUIRE(y.size() == series.size());
    CHECK(std::abs(y[2000] + 1.5) < 1e-6);
}

TEST_CASE("identity cascade passes every frequency unchanged") {
    BiquadCascade identity;
    identity.sections.push_back(Biquad{1.0, 0.0, 0.0, 0.0, 0.0});
    for (const double f : {0.0, 1.0, 12.5, 99.0}) {
        CHECK(frequency_response(identity, f, 200.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rejects invalid specs and inputs") {
    CHECK_THROWS_AS(design_butterworth({4, 100.0, 200.0}), ConfigError);  // at Nyquist
    CHECK_THROWS_AS(design_butterworth({4, 150.0, 200.0}), ConfigError);
    CHECK_THROWS_AS(design_butterworth({3, 5.0, 200.0}), ConfigError);   // odd order
    CHECK_THROWS_AS(design_butterworth({0, 5.0, 200.0}), ConfigError);
    CHECK_THROWS_AS(design_butterworth({4, -1.0, 200.0}), ConfigError);

    const BiquadCascade cascade = design_butterworth({4, 5.0, 200.0});
    CHECK_THROWS_AS(frequency_response(cascade, 101.0, 200.0), ConfigError);
    CHECK_THROWS_AS(frequency_response(cascade, -0.5, 200.0), ConfigError);

    std::vector<double> bad(10, 0.0);
    bad[7] = std::nan("");
    try {
        filter_signal(bad, cascade);
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("index 7") != std::string::npos);
    }
}

TEST_CASE("filter-check CSV carries matching analytic column") {
    const FilterSpec spec{4, 5.0, 200.0};
    const BiquadCascade cascade = design_butterworth(spec);
    std::ostringstream buf;
    write_filter_check_csv(cascade, spec, buf);

    std::istringstream in(buf.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "frequency_hz,magnitude,analytic_magnitude");

    bool saw_cutoff = false;
    while (std::getline(in, line)) {
        double f = 0.0, mag = 0.0, analytic = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &f, &mag, &analytic) == 3);
        CHECK(std::abs(mag - analytic) <= 1e-6);
        if (std::abs(f - 5.0) < 1e-12) {
            saw_cutoff = true;
            CHECK(std::abs(mag - 1.0 / std::sqrt(2.0)) < 1e-6);
        }
    }
    CHECK(saw_cutoff);
}

}  // TEST_SUITE
