#include "falldet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "falldet/errors.hpp"
#include "falldet/rng.hpp"

namespace falldet {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::int32_t parse_int_field(const std::string& field, const RecordingMeta& meta, std::size_t line_no) {
    const std::string t = trim(field);
    std::int32_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(meta.source_path + ":" + std::to_string(line_no) +
                         ": field '" + field + "' is not an integer");
    }
    return value;
}

}  // namespace

const char* to_string(Label label) {
    return label == Label::Fall ? "FALL" : "ADL";
}

Label label_from_string(const std::string& s) {
    if (s == "FALL") return Label::Fall;
    if (s == "ADL") return Label::ADL;
    throw ParseError("unknown label '" + s + "' (expected FALL or ADL)");
}

double SensorSpec::scale() const {
    return std::ldexp(2.0 * range, -resolution_bits);
}

void SensorSpec::validate() const {
    if (range <= 0.0) {
        throw ConfigError("sensor '" + name + "': range must be positive");
    }
    if (resolution_bits < 8 || resolution_bits > 32) {
        throw ConfigError("sensor '" + name + "': resolution must be 8..32 bits");
    }
    if (!(scale() > 0.0)) {
        throw ConfigError("sensor '" + name + "': derived scale is not positive");
    }
}

CalibrationTable default_calibration() {
    return {
        SensorSpec{"sensor0", SensorKind::Accelerometer, 16.0, 13},
        SensorSpec{"sensor1", SensorKind::Gyroscope, 2000.0, 16},
        SensorSpec{"sensor2", SensorKind::Accelerometer, 8.0, 14},
    };
}

std::string RecordingMeta::stem() const {
    char trial_buf[16];
    std::snprintf(trial_buf, sizeof(trial_buf), "R%02d", trial);
    return activity_code + "_" + subject_code + "_" + trial_buf;
}

std::size_t ScanResult::count(Label label) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(),
                      [label](const RecordingMeta& m) { return m.label == label; }));
}

RecordingMeta label_from_name(const std::string& filename) {
    static const std::regex stem_re(R"(^([A-Za-z]\d+)_([A-Za-z]+\d+)_R(\d+)$)");

    std::string stem = std::filesystem::path(filename).filename().string();
    if (const auto dot = stem.rfind('.'); dot != std::string::npos) {
        stem = stem.substr(0, dot);
    }

    std::smatch m;
    if (!std::regex_match(stem, m, stem_re)) {
        throw ParseError("file name '" + filename + "' does not match <ACT>_<SUBJ>_R<NN>");
    }

    RecordingMeta meta;
    meta.activity_code = m[1].str();
    meta.subject_code = m[2].str();
    meta.trial = std::stoi(m[3].str());
    meta.label = meta.activity_code.front() == 'F' ? Label::Fall : Label::ADL;
    meta.source_path = filename;
    if (meta.trial < 1) {
        throw ParseError("file name '" + filename + "': trial number must be >= 1");
    }
    return meta;
}

ScanResult scan_corpus(const std::filesystem::path& root) {
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec)) {
        throw IoError("corpus root '" + root.string() + "' is not a readable directory");
    }

    ScanResult result;
    auto it = std::filesystem::recursive_directory_iterator(root, ec);
    if (ec) {
        throw IoError("cannot scan '" + root.string() + "': " + ec.message());
    }
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".txt") continue;
        try {
            result.entries.push_back(label_from_name(entry.path().string()));
        } catch (const ParseError&) {
            result.skipped.push_back(entry.path().string());
        }
    }

    std::sort(result.entries.begin(), result.entries.end(),
              [](const RecordingMeta& a, const RecordingMeta& b) { return a.source_path < b.source_path; });
    std::sort(result.skipped.begin(), result.skipped.end());
    return result;
}

RawRecording parse_recording(std::istream& content, const RecordingMeta& meta) {
    RawRecording raw;
    raw.meta = meta;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(content, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body.back() == ';') {
            body.pop_back();
            body = trim(body);
        }

        std::array<std::int32_t, kNumChannels> values{};
        std::size_t field = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = body.find(',', start);
            const std::string token = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (field >= kNumChannels) {
                throw ParseError(meta.source_path + ":" + std::to_string(line_no) +
                                 ": expected 9 fields, found more");
            }
            values[field++] = parse_int_field(token, meta, line_no);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (field != kNumChannels) {
            throw ParseError(meta.source_path + ":" + std::to_string(line_no) +
                             ": expected 9 fields, found " + std::to_string(field));
        }
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            raw.channels[c].push_back(values[c]);
        }
    }

    if (raw.length() == 0) {
        throw ParseError(meta.source_path + ": recording contains no data lines");
    }
    return raw;
}

RawRecording parse_recording_file(const std::filesystem::path& path, const RecordingMeta& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse_recording(in, meta);
}

void serialize_recording(const RawRecording& raw, std::ostream& out) {
    const std::size_t n = raw.length();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            if (c != 0) out << ',';
            out << raw.channels[c][i];
        }
        out << ";\n";
    }
}

Recording calibrate(const RawRecording& raw, std::span<const SensorSpec> specs) {
    if (specs.size() != kNumSensors) {
        throw ConfigError("calibration table must list exactly 3 sensors, got " +
                          std::to_string(specs.size()));
    }
    for (const auto& spec : specs) spec.validate();

    Recording rec;
    rec.meta = raw.meta;
    rec.sample_rate_hz = raw.sample_rate_hz;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const double scale = specs[c / 3].scale();
        rec.channels[c].resize(raw.channels[c].size());
        std::transform(raw.channels[c].begin(), raw.channels[c].end(), rec.channels[c].begin(),
                       [scale](std::int32_t v) { return static_cast<double>(v) * scale; });
    }
    return rec;
}

RawRecording quantize(const Recording& rec, std::span<const SensorSpec> specs) {
    if (specs.size() != kNumSensors) {
        throw ConfigError("calibration table must list exactly 3 sensors, got " +
                          std::to_string(specs.size()));
    }
    RawRecording raw;
    raw.meta = rec.meta;
    raw.sample_rate_hz = rec.sample_rate_hz;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const SensorSpec& spec = specs[c / 3];
        spec.validate();
        const double scale = spec.scale();
        const double lo = -std::ldexp(1.0, spec.resolution_bits - 1);
        const double hi = std::ldexp(1.0, spec.resolution_bits - 1) - 1.0;
        raw.channels[c].resize(rec.channels[c].size());
        std::transform(rec.channels[c].begin(), rec.channels[c].end(), raw.channels[c].begin(),
                       [&](double v) {
                           const double q = std::clamp(std::round(v / scale), lo, hi);
                           return static_cast<std::int32_t>(q);
                       });
    }
    return raw;
}

namespace {

// Half-sine pulse, 0 outside [t0, t0 + width].
double pulse(double t, double t0, double width, double amplitude) {
    if (t < t0 || t > t0 + width) return 0.0;
    return amplitude * std::sin((t - t0) / width * 3.141592653589793238);
}

}  // namespace

Recording generate_synthetic(Label label, double duration_s, std::uint64_t seed) {
    if (!(duration_s > 0.0)) {
        throw ConfigError("synthetic duration must be positive");
    }

    Rng rng(mix_seed(seed, label == Label::Fall ? 0xfa11 : 0xad1));
    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * kSampleRateHz));

    Recording rec;
    rec.meta.activity_code = label == Label::Fall ? "F01" : "D01";
    rec.meta.subject_code = "SY01";
    rec.meta.trial = 1;
    rec.meta.label = label;
    rec.meta.source_path = rec.meta.stem();
    for (auto& ch : rec.channels) ch.resize(n);

    // Per-recording draws; clamped noise keeps ADL magnitudes near 1 g.
    const double sway_hz = rng.uniform(0.8, 2.0);
    const double amp_x = rng.uniform(0.04, 0.12);
    const double amp_y = rng.uniform(0.03, 0.10);
    const double amp_z = rng.uniform(0.04, 0.12);
    const double phase_x = rng.uniform(0.0, 6.28);
    const double phase_y = rng.uniform(0.0, 6.28);
    const double phase_z = rng.uniform(0.0, 6.28);
    const double gyro_amp = rng.uniform(5.0, 20.0);

    const double fall_at = label == Label::Fall ? rng.uniform(0.35, 0.55) * duration_s : 0.0;
    const double impact_width = rng.uniform(0.15, 0.25);
    const double impact_g = rng.uniform(4.5, 6.5);
    const double gyro_spike = rng.uniform(150.0, 300.0);
    const double settle = fall_at + impact_width;

    auto noise = [&rng](double sigma) {
        return std::clamp(rng.normal(), -4.0, 4.0) * sigma;
    };

    const double two_pi = 6.283185307179586477;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kSampleRateHz;

        double ax = amp_x * std::sin(two_pi * sway_hz * t + phase_x);
        double ay = amp_y * std::sin(two_pi * 0.5 * sway_hz * t + phase_y);
        double az = 1.0 + amp_z * std::sin(two_pi * sway_hz * t + phase_z);
        double gx = gyro_amp * std::sin(two_pi * sway_hz * t + phase_y);
        double gy = gyro_amp * 0.6 * std::sin(two_pi * 0.7 * sway_hz * t + phase_z);
        double gz = gyro_amp * 0.3 * std::sin(two_pi * 0.4 * sway_hz * t + phase_x);

        if (label == Label::Fall) {
            if (t >= settle) {
                // lying down: gravity moved from z to x
                ax = 1.0 + 0.3 * amp_x * std::sin(two_pi * 0.3 * t);
                ay = 0.1;
                az = 0.1;
                gx = gy = gz = 0.0;
            }
            ax += pulse(t, fall_at, impact_width, impact_g * 0.8);
            az += pulse(t, fall_at, impact_width, -impact_g * 0.7);
            gx += pulse(t, fall_at, impact_width, gyro_spike);
            gy += pulse(t, fall_at, impact_width, -gyro_spike * 0.5);
        }

        rec.channels[0][i] = ax + noise(0.01);
        rec.channels[1][i] = ay + noise(0.01);
        rec.channels[2][i] = az + noise(0.01);
        rec.channels[3][i] = gx + noise(0.5);
        rec.channels[4][i] = gy + noise(0.5);
        rec.channels[5][i] = gz + noise(0.5);
        // second accelerometer sees the same motion with its own noise floor
        rec.channels[6][i] = ax + noise(0.02);
        rec.channels[7][i] = ay + noise(0.02);
        rec.channels[8][i] = az + noise(0.02);
    }
    return rec;
}

}  // namespace falldet
