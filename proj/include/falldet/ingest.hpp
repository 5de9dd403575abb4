#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace falldet {

enum class Label { Fall, ADL };

const char* to_string(Label label);
Label label_from_string(const std::string& s);  // "FALL" / "ADL"

enum class SensorKind { Accelerometer, Gyroscope };

// One device channel triple of the recording hardware. `scale()` is the
// physical value of one raw count: (2 * range) / 2^resolution_bits.
struct SensorSpec {
    std::string name;
    SensorKind kind = SensorKind::Accelerometer;
    double range = 0.0;  // full-scale magnitude, g or deg/s
    int resolution_bits = 0;

    double scale() const;
    void validate() const;  // throws ConfigError
};

using CalibrationTable = std::array<SensorSpec, 3>;

// SisFall device: ADXL345 (+-16 g, 13 bit), ITG3200 (+-2000 deg/s, 16 bit),
// MMA8451Q (+-8 g, 14 bit), in file column order.
CalibrationTable default_calibration();

struct RecordingMeta {
    std::string activity_code;  // D01..D19 ADL, F01..F15 fall
    std::string subject_code;   // SAxx young, SExx elderly
    int trial = 0;
    Label label = Label::ADL;
    std::string source_path;

    std::string stem() const;  // "<ACT>_<SUBJ>_R<NN>"
    bool operator==(const RecordingMeta&) const = default;
};

inline constexpr std::size_t kNumChannels = 9;
inline constexpr std::size_t kNumSensors = 3;
inline constexpr double kSampleRateHz = 200.0;

// Raw integer samples exactly as stored on disk, sensor-major:
// channels[s*3 + axis] with axis 0=x, 1=y, 2=z.
struct RawRecording {
    RecordingMeta meta;
    std::array<std::vector<std::int32_t>, kNumChannels> channels;
    double sample_rate_hz = kSampleRateHz;

    std::size_t length() const { return channels[0].size(); }
};

// Calibrated samples in physical units (g / deg/s), same layout.
struct Recording {
    RecordingMeta meta;
    std::array<std::vector<double>, kNumChannels> channels;
    double sample_rate_hz = kSampleRateHz;

    std::size_t length() const { return channels[0].size(); }
};

struct ScanResult {
    std::vector<RecordingMeta> entries;  // sorted by source_path
    std::vector<std::string> skipped;    // .txt files whose name did not parse

    std::size_t count(Label label) const;
};

// Parses a "<ACT>_<SUBJ>_R<NN>" file name (extension ignored). Fall iff the
// activity code starts with 'F'. Throws ParseError on a non-matching stem.
RecordingMeta label_from_name(const std::string& filename);

// Recursively discovers .txt recordings under root. Files with unparsable
// names are skipped and counted. Throws IoError if root is unusable.
ScanResult scan_corpus(const std::filesystem::path& root);

// One sample per line: 9 comma-separated integers, optional trailing ';'.
// Blank lines are ignored; anything else is a hard ParseError (silent
// skipping would bias downstream statistics).
RawRecording parse_recording(std::istream& content, const RecordingMeta& meta);
RawRecording parse_recording_file(const std::filesystem::path& path, const RecordingMeta& meta);

void serialize_recording(const RawRecording& raw, std::ostream& out);

// Multiplies every sample by its sensor's LSB scale. specs must hold exactly
// one entry per device sensor, in file column order.
Recording calibrate(const RawRecording& raw, std::span<const SensorSpec> specs);

// Inverse of calibrate: quantizes physical values back to raw counts,
// clamped to the sensor's representable range.
RawRecording quantize(const Recording& rec, std::span<const SensorSpec> specs);

// Deterministic test fixture. ADL: low-frequency sinusoids plus small noise
// around the 1 g gravity baseline. Fall: the same baseline, one >= 3 g
// impulse, then a changed-orientation plateau.
Recording generate_synthetic(Label label, double duration_s, std::uint64_t seed);

}  // namespace falldet
