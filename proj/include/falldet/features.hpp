#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "falldet/dsp.hpp"
#include "falldet/ingest.hpp"

namespace falldet {

inline constexpr std::size_t kFeaturesPerChannel = 6;
inline constexpr std::size_t kFeatureDim = 54;  // 3 sensors x 3 axes x 6 statistics

// Population (divide-by-N) statistics of one channel. Kurtosis is the
// non-excess m4/m2^2 (Gaussian -> 3); skewness is m3/m2^(3/2). A degenerate
// channel (m2 <= 1e-12) reports kurtosis = skewness = 0 so constant signals
// cannot abort corpus processing.
struct ChannelFeatures {
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double kurtosis = 0.0;
    double skewness = 0.0;
};

struct FeatureVector {
    std::array<double, kFeatureDim> values{};
    Label label = Label::ADL;
    RecordingMeta meta;
};

struct FeatureMatrix {
    std::vector<FeatureVector> rows;

    std::size_t count(Label label) const;
};

ChannelFeatures channel_features(const std::vector<double>& series);  // throws on empty input

// Filters every channel, then lays the statistics out channel-major:
// slot (sensor*3 + axis)*6 + {max,min,mean,variance,kurtosis,skewness}.
FeatureVector feature_vector(const Recording& recording, const BiquadCascade& cascade,
                             bool zero_phase = false);

// Cache file: CSV with header "meta,label,f00..f53", labels FALL/ADL, values
// in shortest round-trip decimal form. Writing is atomic (temp + rename).
void write_cache(const FeatureMatrix& matrix, const std::filesystem::path& path);
FeatureMatrix read_cache(const std::filesystem::path& path);

}  // namespace falldet
