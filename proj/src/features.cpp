#include "falldet/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "falldet/errors.hpp"

namespace falldet {

std::size_t FeatureMatrix::count(Label label) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(),
                      [label](const FeatureVector& r) { return r.label == label; }));
}

ChannelFeatures channel_features(const std::vector<double>& series) {
    if (series.empty()) {
        throw ParseError("cannot compute features of an empty series");
    }

    // Streaming central moments (Pebay update); the naive two-pass formulas
    // serve as the reference oracle in the tests.
    double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double lo = series.front(), hi = series.front();
    std::size_t n = 0;
    for (double x : series) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);

        const double n0 = static_cast<double>(n);
        ++n;
        const double nn = static_cast<double>(n);
        const double delta = x - mean;
        const double delta_n = delta / nn;
        const double delta_n2 = delta_n * delta_n;
        const double term1 = delta * delta_n * n0;
        mean += delta_n;
        m4 += term1 * delta_n2 * (nn * nn - 3.0 * nn + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
        m3 += term1 * delta_n * (nn - 2.0) - 3.0 * delta_n * m2;
        m2 += term1;
    }

    const double count = static_cast<double>(n);
    ChannelFeatures f;
    f.max = hi;
    f.min = lo;
    f.mean = mean;
    f.variance = m2 / count;
    const double c2 = f.variance;
    if (c2 <= 1e-12) {
        f.kurtosis = 0.0;
        f.skewness = 0.0;
    } else {
        const double c3 = m3 / count;
        const double c4 = m4 / count;
        f.kurtosis = c4 / (c2 * c2);
        f.skewness = c3 / (c2 * std::sqrt(c2));
    }
    return f;
}

FeatureVector feature_vector(const Recording& recording, const BiquadCascade& cascade,
                             bool zero_phase) {
    FeatureVector out;
    out.label = recording.meta.label;
    out.meta = recording.meta;

    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const std::vector<double> filtered = zero_phase
                                                 ? filter_signal_zero_phase(recording.channels[c], cascade)
                                                 : filter_signal(recording.channels[c], cascade);
        const ChannelFeatures f = channel_features(filtered);
        double* slot = out.values.data() + c * kFeaturesPerChannel;
        slot[0] = f.max;
        slot[1] = f.min;
        slot[2] = f.mean;
        slot[3] = f.variance;
        slot[4] = f.kurtosis;
        slot[5] = f.skewness;
    }

    for (double v : out.values) {
        if (!std::isfinite(v)) {
            throw ParseError("non-finite feature in recording '" + recording.meta.source_path + "'");
        }
    }
    return out;
}

namespace {

std::string cache_header() {
    std::string h = "meta,label";
    for (int i = 0; i < static_cast<int>(kFeatureDim); ++i) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ",f%02d", i);
        h += buf;
    }
    return h;
}

void append_double(std::string& line, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, r.ptr);
}

}  // namespace

void write_cache(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write cache '" + tmp.string() + "'");
        }
        out << cache_header() << '\n';
        for (const FeatureVector& row : matrix.rows) {
            const std::string& meta = row.meta.source_path;
            if (meta.empty() || meta.find_first_of(",\n\r") != std::string::npos) {
                throw IoError("cache meta field unusable for '" + meta + "'");
            }
            std::string line = meta;
            line.push_back(',');
            line += to_string(row.label);
            for (double v : row.values) {
                line.push_back(',');
                append_double(line, v);
            }
            line.push_back('\n');
            out << line;
        }
        if (!out.flush()) {
            throw IoError("failed writing cache '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

FeatureMatrix read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open cache '" + path.string() + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("cache '" + path.string() + "' is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != cache_header()) {
        throw ParseError("cache '" + path.string() + "' has an unexpected header");
    }

    FeatureMatrix matrix;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != kFeatureDim + 2) {
            throw ParseError(path.string() + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(fields.size()) + " columns, expected " +
                             std::to_string(kFeatureDim + 2));
        }

        FeatureVector row;
        try {
            row.meta = label_from_name(fields[0]);
        } catch (const ParseError&) {
            throw ParseError(path.string() + ": row " + std::to_string(row_no) +
                             " has an unparsable meta field '" + fields[0] + "'");
        }
        row.meta.source_path = fields[0];
        row.label = label_from_string(fields[1]);
        if (row.label != row.meta.label) {
            throw ParseError(path.string() + ": row " + std::to_string(row_no) +
                             " label disagrees with its activity code");
        }
        for (std::size_t i = 0; i < kFeatureDim; ++i) {
            const std::string& field = fields[i + 2];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
                throw ParseError(path.string() + ": row " + std::to_string(row_no) +
                                 " column f" + std::to_string(i) + " is not a finite number");
            }
            row.values[i] = v;
        }
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

}  // namespace falldet
