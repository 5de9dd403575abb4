#include "falldet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "falldet/errors.hpp"

namespace falldet {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const std::string t = trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const std::string t = trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string t = trim(value);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

// "kind,range,bits", e.g. "accelerometer,16,13"
SensorSpec parse_sensor(const std::string& key, const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(trim(part));
    if (parts.size() != 3) {
        throw ConfigError("config key '" + key + "': expected kind,range,bits");
    }
    SensorSpec spec;
    spec.name = key.substr(key.rfind('.') + 1);
    if (parts[0] == "accelerometer") spec.kind = SensorKind::Accelerometer;
    else if (parts[0] == "gyroscope") spec.kind = SensorKind::Gyroscope;
    else throw ConfigError("config key '" + key + "': unknown sensor kind '" + parts[0] + "'");
    spec.range = parse_double(key, parts[1]);
    spec.resolution_bits = static_cast<int>(parse_int(key, parts[2]));
    spec.validate();
    return spec;
}

}  // namespace

std::vector<ClassifierKind> parse_classifier_list(const std::string& csv) {
    std::vector<ClassifierKind> kinds;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const std::string name = trim(part);
        if (name.empty()) continue;
        kinds.push_back(classifier_from_string(name));
    }
    if (kinds.empty()) {
        throw ConfigError("classifier list is empty");
    }
    std::vector<ClassifierKind> unique;
    for (ClassifierKind k : kinds) {
        if (std::find(unique.begin(), unique.end(), k) == unique.end()) unique.push_back(k);
    }
    return unique;
}

void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value) {
    if (key == "root") config.root = trim(value);
    else if (key == "cache") config.cache = trim(value);
    else if (key == "out") config.out_dir = trim(value);
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "folds") config.folds = static_cast<int>(parse_int(key, value));
    else if (key == "workers") config.workers = static_cast<int>(parse_int(key, value));
    else if (key == "classifiers") config.classifiers = parse_classifier_list(value);
    else if (key == "no_scaling") config.no_scaling = parse_bool(key, value);
    else if (key == "no_stratify") config.no_stratify = parse_bool(key, value);
    else if (key == "zero_phase") config.zero_phase = parse_bool(key, value);
    else if (key == "filter.order") config.filter.order = static_cast<int>(parse_int(key, value));
    else if (key == "filter.cutoff_hz") config.filter.cutoff_hz = parse_double(key, value);
    else if (key == "filter.sample_rate_hz") config.filter.sample_rate_hz = parse_double(key, value);
    else if (key == "calibration.sensor0") config.calibration[0] = parse_sensor(key, value);
    else if (key == "calibration.sensor1") config.calibration[1] = parse_sensor(key, value);
    else if (key == "calibration.sensor2") config.calibration[2] = parse_sensor(key, value);
    else if (key == "svm.c") config.params.svm.c = parse_double(key, value);
    else if (key == "svm.scale") config.params.svm.kernel_scale = parse_double(key, value);
    else if (key == "svm.tol") config.params.svm.tol = parse_double(key, value);
    else if (key == "svm.max_passes") config.params.svm.max_passes = static_cast<int>(parse_int(key, value));
    else if (key == "dt.max_depth") config.params.dt.max_depth = static_cast<int>(parse_int(key, value));
    else if (key == "dt.min_leaf") config.params.dt.min_leaf = static_cast<int>(parse_int(key, value));
    else if (key == "lr.learning_rate") config.params.lr.learning_rate = parse_double(key, value);
    else if (key == "lr.l2") config.params.lr.l2 = parse_double(key, value);
    else if (key == "lr.epochs") config.params.lr.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "synth.count") config.synth_count = static_cast<int>(parse_int(key, value));
    else if (key == "synth.duration_s") config.synth_duration_s = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig load_config_file(const std::filesystem::path& path, const PipelineConfig& base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    PipelineConfig config = base;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        apply_config_entry(config, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    return config;
}

void PipelineConfig::validate() const {
    filter.validate();
    for (const SensorSpec& spec : calibration) spec.validate();
    if (folds < 2) {
        throw ConfigError("folds must be >= 2, got " + std::to_string(folds));
    }
    if (classifiers.empty()) {
        throw ConfigError("classifier list is empty");
    }
    if (workers < 0) {
        throw ConfigError("workers must be >= 0");
    }
    if (!(params.svm.c > 0.0) || !(params.svm.kernel_scale > 0.0) || !(params.svm.tol > 0.0) ||
        params.svm.max_passes < 1) {
        throw ConfigError("invalid svm hyperparameters");
    }
    if (!(params.lr.learning_rate > 0.0) || params.lr.l2 < 0.0 || params.lr.epochs < 1) {
        throw ConfigError("invalid lr hyperparameters");
    }
    if (params.dt.min_leaf < 1) {
        throw ConfigError("dt.min_leaf must be >= 1");
    }
    if (synth_count < 1 || !(synth_duration_s > 0.0)) {
        throw ConfigError("synth settings must be positive");
    }
    if (cache.empty()) {
        throw ConfigError("cache path is empty");
    }
}

}  // namespace falldet
