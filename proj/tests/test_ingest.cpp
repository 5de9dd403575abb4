#include <cmath>
#include <sstream>

#include <doctest.h>

#include "falldet/errors.hpp"
#include "falldet/ingest.hpp"
#include "test_util.hpp"

using namespace falldet;

TEST_SUITE("ingest") {

TEST_CASE("file names parse into metadata") {
    const RecordingMeta fall = label_from_name("F01_SE06_R02.txt");
    CHECK(fall.activity_code == "F01");
    CHECK(fall.subject_code == "SE06");
    CHECK(fall.trial == 2);
    CHECK(fall.label == Label::Fall);

    const RecordingMeta adl = label_from_name("D05_SA11_R03.txt");
    CHECK(adl.activity_code == "D05");
    CHECK(adl.subject_code == "SA11");
    CHECK(adl.trial == 3);
    CHECK(adl.label == Label::ADL);

    CHECK_THROWS_AS(label_from_name("notes.md"), ParseError);
    CHECK_THROWS_AS(label_from_name("F01_SE06.txt"), ParseError);
}

TEST_CASE("data lines parse into nine equal channels") {
    RecordingMeta meta = label_from_name("D01_SA01_R01.txt");

    std::istringstream one("9,-239,1024,0,0,0,36,-956,4096;\n");
    const RawRecording raw = parse_recording(one, meta);
    REQUIRE(raw.length() == 1);
    const std::int32_t expected[] = {9, -239, 1024, 0, 0, 0, 36, -956, 4096};
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        CHECK(raw.channels[c][0] == expected[c]);
    }

    std::istringstream blank("1,2,3,4,5,6,7,8,9;\n\n");
    CHECK(parse_recording(blank, meta).length() == 1);

    std::istringstream crlf("1,2,3,4,5,6,7,8,9;\r\n1, 2, 3, 4, 5, 6, 7, 8, 9\r\n");
    const RawRecording two = parse_recording(crlf, meta);
    CHECK(two.length() == 2);
    CHECK(two.channels[8][1] == 9);
}

TEST_CASE("malformed lines are hard errors") {
    RecordingMeta meta = label_from_name("D01_SA01_R01.txt");

    std::istringstream short_line("1,2,3;\n");
    try {
        parse_recording(short_line, meta);
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find(":1") != std::string::npos);  // line number
        CHECK(what.find("3") != std::string::npos);
    }

    std::istringstream bad_line_two("1,2,3,4,5,6,7,8,9;\n1,2,x,4,5,6,7,8,9;\n");
    try {
        parse_recording(bad_line_two, meta);
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    std::istringstream empty("\n\n");
    CHECK_THROWS_AS(parse_recording(empty, meta), ParseError);
}

TEST_CASE("calibration applies the LSB scale") {
    const CalibrationTable table = default_calibration();
    // oracle: the scale definition evaluated directly
    CHECK(table[0].scale() == doctest::Approx(2.0 * 16.0 / std::pow(2.0, 13)).epsilon(1e-15));
    CHECK(table[1].scale() == doctest::Approx(2.0 * 2000.0 / std::pow(2.0, 16)).epsilon(1e-15));
    CHECK(table[2].scale() == doctest::Approx(2.0 * 8.0 / std::pow(2.0, 14)).epsilon(1e-15));

    RecordingMeta meta = label_from_name("D01_SA01_R01.txt");
    std::istringstream line("256,0,-256,16384,0,0,1024,0,0;\n");
    const Recording rec = calibrate(parse_recording(line, meta), table);
    CHECK(rec.channels[0][0] == doctest::Approx(1.0).epsilon(1e-12));     // +-16 g, 13 bit
    CHECK(rec.channels[1][0] == 0.0);
    CHECK(rec.channels[2][0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rec.channels[3][0] == doctest::Approx(1000.0).epsilon(1e-12));  // +-2000 deg/s, 16 bit
    CHECK(rec.channels[6][0] == doctest::Approx(1.0).epsilon(1e-12));     // +-8 g, 14 bit
}

TEST_CASE("calibration rejects mismatched or invalid sensor specs") {
    RecordingMeta meta = label_from_name("D01_SA01_R01.txt");
    std::istringstream line("1,2,3,4,5,6,7,8,9;\n");
    const RawRecording raw = parse_recording(line, meta);

    const CalibrationTable table = default_calibration();
    CHECK_THROWS_AS(calibrate(raw, std::span<const SensorSpec>(table.data(), 2)), ConfigError);

    SensorSpec bad = table[0];
    bad.resolution_bits = 4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = table[0];
    bad.range = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("calibration is linear in the raw counts") {
    RecordingMeta meta = label_from_name("D01_SA01_R01.txt");
    std::istringstream line("3,-7,11,19,-2,5,8,-13,21;\n");
    const RawRecording raw = parse_recording(line, meta);

    RawRecording scaled = raw;
    const std::int32_t k = 17;
    for (auto& ch : scaled.channels) {
        for (auto& v : ch) v *= k;
    }

    const CalibrationTable table = default_calibration();
    const Recording rec = calibrate(raw, table);
    const Recording rec_scaled = calibrate(scaled, table);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        CHECK(rec_scaled.channels[c][0] == doctest::Approx(k * rec.channels[c][0]).epsilon(1e-12));
    }
}

TEST_CASE("corpus scan finds, labels and orders recordings") {
    testutil::TempDir dir("scan");
    testutil::write_file(dir.file("D01_SA01_R01.txt"), "1,2,3,4,5,6,7,8,9;\n");
    std::filesystem::create_directories(dir.file("sub"));
    testutil::write_file(dir.path() / "sub" / "F01_SE06_R02.txt", "1,2,3,4,5,6,7,8,9;\n");
    testutil::write_file(dir.file("Readme.txt"), "not a recording\n");
    testutil::write_file(dir.file("notes.md"), "ignored entirely\n");

    const ScanResult scan = scan_corpus(dir.path());
    REQUIRE(scan.entries.size() == 2);
    CHECK(scan.count(Label::ADL) == 1);
    CHECK(scan.count(Label::Fall) == 1);
    CHECK(scan.entries[0].source_path < scan.entries[1].source_path);
    REQUIRE(scan.skipped.size() == 1);
    CHECK(scan.skipped[0].find("Readme.txt") != std::string::npos);
}

TEST_CASE("empty directory scans to an empty list") {
    testutil::TempDir dir("scan_empty");
    const ScanResult scan = scan_corpus(dir.path());
    CHECK(scan.entries.empty());
    CHECK(scan.skipped.empty());
}

TEST_CASE("missing root is fatal") {
    CHECK_THROWS_AS(scan_corpus("/no/such/directory/anywhere"), IoError);
}

TEST_CASE("synthetic ADL stays near the 1 g baseline") {
    const Recording rec = generate_synthetic(Label::ADL, 10.0, 42);
    REQUIRE(rec.length() == 2000);
    for (const std::size_t base : {std::size_t{0}, std::size_t{6}}) {  // both accelerometers
        for (std::size_t i = 0; i < rec.length(); ++i) {
            const double mag = std::sqrt(rec.channels[base][i] * rec.channels[base][i] +
                                         rec.channels[base + 1][i] * rec.channels[base + 1][i] +
                                         rec.channels[base + 2][i] * rec.channels[base + 2][i]);
            CHECK(std::abs(mag - 1.0) < 0.5);
        }
    }
}

TEST_CASE("synthetic fall contains a >= 3 g impact") {
    const Recording rec = generate_synthetic(Label::Fall, 10.0, 42);
    double peak = 0.0;
    for (std::size_t i = 0; i < rec.length(); ++i) {
        const double mag = std::sqrt(rec.channels[0][i] * rec.channels[0][i] +
                                     rec.channels[1][i] * rec.channels[1][i] +
                                     rec.channels[2][i] * rec.channels[2][i]);
        peak = std::max(peak, mag);
    }
    CHECK(peak >= 3.0);
    CHECK(rec.meta.label == Label::Fall);
}

TEST_CASE("synthetic generation is deterministic") {
    const Recording a = generate_synthetic(Label::Fall, 4.0, 9001);
    const Recording b = generate_synthetic(Label::Fall, 4.0, 9001);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        REQUIRE(a.channels[c].size() == b.channels[c].size());
        for (std::size_t i = 0; i < a.channels[c].size(); ++i) {
            CHECK(a.channels[c][i] == b.channels[c][i]);
        }
    }
    CHECK_THROWS_AS(generate_synthetic(Label::ADL, 0.0, 1), ConfigError);
}

TEST_CASE("serialize then parse is the identity on raw recordings") {
    const CalibrationTable table = default_calibration();
    for (const Label label : {Label::Fall, Label::ADL}) {
        const Recording rec = generate_synthetic(label, 2.0, 77);
        const RawRecording raw = quantize(rec, table);

        std::stringstream buf;
        serialize_recording(raw, buf);
        const RawRecording back = parse_recording(buf, raw.meta);

        REQUIRE(back.length() == raw.length());
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            for (std::size_t i = 0; i < raw.length(); ++i) {
                CHECK(back.channels[c][i] == raw.channels[c][i]);
            }
        }
    }
}

TEST_CASE("quantize then calibrate stays within half an LSB") {
    const CalibrationTable table = default_calibration();
    const Recording rec = generate_synthetic(Label::ADL, 1.0, 5);
    const Recording round_trip = calibrate(quantize(rec, table), table);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const double lsb = table[c / 3].scale();
        for (std::size_t i = 0; i < rec.length(); ++i) {
            CHECK(std::abs(round_trip.channels[c][i] - rec.channels[c][i]) <= 0.5 * lsb + 1e-12);
        }
    }
}

}  // TEST_SUITE
