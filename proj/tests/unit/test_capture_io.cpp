#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "jitterlink/capture_io.hpp"
#include "jitterlink/error.hpp"

using namespace jitterlink;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "jitterlink_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
    for (double x : {0.0, 1.0, -2.5e-300, 0.1, 1.0 / 3.0, 6.02214076e23}) CHECK(parse_double(format_double(x), "x") == x);
    CHECK_THROWS_AS(parse_double("1.0abc", "field"), IoError);
    CHECK_THROWS_AS(parse_double("", "field"), IoError);
}

TEST_CASE("capture CSV round-trip with sidecar") {
    const auto path = scratch("cap.csv");
    CaptureMetadata meta{5e6, 4e5, "unit test capture", 42};
    std::vector<double> samples;
    for (int i = 0; i < 2500; ++i) samples.push_back(std::sin(i * 0.3) * 1e-3);
    {
        CaptureWriter w(path, meta);
        w.write(std::span<const double>(samples.data(), 1000));
        w.write(std::span<const double>(samples.data() + 1000, 1500));
        CHECK(w.written() == 2500);
        w.close();
    }
    CHECK(metadata_path_for(path) == scratch("cap.meta"));
    CHECK(slurp(path).rfind("time_s,volts\n", 0) == 0);
    CaptureMetadata back;
    const auto read = read_capture(path, &back);
    CHECK(read == samples);
    CHECK(back.sample_rate_hz == 5e6);
    CHECK(back.f_if_hz == 4e5);
    CHECK(back.description == "unit test capture");
    CHECK(back.seed == 42);

    CaptureReader reader(path);
    std::vector<double> block;
    std::size_t total = 0;
    while (reader.read(block, 700)) total += block.size();
    CHECK(total == 2500);
}

TEST_CASE("capture reader rejects malformed files") {
    const auto path = scratch("bad.csv");
    write_metadata(metadata_path_for(path), CaptureMetadata{1000.0, 100.0, "bad", 1});
    {
        std::ofstream out(path);
        out << "time,volts\n0,1\n";
    }
    CHECK_THROWS_AS(read_capture(path), IoError);
    {
        std::ofstream out(path);
        out << "time_s,volts\n0,1\n0.001,2\n0.005,3\n";
    }
    CHECK_THROWS_AS(read_capture(path), IoError);
    {
        std::ofstream out(path);
        out << "time_s,volts\n0,1\n0.001,x\n";
    }
    CHECK_THROWS_AS(read_capture(path), IoError);
    {
        std::ofstream out(metadata_path_for(path));
        out << "sample_rate_hz=1000\nf_if_hz=100\nsmaple=1\n";
    }
    CHECK_THROWS(read_metadata(metadata_path_for(path)));
    CHECK_THROWS_AS(read_capture(scratch("missing.csv")), IoError);
}

TEST_CASE("generic CSV and key-value report") {
    const auto path = scratch("table.csv");
    CsvWriter w(path, {"a", "b"});
    w.row({1.0, 2.5});
    w.row({-3.0, 1e-9});
    w.close();
    const auto t = read_csv(path);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.column("b") == 1);
    CHECK(t.rows[1][1] == 1e-9);
    CHECK_THROWS_AS(t.column("c"), IoError);

    KeyValueReport r;
    r.add("target", "mean");
    r.add("gamma", 9.5);
    r.add_blank();
    r.add("target", "peak");
    CHECK(r.str() == "target=mean\ngamma=9.5\n\ntarget=peak\n");
}
