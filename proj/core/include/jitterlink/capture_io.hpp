#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jitterlink {

/// Shortest round-trip decimal representation of `value`.
std::string format_double(double value);

/// Parse a complete decimal field; IoError naming `context` on failure.
double parse_double(std::string_view text, std::string_view context);

/// Contents of the `.meta` sidecar that accompanies every capture CSV.
struct CaptureMetadata {
    double sample_rate_hz = 0.0;
    double f_if_hz = 0.0;
    std::string description;
    std::uint64_t seed = 0;
};

/// Sidecar path: same basename with the extension replaced by `.meta`.
std::filesystem::path metadata_path_for(const std::filesystem::path& capture);

void write_metadata(const std::filesystem::path& path, const CaptureMetadata& meta);
CaptureMetadata read_metadata(const std::filesystem::path& path);

/// Streams samples to a `time_s,volts` CSV and writes its sidecar on construction.
class CaptureWriter {
public:
    CaptureWriter(const std::filesystem::path& path, const CaptureMetadata& meta);

    void write(std::span<const double> samples);
    std::size_t written() const noexcept { return index_; }
    /// Flushes and checks the stream; IoError on failure.
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    double sample_rate_hz_;
    std::size_t index_ = 0;
    std::string line_;
};

/// Streams samples back out of a capture CSV, checking the header and the uniform time grid
/// declared by the sidecar.
class CaptureReader {
public:
    explicit CaptureReader(const std::filesystem::path& path);

    const CaptureMetadata& metadata() const noexcept { return meta_; }
    /// Replace `block` with up to `max_samples` samples; returns false at end of file.
    bool read(std::vector<double>& block, std::size_t max_samples);
    std::size_t samples_read() const noexcept { return index_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    CaptureMetadata meta_;
    std::size_t index_ = 0;
    std::size_t line_number_ = 1;
    std::string line_;
};

/// Whole capture in memory.
std::vector<double> read_capture(const std::filesystem::path& path, CaptureMetadata* meta = nullptr);

/// Small column-oriented CSV writer with a mandatory header row.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::string line_;
};

/// Header and numeric rows of a CSV written by CsvWriter.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; IoError when absent.
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Ordered key=value report.
class KeyValueReport {
public:
    void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, double value) { add(std::move(key), format_double(value)); }
    void add_blank() { entries_.emplace_back(std::string(), std::string()); }

    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace jitterlink
