#include "jitterlink/capture_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "jitterlink/error.hpp"

namespace jitterlink {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw IoError("number formatting failed");
    return std::string(buf.data(), end);
}

double parse_double(std::string_view text, std::string_view context) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError(std::string(context) + ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

std::filesystem::path metadata_path_for(const std::filesystem::path& capture) {
    auto meta = capture;
    meta.replace_extension(".meta");
    return meta;
}

void write_metadata(const std::filesystem::path& path, const CaptureMetadata& meta) {
    auto out = open_for_write(path);
    out << "sample_rate_hz=" << format_double(meta.sample_rate_hz) << '\n'
        << "f_if_hz=" << format_double(meta.f_if_hz) << '\n'
        << "description=" << meta.description << '\n'
        << "seed=" << meta.seed << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

CaptureMetadata read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("missing capture metadata " + path.string());
    CaptureMetadata meta;
    bool have_rate = false;
    bool have_if = false;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto eq = view.find('=');
        const std::string where = path.string() + ":" + std::to_string(number);
        if (eq == std::string_view::npos) throw IoError(where + ": expected key=value");
        const auto key = trim(view.substr(0, eq));
        const auto value = trim(view.substr(eq + 1));
        if (key == "sample_rate_hz") {
            meta.sample_rate_hz = parse_double(value, where);
            have_rate = true;
        } else if (key == "f_if_hz") {
            meta.f_if_hz = parse_double(value, where);
            have_if = true;
        } else if (key == "description") {
            meta.description = std::string(value);
        } else if (key == "seed") {
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), meta.seed);
            if (ec != std::errc{} || ptr != value.data() + value.size()) throw IoError(where + ": bad seed");
        } else {
            throw IoError(where + ": unknown metadata key '" + std::string(key) + "'");
        }
    }
    if (!have_rate || !have_if) throw IoError(path.string() + ": sample_rate_hz and f_if_hz are required");
    if (!(meta.sample_rate_hz > 0.0)) throw IoError(path.string() + ": sample_rate_hz must be positive");
    return meta;
}

CaptureWriter::CaptureWriter(const std::filesystem::path& path, const CaptureMetadata& meta)
    : path_(path), out_(open_for_write(path)), sample_rate_hz_(meta.sample_rate_hz) {
    detail::require_positive(meta.sample_rate_hz, "sample_rate_hz");
    write_metadata(metadata_path_for(path), meta);
    out_ << "time_s,volts\n";
}

void CaptureWriter::write(std::span<const double> samples) {
    for (const double v : samples) {
        line_ = format_double(static_cast<double>(index_) / sample_rate_hz_);
        line_ += ',';
        line_ += format_double(v);
        line_ += '\n';
        out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
        ++index_;
    }
}

void CaptureWriter::close() {
    out_.flush();
    if (!out_) throw IoError("failed writing " + path_.string());
    out_.close();
}

CaptureReader::CaptureReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary), meta_(read_metadata(metadata_path_for(path))) {
    if (!in_) throw IoError("cannot open capture " + path.string());
    if (!std::getline(in_, line_) || trim(line_) != "time_s,volts") {
        throw IoError(path.string() + ":1: expected header 'time_s,volts'");
    }
}

bool CaptureReader::read(std::vector<double>& block, std::size_t max_samples) {
    block.clear();
    const double step = 1.0 / meta_.sample_rate_hz;
    while (block.size() < max_samples && std::getline(in_, line_)) {
        ++line_number_;
        const std::string_view view = trim(line_);
        if (view.empty()) continue;
        const std::string where = path_.string() + ":" + std::to_string(line_number_);
        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            throw IoError(where + ": expected two fields");
        }
        const double t = parse_double(view.substr(0, comma), where);
        const double expected = static_cast<double>(index_) / meta_.sample_rate_hz;
        if (std::abs(t - expected) > 1e-3 * step + 1e-12 * std::abs(expected)) {
            throw IoError(where + ": time grid is not uniform at the declared sample rate");
        }
        block.push_back(parse_double(view.substr(comma + 1), where));
        ++index_;
    }
    return !block.empty();
}

std::vector<double> read_capture(const std::filesystem::path& path, CaptureMetadata* meta) {
    CaptureReader reader(path);
    std::vector<double> all;
    std::vector<double> block;
    while (reader.read(block, 1 << 16)) all.insert(all.end(), block.begin(), block.end());
    if (meta) *meta = reader.metadata();
    return all;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(open_for_write(path)), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    detail::require(values.size() == columns_, "CSV row width does not match header");
    line_.clear();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line_ += ',';
        line_ += format_double(values[i]);
    }
    line_ += '\n';
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw IoError("failed writing " + path_.string());
    out_.close();
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw IoError("CSV has no column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
    for (auto field : split_fields(line)) table.header.emplace_back(field);
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(number);
        const auto fields = split_fields(line);
        if (fields.size() != table.header.size()) throw IoError(where + ": wrong number of fields");
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(parse_double(f, where));
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string KeyValueReport::str() const {
    std::ostringstream os;
    for (const auto& [key, value] : entries_) {
        if (key.empty()) {
            os << '\n';
        } else {
            os << key << '=' << value << '\n';
        }
    }
    return os.str();
}

void KeyValueReport::write(const std::filesystem::path& path) const {
    auto out = open_for_write(path);
    out << str();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace jitterlink
