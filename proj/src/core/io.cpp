#include "core/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace rgkit {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : width_(header.size()) {
    std::filesystem::create_directories(path.parent_path());
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) throw ConfigError("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        std::fprintf(f_, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, "%.17g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, "%s%s", values[i].c_str(), i + 1 < values.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << content;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fingerprint(const std::string& content) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rgkit
