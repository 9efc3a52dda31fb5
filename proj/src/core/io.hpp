#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rgkit {

// CSV with a fixed header; numbers rendered with %.17g so identical runs are
// byte-identical.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    ~CsvWriter();

  private:
    FILE* f_ = nullptr;
    std::size_t width_ = 0;
};

std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// FNV-1a 64-bit content fingerprint, hex encoded.
std::string fingerprint(const std::string& content);

}  // namespace rgkit
