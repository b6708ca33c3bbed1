#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mfgexec {

/// Shortest representation that round-trips the exact double (std::to_chars).
std::string format_double(double v);

/// Column-oriented table written as CSV with a header row. All columns must
/// share one length; text is written byte-identically for identical input.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  ///< data[c][row]

    void add_column(std::string name, std::vector<double> values);
    std::size_t n_rows() const { return data.empty() ? 0 : data.front().size(); }
    std::string to_string() const;
    void write(const std::filesystem::path& file) const;
};

void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace mfgexec
