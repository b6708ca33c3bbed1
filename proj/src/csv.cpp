#include "mfgexec/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace mfgexec {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

void CsvTable::add_column(std::string name, std::vector<double> values) {
    if (!data.empty() && values.size() != data.front().size()) {
        throw std::invalid_argument("CsvTable: column '" + name + "' has mismatched length");
    }
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    const std::size_t rows = n_rows();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < data.size(); ++c) {
            if (c) out += ',';
            out += format_double(data[c][r]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& file) const {
    write_text_file(file, to_string());
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + file.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace mfgexec
