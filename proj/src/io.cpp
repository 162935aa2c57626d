#include "gfc/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace gfc::io {

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const nlohmann::json& config,
                     const std::vector<std::string>& columns)
    : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    out_ << "# config: " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_float(values[i]);
    out_ << "\n";
}

void CsvWriter::row_raw(const std::string& line) { out_ << line << "\n"; }

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace gfc::io
