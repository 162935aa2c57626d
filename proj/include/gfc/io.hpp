#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace gfc::io {

// shortest round-trippable decimal form, '.' separator, locale-free
std::string format_float(double v);

// CSV with `# key: value` comment lines before the header row; bodies are
// byte-identical across reruns of the same configuration
class CsvWriter {
public:
    CsvWriter(const std::string& path, const nlohmann::json& config,
              const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void row_raw(const std::string& line);

private:
    std::ofstream out_;
};

void write_json(const std::string& path, const nlohmann::json& j);

} // namespace gfc::io
