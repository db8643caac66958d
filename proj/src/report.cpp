#include "ais/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ais {

std::string render_csv(std::span<const std::string> header,
                       std::span<const std::vector<std::string>> rows) {
    std::string out;
    auto append_row = [&out](std::span<const std::string> fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out.push_back(',');
            out += fields[i];
        }
        out.push_back('\n');
    };
    append_row(header);
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw std::logic_error("CSV row width " + std::to_string(row.size()) +
                                   " does not match header width " +
                                   std::to_string(header.size()));
        }
        append_row(row);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw std::runtime_error("failed reading file '" + path + "'");
    return std::move(buffer).str();
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing file '" + path + "'");
}

}  // namespace ais
