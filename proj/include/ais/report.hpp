#pragma once

// Report plumbing for the batch CLI: deterministic CSV rendering (LF line
// endings, shortest round-trip doubles via format_double) and whole-file
// text IO. Outputs must be byte-identical across runs with equal inputs, so
// nothing here may embed timestamps, locales, or pointer-dependent order.

#include <span>
#include <string>
#include <vector>

namespace ais {

// Header row plus data rows; every row must match the header's width.
std::string render_csv(std::span<const std::string> header,
                       std::span<const std::vector<std::string>> rows);

// Throws std::runtime_error naming the path on failure.
std::string read_text_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& content);

}  // namespace ais
