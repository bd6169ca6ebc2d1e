#pragma once

#include <filesystem>
#include <string>

#include "report.hpp"

namespace hpade::cli {

/// Line chart of log10(value) against n. The fitted line is dashed; when a
/// predicted rate is known a guide of that slope starts at the first plotted
/// value. Non-positive values are left out.
std::string render_svg(const SeriesRecord& s, const std::string& title);

void write_svg(const std::filesystem::path& path, const SeriesRecord& s, const std::string& title);

}  // namespace hpade::cli
