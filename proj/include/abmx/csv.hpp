#pragma once

#include <string>

#include "abmx/batch.hpp"

namespace abmx {

// Reals printed with 17 significant digits so parsing the text recovers the
// exact double.
std::string format_real(double v);

std::string trajectory_to_csv(const Trajectory& t);

// Writes through a temp file and renames, so failures leave no partial file.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace abmx
