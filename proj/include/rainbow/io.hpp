#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace rainbow {

// 17 significant digits, shortest general form; lossless for doubles.
std::string format_double(double value);

// "# <stamp>" reproducibility line written at the top of every CSV.
void write_stamp(std::ostream& os, std::string_view stamp);

}  // namespace rainbow
