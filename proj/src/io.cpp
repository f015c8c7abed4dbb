#include "rainbow/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace rainbow {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_stamp(std::ostream& os, std::string_view stamp) {
  os << "# " << stamp << '\n';
}

}  // namespace rainbow
