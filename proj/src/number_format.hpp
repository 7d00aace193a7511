#pragma once

#include <charconv>
#include <ostream>

namespace servokit::detail {

// Shortest round-trip decimal form, unaffected by the global locale.
inline void put_number(std::ostream& os, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

}  // namespace servokit::detail
