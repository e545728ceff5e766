#ifndef COSKIT_FORMAT_HPP
#define COSKIT_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace coskit {

// Shortest decimal string that parses back to exactly the same double.
// Used for every numeric field written to CSV so that save/load round-trips
// are bit-exact and output files are byte-stable.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace coskit

#endif  // COSKIT_FORMAT_HPP
