#include "io_util.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace fairgf {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorKind::io_error, "failed to format a double");
  }
  return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  // ERANGE underflow (subnormals) is fine; only reject junk and overflow.
  const bool overflow = errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL);
  if (end == begin || *end != '\0' || overflow) {
    throw Error(ErrorKind::parse_error,
                "expected a number in " + context + ", got '" + token + "'");
  }
  return v;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io_error, "cannot open " + path.string() +
                                         " for writing");
  }
  out << contents;
  if (!out) {
    throw Error(ErrorKind::io_error, "failed writing " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io_error, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fairgf
