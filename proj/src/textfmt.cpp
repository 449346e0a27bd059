#include "qsync/textfmt.hpp"

#include <cstdio>

namespace qsync {

std::string fmt_double(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_double6(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string fmt_complex6(Complex z) {
  if (z.imag() == 0.0) return fmt_double6(z.real());
  std::string s = fmt_double6(z.real());
  s += (z.imag() < 0.0) ? "-" : "+";
  s += fmt_double6(std::abs(z.imag()));
  s += "i";
  return s;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string json_matrix(const Mat3& m) {
  std::string out = "[";
  for (int i = 0; i < 3; ++i) {
    out += (i == 0) ? "[" : ",[";
    for (int j = 0; j < 3; ++j) {
      if (j > 0) out += ",";
      out += "[" + fmt_double(m(i, j).real()) + "," +
             fmt_double(m(i, j).imag()) + "]";
    }
    out += "]";
  }
  out += "]";
  return out;
}

}  // namespace qsync
