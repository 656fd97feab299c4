#include "wiggle/format.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace wiggle {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

double parse_real(std::string_view t, std::string_view whole) {
  if (t.empty()) throw InvalidParameter("bad complex literal '" + std::string(whole) + "'");
  if (t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size()) {
    throw InvalidParameter("bad complex literal '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  if (t.empty()) throw InvalidParameter("empty complex literal");
  if (t.back() != 'i') return {parse_real(t, text), 0.0};
  t.remove_suffix(1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_real(t, text)};
  return {parse_real(t.substr(0, split), text), parse_real(t.substr(split), text)};
}

}  // namespace wiggle
