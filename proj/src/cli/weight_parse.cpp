#include "tracelab/cli/weight_parse.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace tracelab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& whole) {
  std::string s = text;
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ContractViolation("cannot parse complex number '" + whole + "'");
  return v;
}

// Coefficient of i: "", "+" and "-" mean ±1.
double parse_imag_coefficient(const std::string& text, const std::string& whole) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  return parse_real(text, whole);
}

}  // namespace

Complex parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ContractViolation("empty complex number");
  if (s.back() != 'i') return {parse_real(s, raw), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_imag_coefficient(body, raw)};
  return {parse_real(body.substr(0, split), raw), parse_imag_coefficient(body.substr(split), raw)};
}

WeightSpec parse_weight_spec(const std::string& text, std::size_t count) {
  const std::string s = trim(text);
  if (s == "harmonic") return WeightSpec::harmonic(count);
  if (s == "invsq") return WeightSpec::inverse_square(count);
  const std::string prefix = "list:";
  if (s.rfind(prefix, 0) == 0) {
    std::vector<Complex> values;
    std::string rest = s.substr(prefix.size());
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      values.push_back(parse_complex(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return WeightSpec::explicit_list(std::move(values));
  }
  throw ContractViolation("unknown weight spec '" + text + "' (expected harmonic, invsq or list:v1,v2,...)");
}

}  // namespace tracelab::cli
