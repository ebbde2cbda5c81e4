#include "softcover/channel_spec.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace softcover {

namespace {

using Kind = ChannelSpecError::Kind;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Field {
  std::string value;
  int line = 0;
};

std::vector<double> parse_reals(const Field& f, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(f.value);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v))
      throw ChannelSpecError(Kind::syntax, "field '" + key + "': not a number '" + tok + "'", f.line);
    out.push_back(v);
  }
  return out;
}

std::size_t parse_size(const Field& f, const std::string& key) {
  const std::string v = trim(f.value);
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw ChannelSpecError(Kind::syntax, "field '" + key + "': not an integer '" + v + "'", f.line);
  if (n < 2) throw ChannelSpecError(Kind::size_mismatch, "field '" + key + "' must be >= 2", f.line);
  return static_cast<std::size_t>(n);
}

}  // namespace

ChannelSpec parse_channel_spec(const std::string& text) {
  static const char* const kKeys[] = {"name", "input_size", "output_size", "matrix", "input_dist"};
  std::map<std::string, Field> fields;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (current != "matrix" && current != "input_dist")
        throw ChannelSpecError(Kind::syntax, "expected 'key = value'", line_no);
      fields[current].value += " " + line;
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw ChannelSpecError(Kind::syntax, "unknown field '" + key + "'", line_no);
    if (fields.count(key)) throw ChannelSpecError(Kind::syntax, "duplicate field '" + key + "'", line_no);
    fields[key] = {trim(line.substr(eq + 1)), line_no};
    current = key;
  }
  for (const char* k : kKeys)
    if (!fields.count(k)) throw ChannelSpecError(Kind::missing_field, std::string("missing field '") + k + "'");

  ChannelSpec s;
  s.name = fields["name"].value;
  s.input_size = parse_size(fields["input_size"], "input_size");
  s.output_size = parse_size(fields["output_size"], "output_size");
  s.matrix = parse_reals(fields["matrix"], "matrix");
  s.input_dist = parse_reals(fields["input_dist"], "input_dist");

  const int m_line = fields["matrix"].line, p_line = fields["input_dist"].line;
  if (s.matrix.size() != s.input_size * s.output_size)
    throw ChannelSpecError(Kind::size_mismatch,
                           "matrix has " + std::to_string(s.matrix.size()) + " entries, expected " +
                               std::to_string(s.input_size * s.output_size) + " (" + std::to_string(s.input_size) +
                               " x " + std::to_string(s.output_size) + ")",
                           m_line);
  if (s.input_dist.size() != s.input_size)
    throw ChannelSpecError(Kind::size_mismatch,
                           "input_dist has " + std::to_string(s.input_dist.size()) + " entries, expected " +
                               std::to_string(s.input_size),
                           p_line);
  for (std::size_t i = 0; i < s.matrix.size(); ++i)
    if (s.matrix[i] < 0.0)
      throw ChannelSpecError(Kind::negative_entry,
                             "negative entry " + fmt(s.matrix[i]) + " in matrix row " +
                                 std::to_string(i / s.output_size + 1),
                             m_line);
  for (double v : s.input_dist)
    if (v < 0.0) throw ChannelSpecError(Kind::negative_entry, "negative entry " + fmt(v) + " in input_dist", p_line);
  for (std::size_t x = 0; x < s.input_size; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < s.output_size; ++y) sum += s.matrix[x * s.output_size + y];
    if (std::abs(sum - 1.0) > 1e-9)
      throw ChannelSpecError(Kind::non_stochastic, "row " + std::to_string(x + 1) + " sums to " + fmt(sum), m_line);
  }
  double total = 0.0;
  for (double v : s.input_dist) total += v;
  if (std::abs(total - 1.0) > 1e-9)
    throw ChannelSpecError(Kind::non_stochastic, "input_dist sums to " + fmt(total), p_line);
  for (std::size_t y = 0; y < s.output_size; ++y) {
    bool reachable = false;
    for (std::size_t x = 0; x < s.input_size; ++x) reachable = reachable || s.matrix[x * s.output_size + y] > 0.0;
    if (!reachable)
      throw ChannelSpecError(Kind::unreachable_output,
                             "output symbol " + std::to_string(y + 1) + " is unreachable (all-zero column)", m_line);
  }
  return s;
}

Channel ChannelSpec::channel() const {
  std::vector<Distribution> rows;
  for (std::size_t x = 0; x < input_size; ++x)
    rows.push_back(Distribution::normalized(std::vector<double>(
        matrix.begin() + static_cast<std::ptrdiff_t>(x * output_size),
        matrix.begin() + static_cast<std::ptrdiff_t>((x + 1) * output_size))));
  return Channel(std::move(rows));
}

Distribution ChannelSpec::input() const { return Distribution::normalized(input_dist); }

std::string ChannelSpec::canonical_text() const {
  std::string out = "name=" + name + "\ninput_size=" + std::to_string(input_size) +
                    "\noutput_size=" + std::to_string(output_size) + "\nmatrix=";
  char buf[32];
  for (double v : matrix) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out += buf;
  }
  out += "\ninput_dist=";
  for (double v : input_dist) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out += buf;
  }
  out += "\n";
  return out;
}

std::string spec_hash(const ChannelSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : spec.canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ChannelSpec zchannel_spec(double w) {
  ChannelSpec s;
  s.name = "zchannel";
  s.input_size = 2;
  s.output_size = 2;
  s.matrix = {1.0, 0.0, w, 1.0 - w};
  s.input_dist = {0.5, 0.5};
  return s;
}

}  // namespace softcover
