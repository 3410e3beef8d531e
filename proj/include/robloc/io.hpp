#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "robloc/errors.hpp"
#include "robloc/geometry.hpp"

namespace robloc {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc{} || ptr != last)
    throw InputError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  return v;
}

}  // namespace detail

/// Parses headerless CSV text: one point per row, k comma-separated decimal
/// columns. Blank lines are skipped; ragged rows are rejected.
inline DataSet parse_csv(std::string_view text) {
  std::vector<Vector> pts;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (detail::trim(line).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      row.push_back(detail::parse_double(line.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " columns, got " +
                       std::to_string(row.size()));
    pts.push_back(Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
  }
  if (pts.empty()) throw InputError("no data rows");
  return DataSet(std::move(pts));
}

inline DataSet load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

/// Round-trip precision CSV.
inline std::string to_csv(const DataSet& x) {
  std::string out;
  char buf[64];
  for (const auto& p : x.points()) {
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (j) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, p(j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace robloc
