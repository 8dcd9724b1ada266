#include "hmaps/export.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hmaps/errors.hpp"

namespace hmaps {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalError("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  return std::get<std::string>(c);
}

nlohmann::ordered_json meta_value(const std::string& v) {
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec == std::errc() && ptr == v.data() + v.size() && !v.empty() && std::isfinite(d)) return d;
  if (v == "true") return true;
  if (v == "false") return false;
  return v;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<double> parse_row(std::string_view line, std::size_t expected, std::size_t line_no) {
  std::vector<double> out;
  while (true) {
    const auto comma = line.find(',');
    const std::string_view field = line.substr(0, comma);
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), d);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw ValidationError("CSV line " + std::to_string(line_no) + ": bad number '" +
                            std::string(field) + "'");
    }
    out.push_back(d);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (out.size() != expected) {
    throw ValidationError("CSV line " + std::to_string(line_no) + ": expected " +
                          std::to_string(expected) + " columns");
  }
  return out;
}

void expect_header(const std::vector<std::string_view>& lines, std::string_view header) {
  if (lines.empty() || lines.front() != header) {
    throw ValidationError("CSV header must be exactly '" + std::string(header) + "'");
  }
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.headers.size(); ++i) {
    if (i) out += ',';
    out += csv_field(t.headers[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t, const Meta& meta) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = meta_value(v);
  doc["meta"] = std::move(m);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.headers.size(); ++i) {
      obj[t.headers[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Table solution_table(const ODESolution& sol) {
  Table t{{"t", "R", "Rprime", "H", "drift"}, {}};
  t.rows.reserve(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double H = sol.has_h() ? sol.Hs[i] : 0.0;
    t.rows.push_back({sol.ts[i], sol.Rs[i], sol.Rps[i], H, sol.drift[i]});
  }
  return t;
}

Table map_table(const MapSample& sample) {
  Table t{{"x", "y", "t", "R", "S"}, {}};
  t.rows.reserve(sample.points.size());
  for (const MapPoint& p : sample.points) t.rows.push_back({p.x, p.y, p.t, p.R, p.S});
  return t;
}

Table embedding_table(const MapSample& sample, Quadric quadric, double c) {
  Table t{{"x", "y", "X", "Y", "Z"}, {}};
  t.rows.reserve(sample.points.size());
  for (const MapPoint& p : sample.points) {
    const EmbeddingR3 e = embed(quadric, c, p.R, p.S);
    t.rows.push_back({p.x, p.y, e.point[0], e.point[1], e.point[2]});
  }
  return t;
}

Table report_table(const std::vector<std::pair<std::string, Cell>>& fields) {
  Table t{{"quantity", "value"}, {}};
  for (const auto& [k, v] : fields) t.rows.push_back({k, v});
  return t;
}

std::vector<std::pair<std::string, Cell>> report_fields(const ResidualReport& r) {
  std::vector<std::pair<std::string, Cell>> f{
      {"sup_E1", r.sup_E1},           {"sup_E2", r.sup_E2},
      {"worst_E1_x", r.worst_E1.x},   {"worst_E1_y", r.worst_E1.y},
      {"worst_E2_x", r.worst_E2.x},   {"worst_E2_y", r.worst_E2.y},
      {"sup_G1", r.sup_G1},           {"sup_G2", r.sup_G2},
      {"worst_G1_t", r.worst_G1_t},   {"worst_G2_t", r.worst_G2_t},
      {"points", double(r.points)},
  };
  if (r.observed_order) f.emplace_back("observed_order", *r.observed_order);
  for (std::size_t i = 0; i < r.K_samples.size(); ++i) {
    f.emplace_back("K_sample_" + std::to_string(i), r.K_samples[i]);
  }
  return f;
}

MapSample read_map_csv(std::string_view text) {
  const auto lines = split_lines(text);
  expect_header(lines, "x,y,t,R,S");
  MapSample s;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = parse_row(lines[i], 5, i + 1);
    s.points.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  if (s.points.empty()) throw ValidationError("map CSV has no rows");
  // row-major with y outer: the first row of constant y fixes the x nodes
  const double y0 = s.points.front().y;
  for (const MapPoint& p : s.points) {
    if (p.y != y0) break;
    s.xs.push_back(p.x);
  }
  const std::size_t nx = s.xs.size();
  if (s.points.size() % nx != 0) throw ValidationError("map CSV is not a full lattice");
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const MapPoint& p = s.points[k];
    if (p.x != s.xs[k % nx] || p.y != s.points[k - k % nx].y) {
      throw ValidationError("map CSV is not a row-major lattice (row " + std::to_string(k + 2) +
                            ")");
    }
    if (k % nx == 0) s.ys.push_back(p.y);
  }
  // the frame direction is not stored; recover it from t = a y - b x if possible
  if (nx > 1 && s.ys.size() > 1) {
    const double dxs = s.xs[1] - s.xs[0];
    const double dys = s.ys[1] - s.ys[0];
    s.b = -(s.points[1].t - s.points[0].t) / dxs;
    s.a = (s.points[nx].t - s.points[0].t) / dys;
  }
  return s;
}

ODESolution read_solution_csv(std::string_view text) {
  const auto lines = split_lines(text);
  expect_header(lines, "t,R,Rprime,H,drift");
  ODESolution sol;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = parse_row(lines[i], 5, i + 1);
    sol.ts.push_back(v[0]);
    sol.Rs.push_back(v[1]);
    sol.Rps.push_back(v[2]);
    sol.Hs.push_back(v[3]);
    sol.drift.push_back(v[4]);
    if (v[3] == 0.0 && sol.seed_index == 0 && i > 1) sol.seed_index = i - 1;
  }
  if (sol.ts.empty()) throw ValidationError("solution CSV has no rows");
  for (std::size_t i = 1; i < sol.ts.size(); ++i) {
    if (!(sol.ts[i] > sol.ts[i - 1])) throw ValidationError("solution CSV t must be increasing");
  }
  return sol;
}

}  // namespace hmaps
