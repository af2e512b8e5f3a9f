#include "numsys/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "numsys/types.hpp"

namespace numsys {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void json_cell(std::string& out, const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) {
      out += "null";
      return;
    }
    std::string s = fmt_double(*d);
    // Keep doubles distinguishable from integers when read back.
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    out += s;
  } else {
    out += ojson(std::get<std::string>(c)).dump();
  }
}

Cell cell_from(const ojson& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw DomainError("report: unsupported JSON cell");
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw DomainError("unknown format '" + std::string(text) + "' (csv|json)");
}

std::string to_csv(const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(r.columns[i]);
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& r) {
  std::string out = "{\"report\":" + ojson(r.name).dump() + ",\"meta\":{";
  for (std::size_t i = 0; i < r.meta.size(); ++i) {
    if (i) out += ',';
    out += ojson(r.meta[i].first).dump() + ':';
    json_cell(out, r.meta[i].second);
  }
  out += "},\"columns\":[";
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += ojson(r.columns[i]).dump();
  }
  out += "],\"rows\":[";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    if (k) out += ',';
    out += '[';
    for (std::size_t i = 0; i < r.rows[k].size(); ++i) {
      if (i) out += ',';
      json_cell(out, r.rows[k][i]);
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

Report from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw DomainError(std::string("report: ") + e.what());
  }
  Report r;
  r.name = j.at("report").get<std::string>();
  for (const auto& [k, v] : j.at("meta").items()) r.meta.emplace_back(k, cell_from(v));
  for (const auto& c : j.at("columns")) r.columns.push_back(c.get<std::string>());
  for (const auto& row : j.at("rows")) {
    std::vector<Cell> cells;
    for (const auto& c : row) cells.push_back(cell_from(c));
    r.rows.push_back(std::move(cells));
  }
  return r;
}

void emit(const Report& r, Format f, const std::string& path) {
  const std::string text = f == Format::csv ? to_csv(r) : to_json(r);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw ComputeError("emit: write to stdout failed");
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ComputeError("emit: cannot open " + path);
  os << text;
  os.close();
  if (!os) throw ComputeError("emit: write to " + path + " failed");
}

}  // namespace numsys
