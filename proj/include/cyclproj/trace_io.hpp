#pragma once

// CSV and JSON serialization of traces and run summaries.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyclproj/cyclic_engine.hpp"

namespace cyclproj {

/// Flattened coordinate columns of a point type.
template <class Point>
struct Coordinates;

template <>
struct Coordinates<PlanePoint> {
  static std::vector<std::string> names() { return {"x", "y"}; }
  static std::vector<double> values(const PlanePoint& p) { return {p.x, p.y}; }
  static PlanePoint from(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }
};

template <>
struct Coordinates<TreeProductPoint> {
  static std::vector<std::string> names() { return {"left_leg", "left_offset", "right_leg", "right_offset"}; }
  static std::vector<double> values(const TreeProductPoint& p) {
    return {static_cast<double>(p.left.leg()), p.left.offset(), static_cast<double>(p.right.leg()),
            p.right.offset()};
  }
  static TreeProductPoint from(const std::vector<double>& v) {
    return {{static_cast<std::size_t>(v.at(0)), v.at(1)}, {static_cast<std::size_t>(v.at(2)), v.at(3)}};
  }
};

template <>
struct Coordinates<ChainPoint> {
  static std::vector<std::string> names() { return {"u", "v", "height"}; }
  static std::vector<double> values(const ChainPoint& p) { return {p.disc.x, p.disc.y, p.height}; }
  static ChainPoint from(const std::vector<double>& v) { return {{v.at(0), v.at(1)}, v.at(2)}; }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline double at_or_nan(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : kUndefined;
}

/// Columns n, r, s, a, b, then the coordinates of x_n; one row per stored iterate.
template <class Point>
void write_csv(std::ostream& out, const Trace<Point>& trace) {
  out << "n,r,s,a,b";
  for (const auto& name : Coordinates<Point>::names()) out << ',' << name;
  out << '\n';
  for (const auto& rec : trace.records) {
    const std::size_t n = rec.index;
    out << n << ',' << format_number(at_or_nan(trace.r, n)) << ',' << format_number(at_or_nan(trace.s, n)) << ','
        << format_number(at_or_nan(trace.a, n)) << ',' << format_number(at_or_nan(trace.b, n));
    for (double c : Coordinates<Point>::values(rec.iterate)) out << ',' << format_number(c);
    out << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::size_t> n;
  std::vector<std::vector<double>> columns;  // every column after n, NaN for empty fields
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty CSV input");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  if (t.header.empty() || t.header.front() != "n") throw DomainError("CSV header must start with 'n'");
  t.columns.resize(t.header.size() - 1);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cells.size() != t.header.size()) throw DomainError("CSV row has " + std::to_string(cells.size()) + " fields");
    t.n.push_back(std::stoull(cells[0]));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      t.columns[i - 1].push_back(cells[i].empty() ? kUndefined : std::stod(cells[i]));
    }
  }
  return t;
}

/// Summary fields shared by run, rate and sweep output.
struct RunSummary {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::size_t n = 0;
  RegularityVerdict verdict;
  std::optional<double> slope;
  double sum_r_sq = 0.0;
  bool aborted = false;
  std::string failure;
};

inline nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json j;
  j["scenario"] = s.scenario;
  j["params"] = s.params;
  j["n"] = s.n;
  j["verdict"] = to_string(s.verdict.classification);
  j["final_r"] = json_number(s.verdict.final_r);
  j["liminf_r"] = json_number(s.verdict.liminf_r);
  j["slope"] = s.slope ? json_number(*s.slope) : nlohmann::json();
  j["sums"] = {{"r_sq", json_number(s.sum_r_sq)}};
  if (s.aborted) {
    j["aborted"] = true;
    j["failure"] = s.failure;
  }
  return j;
}

template <class Point>
nlohmann::json trace_rows_json(const Trace<Point>& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rec : trace.records) {
    const std::size_t n = rec.index;
    rows.push_back({{"n", n},
                    {"r", json_number(at_or_nan(trace.r, n))},
                    {"s", json_number(at_or_nan(trace.s, n))},
                    {"a", json_number(at_or_nan(trace.a, n))},
                    {"b", json_number(at_or_nan(trace.b, n))},
                    {"x", Coordinates<Point>::values(rec.iterate)}});
  }
  return rows;
}

}  // namespace cyclproj
