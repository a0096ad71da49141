/*
 Copyright 2026 The fundlemma Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "fundlemma/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "fundlemma/errors.hpp"

namespace fundlemma::io {

namespace {

using nlohmann::json;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void parse_fail(const std::string& source, int line,
                             const std::string& message) {
  throw Error(ErrorKind::kParse,
              source + ":" + std::to_string(line) + ": " + message);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty() || s == "NaN" || s == "nan" || s == "NAN") {
    v = kMissing;
    return true;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last && std::isfinite(v);
}

struct Column {
  char kind;  // 'u', 'y' or 'x'
  int index;  // zero-based
};

bool all_missing(const Matrix& M, Eigen::Index col) {
  return M.rows() == 0 || M.col(col).array().isNaN().all();
}

bool any_missing(const Matrix& M, Eigen::Index col) {
  return M.rows() > 0 && M.col(col).array().isNaN().any();
}

Matrix json_to_matrix(const json& j, const char* name) {
  if (!j.is_array()) {
    throw Error(ErrorKind::kParse,
                std::string("\"") + name + "\" must be a nested array");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::kParse, std::string("\"") + name + "\" row " +
                                         std::to_string(r) +
                                         " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw Error(ErrorKind::kParse,
                    std::string("\"") + name + "\" has a non-numeric entry");
      }
      M(r, c) = row[c].get<double>();
    }
  }
  return M;
}

json matrix_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TrajectoryTable read_trajectory_csv(std::istream& in,
                                    const std::string& source) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) parse_fail(source, lineno, "missing header");
  if (header.front() != "t") {
    parse_fail(source, lineno, "first column must be \"t\"");
  }
  std::vector<Column> columns;
  int counts[3] = {0, 0, 0};
  const std::string kinds = "uyx";
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    int idx = 0;
    const auto k = h.empty() ? std::string::npos : kinds.find(h[0]);
    const bool ok =
        k != std::string::npos && h.size() > 1 &&
        std::from_chars(h.data() + 1, h.data() + h.size(), idx).ptr ==
            h.data() + h.size() &&
        idx >= 1;
    if (!ok) parse_fail(source, lineno, "unrecognized column \"" + h + "\"");
    columns.push_back({h[0], idx - 1});
    ++counts[k];
  }
  // Indices must be exactly 1..count for each kind.
  for (int k = 0; k < 3; ++k) {
    std::vector<bool> seen(counts[k], false);
    for (const auto& col : columns) {
      if (col.kind != kinds[k]) continue;
      if (col.index >= counts[k] || seen[col.index]) {
        parse_fail(source, lineno,
                   std::string("columns ") + kinds[k] +
                       "1.." + kinds[k] + std::to_string(counts[k]) +
                       " must each appear once");
      }
      seen[col.index] = true;
    }
  }

  std::vector<std::vector<double>> values;
  std::vector<int> times;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      parse_fail(source, lineno,
                 "expected " + std::to_string(header.size()) +
                     " fields, found " + std::to_string(fields.size()));
    }
    int t = 0;
    const auto& ts = fields.front();
    if (ts.empty() ||
        std::from_chars(ts.data(), ts.data() + ts.size(), t).ptr !=
            ts.data() + ts.size()) {
      parse_fail(source, lineno, "invalid time stamp \"" + ts + "\"");
    }
    if (!times.empty() && t != times.back() + 1) {
      parse_fail(source, lineno, "time stamps must be consecutive");
    }
    std::vector<double> row(fields.size() - 1);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (!parse_double(fields[c], row[c - 1])) {
        parse_fail(source, lineno, "invalid number \"" + fields[c] + "\"");
      }
    }
    times.push_back(t);
    values.push_back(std::move(row));
  }
  if (times.empty()) parse_fail(source, lineno, "no data rows");

  TrajectoryTable table;
  table.t = times;
  const auto T = static_cast<Eigen::Index>(times.size());
  table.u.resize(counts[0], T);
  table.y.resize(counts[1], T);
  table.x.resize(counts[2], T);
  for (Eigen::Index r = 0; r < T; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double v = values[r][c];
      switch (columns[c].kind) {
        case 'u': table.u(columns[c].index, r) = v; break;
        case 'y': table.y(columns[c].index, r) = v; break;
        default: table.x(columns[c].index, r) = v; break;
      }
    }
  }
  return table;
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_trajectory_csv(in, path.string());
}

CorruptedTrajectory to_corrupted_trajectory(const TrajectoryTable& table) {
  if (table.u.rows() < 1 || table.y.rows() < 1) {
    throw Error(ErrorKind::kParse,
                "trajectory needs at least one u and one y column");
  }
  std::vector<std::optional<IoSample>> entries;
  for (int r = 0; r < table.rows(); ++r) {
    const bool u_gone = all_missing(table.u, r);
    const bool y_gone = all_missing(table.y, r);
    if (u_gone && y_gone) {
      entries.emplace_back(std::nullopt);
      continue;
    }
    if (any_missing(table.u, r) || any_missing(table.y, r)) {
      throw Error(ErrorKind::kParse,
                  "row t=" + std::to_string(table.t[r]) +
                      " is partially missing; only whole samples may be");
    }
    entries.push_back(IoSample{table.u.col(r), table.y.col(r)});
  }
  return CorruptedTrajectory(static_cast<int>(table.u.rows()),
                             static_cast<int>(table.y.rows()),
                             std::move(entries), table.t.front());
}

Experiment to_experiment(const TrajectoryTable& table) {
  if (table.x.rows() < 1 || table.u.rows() < 1) {
    throw Error(ErrorKind::kParse,
                "experiment needs x and u columns");
  }
  const int T = table.rows() - 1;
  if (T < 1) throw Error(ErrorKind::kParse, "experiment needs two rows");
  for (int r = 0; r <= T; ++r) {
    if (any_missing(table.x, r)) {
      throw Error(ErrorKind::kParse,
                  "state missing at t=" + std::to_string(table.t[r]));
    }
    if (r < T && any_missing(table.u, r)) {
      throw Error(ErrorKind::kParse,
                  "input missing at t=" + std::to_string(table.t[r]));
    }
  }
  if (!all_missing(table.u, T)) {
    throw Error(ErrorKind::kParse,
                "final row holds the terminal state; its inputs must be empty");
  }
  return {SignalSegment(table.x, table.t.front()),
          SignalSegment(table.u.leftCols(T), table.t.front())};
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryTable& table) {
  out << 't';
  for (Eigen::Index i = 0; i < table.u.rows(); ++i) out << ",u" << i + 1;
  for (Eigen::Index i = 0; i < table.y.rows(); ++i) out << ",y" << i + 1;
  for (Eigen::Index i = 0; i < table.x.rows(); ++i) out << ",x" << i + 1;
  out << '\n';
  const auto field = [&](double v) {
    out << ',';
    if (!std::isnan(v)) out << format_number(v);
  };
  for (int r = 0; r < table.rows(); ++r) {
    out << table.t[r];
    for (Eigen::Index i = 0; i < table.u.rows(); ++i) field(table.u(i, r));
    for (Eigen::Index i = 0; i < table.y.rows(); ++i) field(table.y(i, r));
    for (Eigen::Index i = 0; i < table.x.rows(); ++i) field(table.x(i, r));
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_trajectory_csv(out, table);
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

LtiSystem parse_system_json(const std::string& text) {
  const json j = parse_json_text(text);
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!j.contains(key)) {
      throw Error(ErrorKind::kParse,
                  std::string("system JSON lacks key \"") + key + "\"");
    }
  }
  const Matrix D = json_to_matrix(j["D"], "D");
  Matrix A = json_to_matrix(j["A"], "A");
  Matrix B = json_to_matrix(j["B"], "B");
  Matrix C = json_to_matrix(j["C"], "C");
  // Empty nested arrays cannot carry a column count; take it from D.
  if (B.rows() == 0) B.resize(0, D.cols());
  if (A.rows() == 0) A.resize(0, 0);
  return LtiSystem(std::move(A), std::move(B), std::move(C), D);
}

LtiSystem read_system_json(const std::filesystem::path& path) {
  return parse_system_json(read_file(path));
}

std::string system_to_json(const LtiSystem& sys) {
  json j;
  j["A"] = matrix_json(sys.A());
  j["B"] = matrix_json(sys.B());
  j["C"] = matrix_json(sys.C());
  j["D"] = matrix_json(sys.D());
  return j.dump(2) + "\n";
}

LqrWeights parse_weights_json(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.contains("Q") || !j.contains("R")) {
    throw Error(ErrorKind::kParse, "weights JSON needs keys \"Q\" and \"R\"");
  }
  LqrWeights w{json_to_matrix(j["Q"], "Q"), json_to_matrix(j["R"], "R")};
  w.validate();
  return w;
}

LqrWeights read_weights_json(const std::filesystem::path& path) {
  return parse_weights_json(read_file(path));
}

std::string matrix_to_json(const Matrix& M) { return matrix_json(M).dump(); }

}  // namespace fundlemma::io
