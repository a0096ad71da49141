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
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fundlemma/ident_missing.hpp"
#include "fundlemma/lqr_dd.hpp"
#include "fundlemma/lti.hpp"

namespace fundlemma::io {

/// Parsed trajectory CSV with header t,u1..um,y1..yp[,x1..xn]. Empty and
/// NaN fields are stored as NaN; column j of u/y/x is row j of the file.
struct TrajectoryTable {
  std::vector<int> t;
  Matrix u;
  Matrix y;
  Matrix x;

  int rows() const noexcept { return static_cast<int>(t.size()); }
};

/// Throws kParse with "<source>:<line>:" diagnostics.
TrajectoryTable read_trajectory_csv(std::istream& in,
                                    const std::string& source = "<input>");
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

/// Rows with every u/y field missing become missing samples.
CorruptedTrajectory to_corrupted_trajectory(const TrajectoryTable& table);

/// States from every row; inputs from every row but the last, whose input
/// fields must be empty.
Experiment to_experiment(const TrajectoryTable& table);

/// Writes t,u..,y..[,x..]. NaN entries are written as empty fields.
void write_trajectory_csv(std::ostream& out, const TrajectoryTable& table);
void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryTable& table);

LtiSystem read_system_json(const std::filesystem::path& path);
LtiSystem parse_system_json(const std::string& text);
std::string system_to_json(const LtiSystem& sys);

LqrWeights read_weights_json(const std::filesystem::path& path);
LqrWeights parse_weights_json(const std::string& text);

std::string matrix_to_json(const Matrix& M);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace fundlemma::io
