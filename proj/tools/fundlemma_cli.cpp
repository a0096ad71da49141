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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fundlemma/fundlemma.hpp"

namespace fs = std::filesystem;
using namespace fundlemma;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
    case ErrorKind::kParse:
    case ErrorKind::kIo:
      return 1;
    case ErrorKind::kInsufficientExcitation:
    case ErrorKind::kInconsistentPast:
      return 2;
    case ErrorKind::kDepthExceedsLength:
    case ErrorKind::kNoUsableData:
    case ErrorKind::kInsufficientData:
    case ErrorKind::kOrderInfeasible:
      return 3;
    case ErrorKind::kCertificationFailed:
    case ErrorKind::kRiccatiDivergence:
      return 4;
    case ErrorKind::kOrderUndetermined:
      return 5;
  }
  return 1;
}

std::string num(double v) { return io::format_number(v); }

std::string row(const Matrix& M, Eigen::Index i) {
  std::string s;
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    if (j) s += ' ';
    s += num(M(i, j));
  }
  return s;
}

void print_matrix(const std::string& name, const Matrix& M) {
  std::cout << name << " (" << M.rows() << "x" << M.cols() << ")\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) std::cout << "  " << row(M, i) << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

// Maximal runs of columns without NaN in u (and y when present).
std::vector<IoSegment> complete_runs(const io::TrajectoryTable& table,
                                     bool need_y) {
  std::vector<IoSegment> out;
  const int T = table.rows();
  auto usable = [&](int c) {
    if (table.u.col(c).hasNaN()) return false;
    return !need_y || !table.y.col(c).hasNaN();
  };
  for (int c = 0; c < T;) {
    if (!usable(c)) {
      ++c;
      continue;
    }
    int e = c;
    while (e < T && usable(e)) ++e;
    const int start = table.t[c];
    Matrix y = table.y.rows() ? Matrix(table.y.middleCols(c, e - c))
                              : Matrix::Zero(1, e - c);
    out.push_back({SignalSegment(table.u.middleCols(c, e - c), start),
                   SignalSegment(std::move(y), start)});
    c = e;
  }
  return out;
}

Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unit(rng);
  return v;
}

Matrix uniform_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  Matrix M(r, c);
  for (Eigen::Index j = 0; j < c; ++j) M.col(j) = uniform_vector(rng, r);
  return M;
}

io::TrajectoryTable experiment_table(const LtiSystem& sys,
                                     const Experiment& e) {
  const int T = e.inputs.length();
  const auto traj = simulate(sys, e.states.samples().col(0), e.inputs.samples());
  io::TrajectoryTable table;
  for (int t = 0; t <= T; ++t) table.t.push_back(t);
  table.u = Matrix::Constant(sys.m(), T + 1, NAN);
  table.u.leftCols(T) = e.inputs.samples();
  table.y = Matrix::Constant(sys.p(), T + 1, NAN);
  table.y.leftCols(T) = traj.y;
  table.x = e.states.samples();
  return table;
}

fs::path numbered(const fs::path& base, int i) {
  fs::path p = base;
  p.replace_filename(base.stem().string() + "_" + std::to_string(i) +
                     base.extension().string());
  return p;
}

// ---- subcommands -----------------------------------------------------------

struct GenerateArgs {
  std::string system, out;
  int length = 20;
  int experiments = 0;
  int order = 0;
  std::uint64_t seed = 0;
  std::vector<int> missing;
  bool states = false;
  double tol_rank = kDefaultRankTol;
};

int cmd_generate(const GenerateArgs& a) {
  const LtiSystem sys = io::read_system_json(a.system);
  if (a.experiments > 0) {
    ExperimentDesign design;
    design.count = a.experiments;
    design.length = a.length;
    design.pe_order = a.order > 0 ? a.order : sys.n() + 1;
    const auto exps = random_experiments(sys, design, a.seed, a.tol_rank);
    for (int i = 0; i < a.experiments; ++i) {
      const fs::path path = numbered(a.out, i + 1);
      io::write_trajectory_csv(path, experiment_table(sys, exps[i]));
      std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
  }

  std::mt19937_64 rng(a.seed);
  const Vector x0 = uniform_vector(rng, sys.n());
  const Matrix u = uniform_matrix(rng, sys.m(), a.length);
  const auto traj = simulate(sys, x0, u);
  io::TrajectoryTable table;
  for (int t = 0; t < a.length; ++t) table.t.push_back(t);
  table.u = u;
  table.y = traj.y;
  if (a.states) table.x = traj.x;
  for (int t : a.missing) {
    if (t < 0 || t >= a.length)
      throw Error(ErrorKind::kInvalidInput,
                  "missing index " + std::to_string(t) + " outside [0, " +
                      std::to_string(a.length) + ")");
    table.u.col(t).setConstant(NAN);
    table.y.col(t).setConstant(NAN);
    if (a.states) table.x.col(t).setConstant(NAN);
  }
  io::write_trajectory_csv(fs::path(a.out), table);
  std::cout << "wrote " << a.out << " (" << a.length << " samples, "
            << a.missing.size() << " missing)\n";
  return 0;
}

int cmd_pe_check(const std::vector<std::string>& files, int order,
                 double tol) {
  std::vector<SignalSegment> usable;
  for (const auto& f : files) {
    const auto table = io::read_trajectory_csv(fs::path(f));
    for (const auto& seg : complete_runs(table, false)) {
      const auto& u = seg.input;
      std::cout << f << " t=" << u.start_time() << ".."
                << u.start_time() + u.length() - 1 << " length " << u.length()
                << " pe_order " << pe_order(u, tol);
      if (u.length() >= order) {
        usable.push_back(u);
      } else {
        std::cout << " (shorter than " << order << ", skipped)";
      }
      std::cout << "\n";
    }
  }
  bool verdict = false;
  if (!usable.empty()) {
    const auto mh = mosaic_hankel(usable, order);
    const int rank = numerical_rank(mh.assembled, tol);
    verdict = rank == mh.assembled.rows();
    std::cout << "mosaic Hankel " << mh.assembled.rows() << "x"
              << mh.assembled.cols() << " rank " << rank << "\n";
  }
  std::cout << "collectively persistently exciting of order " << order << ": "
            << (verdict ? "yes" : "no") << "\n";
  return verdict ? 0 : 2;
}

int cmd_identify(const std::string& file, const IdentifyOptions& opts,
                 const std::string& out) {
  const auto table = io::read_trajectory_csv(fs::path(file));
  const auto result = identify(io::to_corrupted_trajectory(table), opts);
  std::cout << "segments used:";
  for (const auto& s : result.segment_report)
    std::cout << " [" << s.start << ".." << s.start + s.length - 1 << "]";
  std::cout << "\nsegments discarded:";
  for (const auto& s : result.discarded)
    std::cout << " [" << s.start << ".." << s.start + s.length - 1 << "]";
  std::cout << "\norder " << result.order << " (depth "
            << result.estimation_depth << ")\n";
  for (std::size_t k = 0; k < result.markov.size(); ++k)
    print_matrix("markov[" + std::to_string(k) + "]", result.markov[k]);
  std::cout << "realization residual " << num(result.residual) << "\n";
  for (const auto& w : result.warnings) std::cout << "warning: " << w << "\n";
  if (!out.empty()) write_text(out, io::system_to_json(result.system) + "\n");
  return 0;
}

int cmd_dd_simulate(const std::vector<std::string>& data,
                    const std::string& query, int depth,
                    const DdSimulateOptions& opts, const std::string& out) {
  std::vector<IoSegment> segs;
  for (const auto& f : data) {
    for (auto& s : complete_runs(io::read_trajectory_csv(fs::path(f)), true))
      if (s.input.length() >= depth) segs.push_back(std::move(s));
  }
  if (segs.empty())
    throw Error(ErrorKind::kInsufficientData,
                "no complete data segment of length >= " + std::to_string(depth));
  const DataDictionary dict = build_data_matrix(std::move(segs), depth);
  std::cout << "dictionary " << dict.data_matrix().rows() << "x"
            << dict.columns() << " rank "
            << numerical_rank(dict.data_matrix(), opts.rank_tol) << "\n";

  auto q = io::read_trajectory_csv(fs::path(query));
  const int past = depth - 1;
  if (q.u.rows() != dict.input_dim() || q.y.rows() != dict.output_dim())
    throw Error(ErrorKind::kInvalidInput,
                "query columns do not match the data dimensions");
  if (q.rows() <= past)
    throw Error(ErrorKind::kInsufficientData,
                "query needs " + std::to_string(past) +
                    " past rows plus at least one future row");
  if (q.u.hasNaN() || q.y.leftCols(past).hasNaN())
    throw Error(ErrorKind::kParse,
                "query needs every input and the first " +
                    std::to_string(past) + " outputs");
  const Matrix y = datadriven_simulate(dict, q.u.leftCols(past),
                                       q.y.leftCols(past),
                                       q.u.rightCols(q.rows() - past), opts);
  q.y.rightCols(q.rows() - past) = y;
  const Matrix yt = q.y.transpose();
  for (int t = past; t < q.rows(); ++t)
    std::cout << "t=" << q.t[t] << " y = " << row(yt, t) << "\n";
  if (!out.empty()) io::write_trajectory_csv(fs::path(out), q);
  return 0;
}

std::vector<Experiment> read_experiments(const std::vector<std::string>& files) {
  std::vector<Experiment> exps;
  for (const auto& f : files)
    exps.push_back(io::to_experiment(io::read_trajectory_csv(fs::path(f))));
  return exps;
}

LqrWeights weights_for(const std::string& path, const ExperimentBatch& b) {
  if (!path.empty()) return io::read_weights_json(path);
  return LqrWeights::identity(static_cast<int>(b.Xm.rows()),
                              static_cast<int>(b.Um.rows()));
}

int cmd_lqr(const std::vector<std::string>& files, const std::string& weights,
            const LqrOptions& opts, const std::string& out) {
  const auto batch = assemble_batch(read_experiments(files));
  const auto sol = lqr_from_data(batch, weights_for(weights, batch), opts);
  print_matrix("K", sol.K);
  print_matrix("P", sol.P);
  std::cout << "lmi_max_eig " << num(sol.lmi_max_eig) << " (scale "
            << num(sol.lmi_scale) << ")\n"
            << "riccati_residual " << num(sol.riccati_residual) << "\n"
            << "right_inverse_residual " << num(sol.right_inverse_residual)
            << "\n"
            << "closed_loop_spectral_radius " << num(sol.closed_loop_radius)
            << "\n";
  if (!out.empty())
    write_text(out, "{\"K\": " + io::matrix_to_json(sol.K) +
                        ", \"P\": " + io::matrix_to_json(sol.P) + "}\n");
  return 0;
}

int cmd_export_sdp(const std::vector<std::string>& files,
                   const std::string& weights, const std::string& out) {
  const auto batch = assemble_batch(read_experiments(files));
  const std::string text = export_sdp(batch, weights_for(weights, batch));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_demo_instability(const std::string& system, std::uint64_t seed,
                         int length, int experiments, const LqrOptions& opts) {
  const LtiSystem sys =
      system.empty() ? batch_reactor() : io::read_system_json(system);
  std::mt19937_64 rng(seed);
  Vector x0 = uniform_vector(rng, sys.n());
  if (x0.norm() > 0) x0.normalize();
  const Matrix u = uniform_matrix(rng, sys.m(), length);
  const auto report = instability_report(sys, x0, u);
  std::cout << "single experiment, T=" << length << ", |x0|=1\n";
  for (std::size_t t = 0; t < report.state_norms.size(); ++t)
    std::cout << "  |x(" << t << ")| = " << num(report.state_norms[t]) << "\n";
  std::cout << "max state norm " << num(report.max_norm) << "\n";

  ExperimentDesign design;
  design.count = experiments;
  design.length = std::max(sys.n() + 2, 2);
  design.pe_order = sys.n() + 1;
  const auto exps = random_experiments(sys, design, seed, opts.rank_tol);
  double short_max = 0.0;
  for (const auto& e : exps)
    short_max = std::max(short_max, e.states.samples().colwise().norm().maxCoeff());
  std::cout << experiments << " experiments, T=" << design.length
            << ": max state norm " << num(short_max) << "\n";
  try {
    const auto sol = lqr_from_data(assemble_batch(exps), LqrWeights::identity(sys.n(), sys.m()), opts);
    std::cout << "LQR from short experiments: closed-loop spectral radius "
              << num(spectral_radius(sys.A() + sys.B() * sol.K)) << "\n";
  } catch (const Error& e) {
    std::cout << "LQR from short experiments failed: " << e.what() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven analysis and control of linear systems"};
  app.require_subcommand(1);
  double tol_rank = kDefaultRankTol;
  double tol_cert = 1e-6;
  auto add_rank_tol = [&](CLI::App* c) {
    c->add_option("--tol-rank", tol_rank, "Relative singular value cutoff")
        ->check(CLI::PositiveNumber);
  };

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Simulate a system under random inputs");
  g->add_option("--system", gen.system, "System JSON")->required();
  g->add_option("--out", gen.out, "Output CSV (numbered per experiment)")->required();
  g->add_option("--length", gen.length, "Samples per trajectory")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--missing", gen.missing, "Time indices to knock out")->delimiter(',');
  g->add_option("--experiments", gen.experiments,
                "Write this many state-measured experiments")->check(CLI::PositiveNumber);
  g->add_option("--order", gen.order, "PE order for experiments (default n+1)");
  g->add_flag("--states", gen.states, "Include state columns");
  add_rank_tol(g);

  std::vector<std::string> pe_files;
  int pe_k = 0;
  auto* pe = app.add_subcommand("pe-check", "Check collective persistency of excitation");
  pe->add_option("files", pe_files, "Trajectory CSVs")->required()->check(CLI::ExistingFile);
  pe->add_option("--order", pe_k, "PE order")->required()->check(CLI::PositiveNumber);
  add_rank_tol(pe);

  std::vector<std::string> dd_data;
  std::string dd_query, dd_out;
  int dd_depth = 0;
  DdSimulateOptions dd_opts;
  auto* dd = app.add_subcommand("dd-simulate", "Continue a trajectory from data");
  dd->add_option("data", dd_data, "Training CSVs")->required()->check(CLI::ExistingFile);
  dd->add_option("--query", dd_query, "CSV with inputs and the first depth-1 outputs")
      ->required()->check(CLI::ExistingFile);
  dd->add_option("--depth", dd_depth, "Window depth")->required()->check(CLI::Range(2, 1000));
  dd->add_option("--tol", dd_opts.residual_tol, "Past consistency tolerance");
  dd->add_option("--out", dd_out, "Completed CSV");
  add_rank_tol(dd);

  std::string id_file, id_out;
  IdentifyOptions id_opts;
  auto* id = app.add_subcommand("identify", "Identify a model from data with gaps");
  id->add_option("file", id_file, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  id->add_option("--max-order", id_opts.max_order, "Largest order considered")
      ->check(CLI::NonNegativeNumber);
  id->add_option("--markov", id_opts.markov_count, "Markov parameters to report");
  id->add_option("--tol", id_opts.residual_tol, "Residual tolerance");
  id->add_option("--out", id_out, "System JSON");
  add_rank_tol(id);

  std::vector<std::string> lqr_files;
  std::string lqr_weights, lqr_out;
  auto* lqr = app.add_subcommand("lqr", "LQR gain from state-measured experiments");
  lqr->add_option("files", lqr_files, "Experiment CSVs")->required()->check(CLI::ExistingFile);
  lqr->add_option("--weights", lqr_weights, "Weights JSON (default identity)")
      ->check(CLI::ExistingFile);
  lqr->add_option("--tol-cert", tol_cert, "Certification tolerance")->check(CLI::PositiveNumber);
  lqr->add_option("--out", lqr_out, "Gain JSON");
  add_rank_tol(lqr);

  std::vector<std::string> sdp_files;
  std::string sdp_weights, sdp_out;
  auto* sdp = app.add_subcommand("export-sdp", "Write the LQR SDP in SDPA sparse format");
  sdp->add_option("files", sdp_files, "Experiment CSVs")->required()->check(CLI::ExistingFile);
  sdp->add_option("--weights", sdp_weights, "Weights JSON (default identity)")
      ->check(CLI::ExistingFile);
  sdp->add_option("--out", sdp_out, "Output .dat-s (default stdout)");

  std::string demo_system;
  std::uint64_t demo_seed = 0;
  int demo_length = 20, demo_experiments = 5;
  auto* demo = app.add_subcommand("demo-instability",
                                  "Compare one long experiment with several short ones");
  demo->add_option("--system", demo_system, "System JSON (default batch reactor)")
      ->check(CLI::ExistingFile);
  demo->add_option("--seed", demo_seed, "Random seed");
  demo->add_option("--length", demo_length, "Long experiment length")->check(CLI::PositiveNumber);
  demo->add_option("--experiments", demo_experiments, "Number of short experiments")
      ->check(CLI::PositiveNumber);
  demo->add_option("--tol-cert", tol_cert, "Certification tolerance")->check(CLI::PositiveNumber);
  add_rank_tol(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  LqrOptions lqr_opts;
  lqr_opts.rank_tol = tol_rank;
  lqr_opts.cert_tol = tol_cert;
  try {
    if (*g) {
      gen.tol_rank = tol_rank;
      return cmd_generate(gen);
    }
    if (*pe) return cmd_pe_check(pe_files, pe_k, tol_rank);
    if (*dd) {
      dd_opts.rank_tol = tol_rank;
      return cmd_dd_simulate(dd_data, dd_query, dd_depth, dd_opts, dd_out);
    }
    if (*id) {
      id_opts.rank_tol = tol_rank;
      return cmd_identify(id_file, id_opts, id_out);
    }
    if (*lqr) return cmd_lqr(lqr_files, lqr_weights, lqr_opts, lqr_out);
    if (*sdp) return cmd_export_sdp(sdp_files, sdp_weights, sdp_out);
    if (*demo)
      return cmd_demo_instability(demo_system, demo_seed, demo_length,
                                  demo_experiments, lqr_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
