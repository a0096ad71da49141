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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fundlemma/fundlemma.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/reactor.hpp"

using namespace fundlemma;
using namespace fundlemma::testing;

namespace {

// Pinned tolerances and budgets.
constexpr double kMarkovTol = 1e-8;
constexpr double kRankTol = 1e-8;
constexpr double kGainTol = 1e-6;
constexpr double kRadiusTarget = 0.188;
constexpr double kRadiusTol = 1e-3;
constexpr double kPrintedTol = 5e-3;
constexpr double kBlowUpNorm = 1e6;
constexpr int kBlowUpQuorum = 18;
constexpr double kMembershipTol = 1e-8;
constexpr double kStateFitTol = 1e-8;
constexpr double kSimulationTol = 1e-8;
constexpr double kGoldenTol = 1e-10;
constexpr double kRiccatiResidualTol = 1e-10;
constexpr double kBudget1 = 1.0;
constexpr double kBudget3 = 5.0;
constexpr double kBudget5 = 10.0;
constexpr double kBudget6 = 15.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_abs(const Matrix& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Markov parameters of a system straight from its matrices.
std::vector<Matrix> markov_oracle(const LtiSystem& sys, int count) {
  std::vector<Matrix> out{sys.D()};
  Matrix Ak = Matrix::Identity(sys.n(), sys.n());
  for (int k = 1; k < count; ++k) {
    out.push_back(sys.C() * Ak * sys.B());
    Ak = sys.A() * Ak;
  }
  return out;
}

Outcome record_identification() {
  const auto table =
      io::read_trajectory_csv(std::filesystem::path(FUNDLEMMA_FIXTURES) /
                              "missing_data.csv");
  const auto result = identify(io::to_corrupted_trajectory(table));
  const std::vector<double> expected = {1, 0, 1, 2, 3};
  double markov_err = result.markov.size() >= expected.size() ? 0.0 : INFINITY;
  for (std::size_t k = 0; k < expected.size() && k < result.markov.size(); ++k)
    markov_err = std::max(markov_err, std::abs(result.markov[k](0, 0) - expected[k]));
  const auto got = markov_parameters(result.system, 10);
  const auto want = markov_oracle(record_system(), 10);
  double realization_err = 0.0;
  for (int k = 0; k < 10; ++k)
    realization_err = std::max(realization_err, max_abs(got[k] - want[k]));
  return {result.order == 2 && markov_err <= kMarkovTol &&
              realization_err <= kMarkovTol,
          fmt("order=%g markov_err=%.2e realization_err=%.2e", result.order,
              markov_err, realization_err)};
}

Outcome record_excitation() {
  const CorruptedTrajectory ct = missing_record();
  const auto seg = segment_trajectory(ct, 1);
  std::vector<SignalSegment> inputs;
  std::string ranks;
  bool individually = true;
  for (const auto& span : seg.kept) {
    inputs.push_back(record_input(span.start, span.start + span.length - 1));
    const auto& s = inputs.back();
    const int r = s.length() >= 5 ? jacobi_rank(hankel(s, 5), kRankTol) : 0;
    individually = individually && r < 5 &&
                   !is_persistently_exciting(s, 5, kRankTol);
    ranks += std::to_string(r) + ",";
  }
  const int collective =
      jacobi_rank(mosaic_hankel(inputs, 5).assembled, kRankTol);
  const bool ok = seg.kept.size() == 3 && individually && collective == 5 &&
                  is_collectively_pe(inputs, 5, kRankTol);
  return {ok, "segment ranks=" + ranks + " collective rank=" +
                  std::to_string(collective) + "/5"};
}

Outcome reactor_lqr() {
  const LtiSystem reactor = batch_reactor();
  const LqrWeights W = LqrWeights::identity(4, 2);
  const auto oracle = dare_solve(reactor.A(), reactor.B(), W.Q, W.R);
  const Matrix K_ref = reactor_k_oracle();
  double gain_err = (oracle.K - K_ref).norm();
  double radius_err = 0.0, printed_err = 0.0;
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    try {
      const auto exps = random_experiments(reactor, ExperimentDesign{}, seed);
      const auto sol = lqr_from_data(assemble_batch(exps), W);
      gain_err = std::max(gain_err, (sol.K - oracle.K).norm());
      const double rho = spectral_radius(reactor.A() + reactor.B() * sol.K);
      radius_err = std::max(radius_err, std::abs(rho - kRadiusTarget));
      printed_err = std::max(printed_err, max_abs(sol.P - reactor_p_printed()));
      ++solved;
    } catch (const Error& e) {
      std::printf("  seed %llu: %s\n", static_cast<unsigned long long>(seed),
                  e.what());
    }
  }
  return {solved == 20 && gain_err <= kGainTol && radius_err <= kRadiusTol &&
              printed_err <= kPrintedTol,
          fmt("solved=%g/20 max|K-K*|_F=%.2e max|rho-0.188|=%.2e "
              "max|P-P_printed|=%.2e",
              solved, gain_err, radius_err, printed_err)};
}

Outcome reactor_blow_up() {
  const LtiSystem reactor = batch_reactor();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int hits = 0;
  double smallest = INFINITY, largest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    Vector x0 = random_normal(rng, 4, 1).col(0);
    x0.normalize();
    Matrix u(2, 20);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = unit(rng);
    const auto report = instability_report(reactor, x0, u);
    hits += report.max_norm >= kBlowUpNorm;
    smallest = std::min(smallest, report.max_norm);
    largest = std::max(largest, report.max_norm);
  }
  return {hits >= kBlowUpQuorum,
          fmt("seeds>=1e6: %g/20 max norm range [%.3e, %.3e]", hits, smallest,
              largest)};
}

struct Sample {
  LtiSystem sys;
  int L;
  std::vector<SignalSegment> inputs;
  std::vector<SignalSegment> states;
  std::vector<IoSegment> io;
};

Sample random_sample(std::mt19937_64& rng, bool minimal) {
  std::uniform_int_distribution<int> n_d(1, 4), m_d(1, 2), q_d(1, 3), L_d(1, 4),
      p_d(1, 2);
  const int n = n_d(rng), m = m_d(rng), q = q_d(rng), L = L_d(rng);
  Sample s{random_system(rng, n, m, p_d(rng), minimal), L, {}, {}, {}};
  s.inputs = pe_inputs(rng, m, segment_lengths(rng, n + L, m, q), n + L);
  for (const auto& u : s.inputs) {
    const auto traj = simulate(s.sys, random_normal(rng, n, 1).col(0),
                               u.samples());
    s.states.emplace_back(traj.x);
    s.io.push_back({u, SignalSegment(traj.y)});
  }
  return s;
}

Outcome rank_condition() {
  std::mt19937_64 rng(5);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s = random_sample(rng, false);
    ok += check_rank_condition(s.sys, s.states, s.inputs, s.L, kRankTol);
  }
  return {ok == 100, fmt("full row rank in %g/100", ok)};
}

Outcome trajectory_equivalence() {
  std::mt19937_64 rng(6);
  double worst_member = 0.0, worst_fit = 0.0;
  int members = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s = random_sample(rng, false);
    const DataDictionary dict = build_data_matrix(s.io, s.L);
    const int n = s.sys.n(), m = s.sys.m();

    const Matrix u = random_normal(rng, m, s.L);
    const auto traj = simulate(s.sys, random_normal(rng, n, 1).col(0), u);
    const auto mem = is_system_trajectory(dict, u.reshaped(),
                                          traj.y.reshaped(), kMembershipTol);
    members += mem.member;
    worst_member = std::max(worst_member, mem.residual);

    const auto w = synthesize_trajectory(
        dict, random_normal(rng, dict.columns(), 1).col(0));
    worst_fit = std::max(worst_fit, state_fit_residual(s.sys, w.u, w.y));
  }
  return {members == 100 && worst_member <= kMembershipTol &&
              worst_fit <= kStateFitTol,
          fmt("members=%g/100 max membership residual=%.2e max state-fit "
              "residual=%.2e",
              members, worst_member, worst_fit)};
}

Outcome simulation_equivalence() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n_d(1, 4), m_d(1, 2), p_d(1, 2), q_d(1, 3);
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = n_d(rng), m = m_d(rng), p = p_d(rng), q = q_d(rng);
    const int L = n + 1;
    const LtiSystem sys = random_system(rng, n, m, p, true);
    const auto inputs =
        pe_inputs(rng, m, segment_lengths(rng, n + L, m, q), n + L);
    std::vector<IoSegment> io;
    for (const auto& u : inputs) {
      const auto traj =
          simulate(sys, random_normal(rng, n, 1).col(0), u.samples());
      io.push_back({u, SignalSegment(traj.y)});
    }
    const DataDictionary dict = build_data_matrix(io, L);
    const Matrix u = random_normal(rng, m, n + 10);
    const auto truth = simulate(sys, random_normal(rng, n, 1).col(0), u);
    try {
      const Matrix y = datadriven_simulate(dict, u.leftCols(n),
                                           truth.y.leftCols(n), u.rightCols(10));
      const double err = (y - truth.y.rightCols(10)).norm() /
                         std::max(1.0, truth.y.norm());
      worst = std::max(worst, err);
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0 && worst <= kSimulationTol,
          fmt("failures=%g max relative error=%.2e", failures, worst)};
}

Outcome length_bound() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> k_d(1, 6), m_d(1, 3), q_d(1, 4);
  int agree = 0, starved = 0, sufficient = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int k, m, q;
    // Keep every segment at least k long so the Hankel blocks exist.
    do {
      k = k_d(rng);
      m = m_d(rng);
      q = q_d(rng);
    } while (static_cast<long>(k) * m < q + 1);
    const long bound = static_cast<long>(k) * (m + q) - q;
    agree += pe_length_bound(k, m, q) == bound;

    // Split `total` samples into q parts of length >= k.
    auto split = [&](long total) {
      std::vector<int> len(q, k);
      for (long extra = total - static_cast<long>(q) * k; extra > 0; --extra)
        ++len[std::uniform_int_distribution<int>(0, q - 1)(rng)];
      std::vector<SignalSegment> segs;
      for (int T : len) segs.emplace_back(random_normal(rng, m, T));
      return segs;
    };
    starved += !is_collectively_pe(split(bound - 1), k, kRankTol);
    sufficient += is_collectively_pe(split(bound), k, kRankTol);
  }
  return {agree == 200 && starved == 200,
          fmt("formula agrees %g/200, short sets rejected %g/200, "
              "random sets at the bound accepted %g/200",
              agree, starved, sufficient)};
}

Outcome riccati_anchors() {
  const Matrix one = Matrix::Ones(1, 1);
  const auto golden = dare_solve(one, one, one, one);
  const double golden_err =
      std::abs(golden.P(0, 0) - (1.0 + std::sqrt(5.0)) / 2.0);

  std::mt19937_64 rng(9);
  const Matrix B = random_normal(rng, 3, 2);
  Matrix Q = random_normal(rng, 3, 3);
  Q = Q * Q.transpose() + Matrix::Identity(3, 3);
  const auto zero = dare_solve(Matrix::Zero(3, 3), B, Q, Matrix::Identity(2, 2));
  const double zero_err = max_abs(zero.P - Q);

  const LtiSystem reactor = batch_reactor();
  const auto rs = dare_solve(reactor.A(), reactor.B(), Matrix::Identity(4, 4),
                             Matrix::Identity(2, 2));
  return {golden_err <= kGoldenTol && zero_err == 0.0 &&
              rs.residual <= kRiccatiResidualTol,
          fmt("|P-phi|=%.2e |P-Q|(A=0)=%.2e reactor residual=%.2e",
              golden_err, zero_err, rs.residual)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget;  // seconds; 0 means unbounded
  };
  const std::vector<Criterion> criteria = {
      {1, "identification from the missing-data record", record_identification, kBudget1},
      {2, "record inputs collectively but not individually PE", record_excitation, 0},
      {3, "batch reactor LQR from data over 20 seeds", reactor_lqr, kBudget3},
      {4, "single long experiment blows up", reactor_blow_up, 0},
      {5, "rank condition over 100 random systems", rank_condition, kBudget5},
      {6, "trajectory space equals data span", trajectory_equivalence, kBudget6},
      {7, "data-driven simulation matches the model", simulation_equivalence, 0},
      {8, "excitation length bound", length_bound, 0},
      {9, "Riccati anchors", riccati_anchors, 0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.budget > 0 && secs >= c.budget) {
      out.pass = false;
      out.detail += fmt(" [over budget %.0f s]", c.budget);
    }
    failed += !out.pass;
    std::printf("[%s] %d %s: %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name, out.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
