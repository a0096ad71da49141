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
// Python bindings. Signals are (dim, T) arrays, one sample per column.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <vector>

#include "fundlemma/fundlemma.hpp"

namespace py = pybind11;
using namespace fundlemma;

namespace {

std::vector<SignalSegment> segments(const std::vector<Matrix>& arrays) {
  std::vector<SignalSegment> out;
  for (const auto& a : arrays) out.emplace_back(a);
  return out;
}

std::vector<IoSegment> io_segments(const std::vector<Matrix>& us,
                                   const std::vector<Matrix>& ys) {
  require(us.size() == ys.size(), "need as many output as input segments");
  std::vector<IoSegment> out;
  for (std::size_t i = 0; i < us.size(); ++i)
    out.push_back({SignalSegment(us[i]), SignalSegment(ys[i])});
  return out;
}

// Columns whose u and y are all NaN are missing samples.
CorruptedTrajectory corrupted(const Matrix& u, const Matrix& y) {
  require(u.cols() == y.cols(), "u and y need the same number of samples");
  std::vector<std::optional<IoSample>> entries;
  for (Eigen::Index t = 0; t < u.cols(); ++t) {
    const bool gone = u.col(t).array().isNaN().all() && y.col(t).array().isNaN().all();
    if (gone) {
      entries.emplace_back(std::nullopt);
    } else {
      entries.push_back(IoSample{u.col(t), y.col(t)});
    }
  }
  return CorruptedTrajectory(static_cast<int>(u.rows()),
                             static_cast<int>(y.rows()), std::move(entries));
}

std::vector<Experiment> experiments(const std::vector<Matrix>& states,
                                    const std::vector<Matrix>& inputs) {
  require(states.size() == inputs.size(),
          "need as many state as input records");
  std::vector<Experiment> out;
  for (std::size_t i = 0; i < states.size(); ++i)
    out.push_back({SignalSegment(states[i]), SignalSegment(inputs[i])});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Data-driven analysis and control of linear systems";

  static py::exception<Error> exc(mod, "FundlemmaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc)(e.what());
      err.attr("kind") = to_string(e.kind());
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  py::class_<LtiSystem>(mod, "LtiSystem")
      .def(py::init<Matrix, Matrix, Matrix, Matrix>(), py::arg("A"),
           py::arg("B"), py::arg("C"), py::arg("D"))
      .def_property_readonly("A", &LtiSystem::A)
      .def_property_readonly("B", &LtiSystem::B)
      .def_property_readonly("C", &LtiSystem::C)
      .def_property_readonly("D", &LtiSystem::D)
      .def_property_readonly("n", &LtiSystem::n)
      .def_property_readonly("m", &LtiSystem::m)
      .def_property_readonly("p", &LtiSystem::p);

  mod.def(
      "simulate",
      [](const LtiSystem& sys, const Vector& x0, const Matrix& u) {
        const auto t = simulate(sys, x0, u);
        return py::make_tuple(t.x, t.y, t.final_state);
      },
      py::arg("system"), py::arg("x0"), py::arg("u"),
      "Returns (x, y, final_state).");
  mod.def("markov_parameters", &markov_parameters);
  mod.def("spectral_radius", [](const Matrix& M) { return spectral_radius(M); });
  mod.def("is_controllable", &is_controllable, py::arg("A"), py::arg("B"),
          py::arg("tol") = kDefaultRankTol);

  mod.def(
      "hankel", [](const Matrix& s, int depth) {
        return hankel(SignalSegment(s), depth);
      },
      py::arg("signal"), py::arg("depth"));
  mod.def(
      "mosaic_hankel",
      [](const std::vector<Matrix>& s, int depth) {
        return mosaic_hankel(segments(s), depth).assembled;
      },
      py::arg("signals"), py::arg("depth"));
  mod.def(
      "is_persistently_exciting",
      [](const Matrix& s, int order, double tol) {
        return is_persistently_exciting(SignalSegment(s), order, tol);
      },
      py::arg("signal"), py::arg("order"), py::arg("tol") = kDefaultRankTol);
  mod.def(
      "is_collectively_pe",
      [](const std::vector<Matrix>& s, int order, double tol) {
        return is_collectively_pe(segments(s), order, tol);
      },
      py::arg("signals"), py::arg("order"), py::arg("tol") = kDefaultRankTol);
  mod.def(
      "pe_order",
      [](const Matrix& s, double tol) { return pe_order(SignalSegment(s), tol); },
      py::arg("signal"), py::arg("tol") = kDefaultRankTol);
  mod.def("pe_length_bound", &pe_length_bound, py::arg("order"),
          py::arg("input_dim"), py::arg("segment_count"));

  py::class_<DataDictionary>(mod, "DataDictionary")
      .def(py::init([](const std::vector<Matrix>& us,
                       const std::vector<Matrix>& ys, int depth) {
             return build_data_matrix(io_segments(us, ys), depth);
           }),
           py::arg("inputs"), py::arg("outputs"), py::arg("depth"))
      .def_property_readonly("depth", &DataDictionary::depth)
      .def_property_readonly("columns", &DataDictionary::columns)
      .def_property_readonly("matrix", &DataDictionary::data_matrix)
      .def(
          "contains",
          [](const DataDictionary& d, const Matrix& u, const Matrix& y,
             double tol) {
            const auto r = is_system_trajectory(d, u.reshaped(), y.reshaped(), tol);
            return py::make_tuple(r.member, r.residual);
          },
          py::arg("u"), py::arg("y"), py::arg("tol") = 1e-8,
          "Membership of a (m, L) / (p, L) window: (member, residual).")
      .def(
          "simulate",
          [](const DataDictionary& d, const Matrix& past_u, const Matrix& past_y,
             const Matrix& future_u, double tol) {
            DdSimulateOptions opts;
            opts.residual_tol = tol;
            return datadriven_simulate(d, past_u, past_y, future_u, opts);
          },
          py::arg("past_u"), py::arg("past_y"), py::arg("future_u"),
          py::arg("tol") = 1e-6);

  py::class_<IdentificationResult>(mod, "IdentificationResult")
      .def_readonly("system", &IdentificationResult::system)
      .def_readonly("order", &IdentificationResult::order)
      .def_readonly("depth", &IdentificationResult::estimation_depth)
      .def_readonly("markov", &IdentificationResult::markov)
      .def_readonly("residual", &IdentificationResult::residual)
      .def_readonly("warnings", &IdentificationResult::warnings);
  mod.def(
      "identify",
      [](const Matrix& u, const Matrix& y, int max_order, double tol_rank) {
        IdentifyOptions opts;
        opts.max_order = max_order;
        opts.rank_tol = tol_rank;
        return identify(corrupted(u, y), opts);
      },
      py::arg("u"), py::arg("y"), py::arg("max_order") = 10,
      py::arg("tol_rank") = kDefaultRankTol,
      "Identify from (m, T) / (p, T) records; all-NaN columns are missing.");

  py::class_<RiccatiSolution>(mod, "RiccatiSolution")
      .def_readonly("P", &RiccatiSolution::P)
      .def_readonly("K", &RiccatiSolution::K)
      .def_readonly("residual", &RiccatiSolution::residual);
  mod.def(
      "dare_solve",
      [](const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
        return dare_solve(A, B, Q, R);
      },
      py::arg("A"), py::arg("B"), py::arg("Q"), py::arg("R"));

  py::class_<LqrSolution>(mod, "LqrSolution")
      .def_readonly("P", &LqrSolution::P)
      .def_readonly("K", &LqrSolution::K)
      .def_readonly("lmi_max_eig", &LqrSolution::lmi_max_eig)
      .def_readonly("riccati_residual", &LqrSolution::riccati_residual)
      .def_readonly("closed_loop_radius", &LqrSolution::closed_loop_radius);
  mod.def(
      "lqr_from_data",
      [](const std::vector<Matrix>& states, const std::vector<Matrix>& inputs,
         std::optional<Matrix> Q, std::optional<Matrix> R, double cert_tol) {
        const auto batch = assemble_batch(experiments(states, inputs));
        LqrWeights w = LqrWeights::identity(static_cast<int>(batch.Xm.rows()),
                                            static_cast<int>(batch.Um.rows()));
        if (Q) w.Q = *Q;
        if (R) w.R = *R;
        LqrOptions opts;
        opts.cert_tol = cert_tol;
        return lqr_from_data(batch, w, opts);
      },
      py::arg("states"), py::arg("inputs"), py::arg("Q") = py::none(),
      py::arg("R") = py::none(), py::arg("cert_tol") = 1e-6,
      "states[i] is (n, T_i + 1), inputs[i] is (m, T_i).");
  mod.def(
      "export_sdp",
      [](const std::vector<Matrix>& states, const std::vector<Matrix>& inputs,
         const Matrix& Q, const Matrix& R) {
        return export_sdp(assemble_batch(experiments(states, inputs)),
                          LqrWeights{Q, R});
      },
      py::arg("states"), py::arg("inputs"), py::arg("Q"), py::arg("R"));

  mod.def("batch_reactor", &batch_reactor);
  mod.def(
      "random_experiments",
      [](const LtiSystem& sys, int count, int length, int order,
         std::uint64_t seed) {
        ExperimentDesign d;
        d.count = count;
        d.length = length;
        d.pe_order = order;
        std::vector<Matrix> xs, us;
        for (const auto& e : random_experiments(sys, d, seed)) {
          xs.push_back(e.states.samples());
          us.push_back(e.inputs.samples());
        }
        return py::make_tuple(xs, us);
      },
      py::arg("system"), py::arg("count") = 5, py::arg("length") = 6,
      py::arg("order") = 5, py::arg("seed") = 0,
      "Returns (states, inputs) lists.");
  mod.def(
      "instability_report",
      [](const LtiSystem& sys, const Vector& x0, const Matrix& u) {
        return instability_report(sys, x0, u).state_norms;
      },
      py::arg("system"), py::arg("x0"), py::arg("u"));
}
