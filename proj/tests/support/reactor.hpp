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

#include "fundlemma/lqr_dd.hpp"

namespace fundlemma::testing {

// Stabilizing DARE solution for the batch reactor with Q = I, R = I, from a
// QZ-based solver (independent of the doubling iteration under test).
inline Matrix reactor_p_oracle() {
  Matrix P(4, 4);
  P << 3.60273657517441, 0.0491595927100361, 1.76150928601228, -1.30517803419835,
      0.0491595927100361, 1.17004137170063, 0.0727102361159698, 0.141342825499451,
      1.76150928601228, 0.0727102361159698, 2.20165312896397, -0.843873335333498,
      -1.30517803419835, 0.141342825499451, -0.843873335333498, 1.82224621403824;
  return P;
}

inline Matrix reactor_k_oracle() {
  Matrix K(2, 4);
  K << 0.162785046356118, -0.291918301274352, 0.0494594036515198, -0.328358457020374,
      1.41797253574156, 0.115868968157253, 0.984090074822086, -0.624411009679316;
  return K;
}

// Printed 3-decimal largest Riccati solution of the reactor.
inline Matrix reactor_p_printed() {
  Matrix P(4, 4);
  P << 3.604, 0.049, 1.762, -1.306,
      0.049, 1.170, 0.072, 0.142,
      1.762, 0.072, 2.202, -0.845,
      -1.306, 0.142, -0.845, 1.823;
  return P;
}

inline Experiment simulate_experiment(const LtiSystem& sys, const Vector& x0,
                                      const Matrix& u) {
  const auto traj = simulate(sys, x0, u);
  Matrix states(sys.n(), u.cols() + 1);
  states << traj.x, traj.final_state;
  return {SignalSegment(states), SignalSegment(u)};
}

}  // namespace fundlemma::testing
