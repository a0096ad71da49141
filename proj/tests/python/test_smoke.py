# Copyright 2026 The fundlemma Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import math

import numpy as np
import pytest

import fundlemma as fl

NAN = math.nan
U = [1, 0, 2, -1, 0, NAN, 1, 1, -1, -5, 0, -1, NAN, 1, -6, 2, -2, 0, 1, NAN]
Y = [3, 3, 7, 6, 11, NAN, 18, 21, 23, 24, 33, 31, NAN, 30, 20, 26, 14, 10, 3, NAN]


def record_system():
    return fl.LtiSystem(np.array([[1.0, 0], [1, 1]]), np.array([[1.0], [0]]),
                        np.array([[0.0, 1]]), np.array([[1.0]]))


def test_simulate_matches_recursion():
    sys = record_system()
    u = np.array([[1.0, 0, 0, 0, 0]])
    x, y, xf = fl.simulate(sys, np.zeros(2), u)
    np.testing.assert_allclose(y[0], [1, 0, 1, 2, 3])
    assert xf.shape == (2,)


def test_hankel_layout():
    H = fl.hankel(np.array([[1.0, 2, 3, 4]]), 2)
    np.testing.assert_array_equal(H, [[1, 2, 3], [2, 3, 4]])
    assert fl.pe_length_bound(5, 1, 3) == 5 * 4 - 3


def test_record_excitation():
    segs = [np.array([U[0:5]]), np.array([U[6:12]]), np.array([U[13:19]])]
    assert not any(fl.is_persistently_exciting(s, 5) for s in segs if s.shape[1] >= 5)
    assert fl.is_collectively_pe(segs, 5)
    assert np.linalg.matrix_rank(fl.mosaic_hankel(segs, 5)) == 5


def test_identify_record():
    res = fl.identify(np.array([U]), np.array([Y]))
    assert res.order == 2
    np.testing.assert_allclose([m[0, 0] for m in res.markov][:5], [1, 0, 1, 2, 3],
                               atol=1e-8)
    got = fl.markov_parameters(res.system, 8)
    want = fl.markov_parameters(record_system(), 8)
    for a, b in zip(got, want):
        np.testing.assert_allclose(a, b, atol=1e-8)


def test_dictionary_simulation():
    rng = np.random.default_rng(3)
    sys = record_system()
    u = rng.standard_normal((1, 30))
    _, y, _ = fl.simulate(sys, rng.standard_normal(2), u)
    d = fl.DataDictionary([u], [y], 3)
    assert d.matrix.shape == (6, 28)
    uq = rng.standard_normal((1, 12))
    _, yq, _ = fl.simulate(sys, rng.standard_normal(2), uq)
    pred = d.simulate(uq[:, :2], yq[:, :2], uq[:, 2:])
    np.testing.assert_allclose(pred, yq[:, 2:], atol=1e-8)
    member, _ = d.contains(uq[:, :3], yq[:, :3])
    assert member


def test_reactor_lqr_against_riccati():
    sys = fl.batch_reactor()
    xs, us = fl.random_experiments(sys, seed=1)
    sol = fl.lqr_from_data(xs, us)
    ref = fl.dare_solve(sys.A, sys.B, np.eye(4), np.eye(2))
    np.testing.assert_allclose(sol.K, ref.K, atol=1e-6)
    assert abs(fl.spectral_radius(sys.A + sys.B @ sol.K) - 0.188) < 1e-3
    text = fl.export_sdp(xs, us, np.eye(4), np.eye(2))
    assert text.splitlines()[1] == "10"


def test_golden_ratio_riccati():
    one = np.ones((1, 1))
    sol = fl.dare_solve(one, one, one, one)
    assert abs(sol.P[0, 0] - (1 + math.sqrt(5)) / 2) < 1e-10


def test_errors_carry_kind():
    with pytest.raises(fl.FundlemmaError) as info:
        fl.hankel(np.array([[1.0, 2]]), 3)
    assert info.value.kind
    with pytest.raises(fl.FundlemmaError):
        fl.identify(np.full((1, 4), NAN), np.full((1, 4), NAN))
