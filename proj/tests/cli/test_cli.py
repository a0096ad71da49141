#!/usr/bin/env python3
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
"""End-to-end checks of the command-line tool: outputs and exit codes."""

import csv
import json
import math
import pathlib
import re
import subprocess
import sys
import tempfile

CLI = sys.argv[1]
FIX = pathlib.Path(sys.argv[2])
failures = []


def run(*args):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  {detail}" if not cond else ""))
    if not cond:
        failures.append(name)


def number_after(label, text):
    m = re.search(re.escape(label) + r"\s+(\S+)", text)
    return float(m.group(1)) if m else math.nan


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    code, out, _ = run("pe-check", FIX / "missing_data.csv", "--order", 5)
    check("pe-check record", code == 0 and "order 5: yes" in out, out)
    code, out, _ = run("pe-check", FIX / "zero_input.csv", "--order", 2)
    check("pe-check zero input", code == 2 and "order 2: no" in out, out)
    code, _, err = run("pe-check", FIX / "malformed.csv", "--order", 2)
    check("pe-check malformed", code == 1 and "malformed.csv:3:" in err, err)
    code, _, _ = run("pe-check", "--order", 2)
    check("usage error", code == 1)

    code, out, _ = run("identify", FIX / "missing_data.csv", "--out", tmp / "sys.json")
    check("identify record", code == 0 and "order 2 (depth 4)" in out, out)
    sysjson = json.loads((tmp / "sys.json").read_text())
    check("identify writes D", abs(sysjson["D"][0][0] - 1) < 1e-8)
    markov = [float(v) for v in re.findall(r"markov\[\d+\] \(1x1\)\n\s+(\S+)", out)]
    check("identify markov", len(markov) == 5 and
          all(abs(a - b) < 1e-8 for a, b in zip(markov, [1, 0, 1, 2, 3])), markov)

    empty = tmp / "empty.csv"
    empty.write_text("t,u1,y1\n0,,\n1,NaN,NaN\n2,,\n")
    code, _, _ = run("identify", empty)
    check("identify all missing", code == 3)
    code, _, _ = run("identify", FIX / "zero_input.csv")
    check("identify unexcited", code in (2, 5))

    # generate is byte-reproducible for a fixed seed
    a, b = tmp / "a.csv", tmp / "b.csv"
    for path in (a, b):
        code, _, _ = run("generate", "--system", FIX / "record_system.json", "--length", 20,
                         "--seed", 4, "--missing", "5,12,19", "--out", path)
    check("generate deterministic", code == 0 and a.read_bytes() == b.read_bytes())
    rows = list(csv.reader(a.open()))
    check("generate knocks out samples",
          [r[0] for r in rows[1:] if r[1] == ""] == ["5", "12", "19"])
    code, out, _ = run("identify", a)
    check("identify generated", code == 0 and "order 2" in out, out)

    # data-driven continuation of a fresh query against the model
    train, query = tmp / "train.csv", tmp / "query.csv"
    run("generate", "--system", FIX / "record_system.json", "--length", 30, "--seed", 2,
        "--out", train)
    run("generate", "--system", FIX / "record_system.json", "--length", 10, "--seed", 9,
        "--out", query)
    truth = list(csv.reader(query.open()))
    blanked = [r if i <= 2 else [r[0], r[1], ""] for i, r in enumerate(truth)]
    with query.open("w", newline="") as f:
        csv.writer(f).writerows(blanked)
    code, out, _ = run("dd-simulate", train, "--query", query, "--depth", 3,
                       "--out", tmp / "done.csv")
    done = list(csv.reader((tmp / "done.csv").open())) if code == 0 else []
    err = max((abs(float(x[2]) - float(y[2])) for x, y in zip(done[1:], truth[1:])),
              default=math.inf)
    check("dd-simulate matches simulation", code == 0 and err < 1e-8, f"{code} {err}")
    gap = tmp / "gap_query.csv"
    gap.write_text("t,u1,y1\n0,1,2\n1,1,\n2,1,\n")
    code, _, _ = run("dd-simulate", train, "--query", gap, "--depth", 3)
    check("dd-simulate missing past output", code == 1)
    # zero-input free responses are affine in t, so (1, 0, 0) is unreachable
    wrong = tmp / "wrong_past.csv"
    wrong.write_text("t,u1,y1\n0,0,1\n1,0,0\n2,0,0\n3,1,\n")
    code, _, _ = run("dd-simulate", train, "--query", wrong, "--depth", 4)
    check("dd-simulate inconsistent past", code == 2)

    # LQR on the batch reactor
    exp = tmp / "reactor.csv"
    code, _, _ = run("generate", "--system", FIX / "batch_reactor.json", "--experiments", 5,
                     "--length", 6, "--seed", 11, "--out", exp)
    files = [tmp / f"reactor_{i}.csv" for i in range(1, 6)]
    code, out, _ = run("lqr", *files, "--weights", FIX / "identity_weights.json",
                       "--out", tmp / "gain.json")
    rho = number_after("closed_loop_spectral_radius", out)
    check("lqr reactor radius", code == 0 and abs(rho - 0.188) <= 1e-3, out)
    gain = json.loads((tmp / "gain.json").read_text())
    check("lqr gain json", len(gain["K"]) == 2 and len(gain["K"][0]) == 4)
    for name in ("lmi_max_eig", "riccati_residual"):
        check(f"lqr reports {name}", not math.isnan(number_after(name, out)))

    code, out, _ = run("lqr", FIX / "scalar_exp.csv")
    k = float(re.search(r"K \(1x1\)\n\s+(\S+)", out).group(1)) if code == 0 else math.nan
    check("lqr scalar golden gain", abs(k + (math.sqrt(5) - 1) / 2) < 1e-9, out)
    code, _, _ = run("lqr", FIX / "rank_deficient_exp.csv")
    check("lqr rank deficient", code == 3)
    code, _, _ = run("lqr", FIX / "scalar_exp.csv", "--tol-cert", "1e-30")
    check("lqr certification failure", code == 4)
    code, _, _ = run("lqr", FIX / "missing_data.csv")
    check("lqr needs states", code == 1)

    code, out, _ = run("export-sdp", *files, "--out", tmp / "p.dat-s")
    text = (tmp / "p.dat-s").read_text().splitlines()
    check("export-sdp header", code == 0 and text[1] == "10" and text[2] == "2"
          and text[3] == "4 30", text[:4])

    code, out, _ = run("demo-instability", "--seed", 1)
    peak = number_after("max state norm", out)
    check("demo-instability", code == 0 and peak >= 1e6, out)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
