"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""
import json
import sys
import time
from pathlib import Path

import pytest

from bootstrap_parent import scenarios

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
TOL = 1e-8
EXACT = 1e-9


def run_config(name):
    cfg = json.loads((CONFIGS / f"{name}.json").read_text())
    return scenarios.run(cfg["scenario"], cfg, cfg.get("seed", 0), None, CONFIGS)


def checks(report):
    return {c["name"]: c for c in report["checks"]}


def emit(number, title, ok, elapsed, budget, detail=""):
    ok = ok and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.1f}s / {budget}s){' ' + detail if detail else ''}"
    print(line, flush=True)
    return ok


def criterion_1():
    t = time.perf_counter()
    toric = run_config("axioms-toric")
    ghz = run_config("axioms-ghz")
    el = time.perf_counter() - t
    c = toric["checks"]
    ok = len(c) == 72 and all(x["pass"] for x in c)
    ok &= all(x["values"]["deficit"] == 0 for x in c if x["name"].startswith("A0"))
    ok &= all(x["values"]["max_deficit"] == 0 and x["values"]["partitions"] == 15 for x in c if x["name"].startswith("A1"))
    g = [x for x in ghz["checks"] if x["name"].startswith("A0")]
    ok &= bool(g) and all(x["values"]["deficit"] == 1 and not x["pass"] for x in g)
    return emit(1, "axiom suite on 6x6 toric code, GHZ control", ok, el, 30)


def criterion_2():
    t = time.perf_counter()
    c = checks(run_config("markov"))
    el = time.perf_counter() - t
    ok = c["decompose"]["values"]["instances"] == 50 and c["decompose"]["pass"]
    ok &= c["round-trip"]["values"]["max_trace_distance"] < TOL
    ok &= c["commutation"]["values"]["max_commutator_norm"] < TOL
    ok &= c["product lemma"]["values"]["max_deviation"] < TOL
    ok &= c["product lemma"]["values"]["union_min_eig"] >= -TOL
    ok &= c["GHZ3 rejected"]["values"]["rejected"] and abs(c["GHZ3 rejected"]["values"]["cmi_bits"] - 1) < EXACT
    return emit(2, "Markov structure on 50 random instances", ok, el, 60)


def criterion_3():
    t = time.perf_counter()
    c = checks(run_config("cover"))
    el = time.perf_counter() - t
    ok = set(c["red distance set"]["values"]["distances"]) <= {0, 1, 2, 3}
    ok &= c["red cover condition"]["pass"] and not c["red cover condition"]["values"]["misses"]
    ok &= c["cell cover condition"]["pass"]
    return emit(3, "red hexagon and cell covers", ok, el, 10)


def criterion_4():
    t = time.perf_counter()
    ok = True
    checked = 0
    for name in ("hamiltonian-red", "hamiltonian-cells"):
        c = checks(run_config(name))
        ok &= c["cover valid"]["pass"] and c["cover valid"]["values"]["max_cmi"] == 0
        ok &= c["commuting"]["pass"] and c["frustration free"]["pass"]
        for x in c["commuting"]["values"]["cross_checks"]:
            if x["status"] == "checked":
                checked += 1
                ok &= x["qubits"] <= 12 and x["norm"] < EXACT and x["agree"]
            else:
                ok &= x["qubits"] > 12
    el = time.perf_counter() - t
    return emit(4, "commuting Hamiltonian on both covers", ok and checked > 0, el, 120, f"dense classes={checked}")


def criterion_5():
    t = time.perf_counter()
    c = checks(run_config("ltqo"))
    el = time.perf_counter() - t
    lu = c["local uniqueness"]["values"]
    rc = lu["cover_radius"]
    ok = c["local uniqueness"]["pass"] and lu["ell"] == 2 * rc + 1 and lu["r_max"] >= 4 * rc and lu["checked"] > 0
    ok &= c["control: band detected"]["pass"]
    ds = c["dense sandwich"]["values"]
    ok &= c["dense sandwich"]["pass"] and 2 * len(ds["D"]) <= 13
    ok &= ds["observables"] == 20 and ds["sandwich"] < TOL
    return emit(5, "local topological order with band control", ok, el, 120, f"sandwich={ds['sandwich']:.1e}")


def criterion_6():
    t = time.perf_counter()
    c = checks(run_config("weight-reduce"))
    el = time.perf_counter() - t
    ok = c["max weight"]["values"]["max_weight"] <= 3
    ok &= c["kernel equality"]["pass"]
    ok &= c["split CMI"]["values"]["max_split_cmi"] == 0
    ok &= c["dense kernel agreement"]["values"]["max_deviation"] < TOL
    return emit(6, "weight reduction", ok, el, 60)


def criterion_7():
    t = time.perf_counter()
    rep = run_config("domain-wall")
    el = time.perf_counter() - t
    c = checks(rep)
    ok = rep["pass"] and c["wall exemption observed"]["values"]["exempt_partitions"] > 0
    ok &= c["wall local uniqueness"]["values"]["checked"] > 0
    ok &= all(c[k]["pass"] for k in ("A0", "wall A1", "cover valid", "commuting", "frustration free"))
    return emit(7, "domain wall", ok, el, 120)


def criterion_8():
    t = time.perf_counter()
    c = checks(run_config("area-law"))
    el = time.perf_counter() - t
    fit = c["area-law fit"]["values"]
    ok = fit["shapes"] >= 6 and fit["residual"] < EXACT
    ok &= c["area-law gamma consistency"]["values"]["spread"] < EXACT
    return emit(8, "strict area law fit", ok, el, 10, f"alpha={fit['alpha']:.6f} gamma={fit['gamma']:.6f}")


def criterion_9():
    t = time.perf_counter()
    rep = run_config("modular")
    el = time.perf_counter() - t
    vals = [x["values"] for x in rep["checks"]]
    ok = bool(vals) and all(abs(v["J"]) < TOL for v in vals)
    ok &= all(2 * (len(v["A"]) + len(v["B"]) + len(v["C"])) <= 12 for v in vals)
    return emit(9, "modular commutator vanishes", ok, el, 30)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [f() for f in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
