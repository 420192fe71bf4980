"""Named verification pipelines and their JSON reports.

A scenario takes a resolved config dict and returns a list of checks. The
report wraps the checks with the config, the tolerance ledger and the
package version; it never contains timings, so identical configs give
byte-identical reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from . import lattice as lat
from .axioms import (
    DenseBackend,
    ExtensionStuck,
    StabilizerBackend,
    WallSpec,
    check_a0,
    check_a1,
    check_a1_wall,
    extend_a0,
    extend_a1,
    fit_area_law,
    neighborhood_partitions,
)
from .hamiltonian import (
    CoverInvalid,
    LtqoParams,
    build,
    build_from_regions,
    check_commuting,
    check_ltqo,
    cover_radius,
    dense_kernel_projector,
    dense_ltqo,
    frustration_free,
    kernels_equal,
    local_uniqueness,
    restrict,
    validate_cover,
    weight_reduce,
)
from .lattice import FaceCoord
from .markov import (
    MarkovSpec,
    NotMarkov,
    check_commutation,
    check_product_lemma,
    ghz3,
    make_markov_state,
    markov_decompose,
    verify_projector_factorization,
)
from .stabilizer import (
    DENSE_QUBIT_CAP,
    StabilizerState,
    insert_anyon_pair,
    make_cluster_state,
    make_ghz_state,
    make_product_state,
    make_toric_code,
    make_wall_state,
)
from .tensor import EIGEN_CAP, EPS_CMI, TAU_RANK, cmi, modular_commutator, read_matrix, trace_distance

DENSE_TOL = 1e-8
EXACT_TOL = 1e-9


class ConfigError(ValueError):
    """Bad config, unreadable input, or an instance over a dense cap."""


@dataclass
class Check:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    gated: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "gated": self.gated, "pass": bool(self.passed), "values": self.values}


@dataclass
class Context:
    config: dict
    seed: int
    tol_cmi: float | None
    base: Path

    def get(self, key, default=None):
        return self.config.get(key, default)


# --- backends ------------------------------------------------------------------


def _faces(a) -> list:
    return [[f[0], f[1]] for f in sorted(FaceCoord(*g) for g in a)]


def _region(items) -> frozenset:
    return lat.region(items)


def load_backend(spec: dict, ctx: Context):
    """``{"builtin": name, ...}`` or ``{"file": path, "format": "stabilizer" | "dense"}``."""
    spec = dict(spec)
    if "file" in spec:
        path = ctx.base / spec["file"]
        try:
            if spec.get("format", "stabilizer") == "dense":
                rho = read_matrix(path)
                ext = _extent(spec) if "rows" in spec else None
                return DenseBackend(rho, EPS_CMI if ctx.tol_cmi is None else ctx.tol_cmi, ext)
            state = StabilizerState.from_text(path.read_text(), _extent(spec) if "rows" in spec else None)
        except OSError as e:
            raise ConfigError(f"cannot read backend file {path}: {e}") from e
        return StabilizerBackend(state, 0.0 if ctx.tol_cmi is None else ctx.tol_cmi)
    name = spec.get("builtin")
    rows, cols = int(spec.get("rows", 6)), int(spec.get("cols", spec.get("rows", 6)))
    ext = lat.Extent(rows, cols, True)
    if name == "toric":
        state = make_toric_code(rows, cols)
    elif name == "wall":
        state = make_wall_state(rows, cols, int(spec.get("wall_row", rows // 2)))
    elif name == "ghz":
        state = make_ghz_state(ext.faces(), ext)
    elif name == "product":
        state = make_product_state(ext.faces(), ext)
    elif name == "cluster":
        state = make_cluster_state(ext.faces(), ext)
    else:
        raise ConfigError(f"unknown builtin backend {name!r}")
    for anyon in spec.get("anyons", ()):
        state = insert_anyon_pair(state, anyon["kind"], [tuple(f) for f in anyon["path"]])
    return StabilizerBackend(state, 0.0 if ctx.tol_cmi is None else ctx.tol_cmi)


def _extent(spec: dict) -> lat.Extent:
    return lat.Extent(int(spec["rows"]), int(spec.get("cols", spec["rows"])), bool(spec.get("periodic", True)))


def _backend(ctx: Context, default: dict):
    return load_backend(ctx.get("backend", default), ctx)


def _wall(backend) -> WallSpec | None:
    model = getattr(getattr(backend, "state", None), "model", {})
    if model.get("kind") != "wall":
        return None
    return WallSpec(backend.extent, (model["wall_row"], 0))


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _cover(backend, kind: str, ctx: Context) -> lat.CoverSpec:
    ext = backend.extent
    if kind == "red":
        return lat.red_hexagon_cover(ext)
    if kind == "cells":
        pitch = int(ctx.get("pitch", lat.MIN_PITCH))
        return lat.cells_to_cover(lat.build_cell_decomposition(pitch, ext))
    if kind == "wall":
        wall = _wall(backend)
        if wall is None:
            raise ConfigError("the wall cover needs a wall backend")
        pitch = int(ctx.get("pitch", lat.MIN_WALL_PITCH))
        return lat.cells_to_cover(lat.wall_decomposition(pitch, ext, wall.rows[0]))
    raise ConfigError(f"unknown cover {kind!r}")


# --- scenarios -----------------------------------------------------------------


def _disk_families(center: FaceCoord) -> dict:
    """Hexagons and parallelograms around ``center``."""
    hexes = [lat.ball(center, r) for r in (1, 2, 3)]
    rhombi = [
        frozenset(center + (i, j) for i in range(w) for j in range(h))
        for w, h in ((2, 3), (3, 3), (4, 2), (3, 4))
    ]
    return {"hexagon": hexes, "parallelogram": rhombi}


def run_axioms(ctx: Context) -> list[Check]:
    backend = _backend(ctx, {"builtin": "toric", "rows": 6, "cols": 6})
    wall = _wall(backend)
    faces = [FaceCoord(*f) for f in ctx.get("faces", ())] or backend.extent.faces()
    checks = []
    exempt = 0
    for f in faces:
        r0 = check_a0(backend, {f})
        checks.append(Check(f"A0 {f.q},{f.r}", r0.passed, {"deficit": _num(r0.max_deficit)}))
        r1 = check_a1(backend, {f}) if wall is None else check_a1_wall(backend, {f}, wall)
        exempt += len(r1.exempt)
        checks.append(
            Check(
                f"A1 {f.q},{f.r}",
                r1.passed,
                {"max_deficit": _num(r1.max_deficit), "partitions": len(r1.deficits), "exempt": len(r1.exempt)},
            )
        )
    if wall is not None:
        checks.append(Check("wall exemption observed", exempt > 0, {"exempt_partitions": exempt}))
    if ctx.get("area_law", False):
        checks += _area_law(backend, ctx)
    return checks


def _area_law(backend, ctx: Context) -> list[Check]:
    ext = backend.extent
    center = FaceCoord(*ctx.get("center", (ext.cols // 2, ext.rows // 2)))
    fams = _disk_families(center)
    every = [x for xs in fams.values() for x in xs]
    fit = fit_area_law(backend, every)
    out = [Check("area-law fit", fit.residual < EXACT_TOL, {"alpha": fit.alpha, "gamma": fit.gamma, "residual": fit.residual, "shapes": len(every)})]
    gammas = {k: fit_area_law(backend, xs).gamma for k, xs in sorted(fams.items())}
    spread = max(gammas.values()) - min(gammas.values())
    out.append(Check("area-law gamma consistency", spread < EXACT_TOL, {"gammas": gammas, "spread": spread}))
    return out


def run_extend(ctx: Context) -> list[Check]:
    backend = _backend(ctx, {"builtin": "toric", "rows": 12, "cols": 12})
    ext = backend.extent
    center = FaceCoord(*ctx.get("center", (ext.cols // 2, ext.rows // 2)))
    checks = []
    c = lat.ball(center, int(ctx.get("a0_radius", 2)))
    cert = extend_a0(backend, lat.neighborhood(c), c)
    checks.append(
        Check(
            "A0 extension",
            cert.passed,
            {"faces": len(c), "steps": len(cert.steps), "final_value": _num(cert.final_value), "chain_ok": cert.chain_ok()},
        )
    )
    offsets = ctx.get("a1_region", [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1], [2, 0]])
    c = frozenset(center + tuple(o) for o in offsets)
    triples = [(b, c, d) for b, d in neighborhood_partitions(c)]
    for t in ctx.get("a1_triples", ()):
        triples.append((_region(t["B"]), _region(t["C"]), _region(t["D"])))
    passed = stuck = 0
    worst = 0.0
    for b, cc, d in triples:
        try:
            cert = extend_a1(backend, b, cc, d)
        except ExtensionStuck:
            stuck += 1
            continue
        passed += cert.passed
        worst = max(worst, abs(cert.telescoped() - cert.final_value))
    checks.append(
        Check(
            "A1 extension",
            passed == len(triples),
            {"instances": len(triples), "passed": passed, "stuck": stuck, "telescoping_error": _num(worst)},
        )
    )
    return checks


def _random_spec(rng: np.random.Generator, seed: int, max_dim: int) -> MarkovSpec:
    while True:
        k = int(rng.integers(1, 4))
        blocks = [(int(rng.integers(1, 3)), int(rng.integers(1, 3))) for _ in range(k)]
        spec = MarkovSpec(int(rng.integers(1, 4)), int(rng.integers(1, 4)), blocks, seed=seed, pad=int(rng.integers(0, 2)))
        if spec.dim_a * spec.dim_b * spec.dim_c <= max_dim:
            return spec


def run_markov(ctx: Context) -> list[Check]:
    tol = DENSE_TOL if ctx.tol_cmi is None else ctx.tol_cmi
    rng = np.random.default_rng(ctx.seed)
    n = int(ctx.get("instances", 50))
    max_dim = int(ctx.get("max_dim", 256))
    recon = comm = prod = fact = 0.0
    min_eig = math.inf
    failures = 0
    for i in range(n):
        spec = _random_spec(rng, ctx.seed * 1000 + i, max_dim)
        state = make_markov_state(spec)
        try:
            dec = markov_decompose(state, seed=ctx.seed)
        except (NotMarkov, RuntimeError):
            failures += 1
            continue
        recon = max(recon, trace_distance(dec.reconstruct(), state.matrix))
        fact = max(fact, max(verify_projector_factorization(dec, state).values.values()))
        comm = max(comm, check_commutation(state).values["commutator_norm"])
        p = check_product_lemma(state).values
        prod = max(prod, p["deviation"], p["idempotency"])
        min_eig = min(min_eig, p["union_min_eig"])
    checks = [
        Check("decompose", failures == 0, {"instances": n, "failures": failures}),
        Check("round-trip", recon < tol, {"max_trace_distance": recon, "factorization_deviation": fact}),
        Check("commutation", comm < tol, {"max_commutator_norm": comm}),
        Check("product lemma", prod < tol and min_eig >= -tol, {"max_deviation": prod, "union_min_eig": min_eig}),
    ]
    g = ghz3()
    value = cmi(g, {"A"}, {"B"}, {"C"})
    try:
        markov_decompose(g)
        rejected = False
    except NotMarkov:
        rejected = True
    checks.append(Check("GHZ3 rejected", rejected and abs(value - 1.0) <= EXACT_TOL, {"cmi_bits": value, "rejected": rejected}))
    return checks


def run_cover(ctx: Context) -> list[Check]:
    rows = int(ctx.get("rows", 20))
    ext = lat.Extent(rows, int(ctx.get("cols", rows)), True)
    red = lat.red_faces(ext)
    period = [FaceCoord(q, r) for q in range(5) for r in range(5)]
    dist = sorted({min(ext.distance(f, g) for g in red) for f in period})
    checks = [Check("red distance set", set(dist) <= {0, 1, 2, 3}, {"distances": dist})]
    cover = lat.red_hexagon_cover(ext)
    misses = lat.cover_condition_misses(cover)
    checks.append(Check("red cover condition", not misses, {"regions": len(cover.regions), "misses": _faces(misses)}))
    pitch = int(ctx.get("pitch", lat.MIN_PITCH))
    cext = lat.Extent(4 * pitch, 4 * pitch, True)
    dec = lat.build_cell_decomposition(pitch, cext)
    bad = lat.decomposition_violations(dec)
    cells = lat.cells_to_cover(dec)
    misses = lat.cover_condition_misses(cells)
    checks.append(
        Check(
            "cell cover condition",
            not bad and not misses,
            {"pitch": pitch, "regions": len(cells.regions), "violations": bad, "misses": _faces(misses)},
        )
    )
    return checks


def _hamiltonian_checks(backend, cover, ctx: Context, cross: bool = True) -> tuple[list[Check], object]:
    report = validate_cover(backend, cover)
    checks = [
        Check(
            "cover valid",
            report.passed,
            {
                "regions": len(cover.regions),
                "pairs": len(report.markov_pairs),
                "max_cmi": _num(max((abs(v) for *_, v in report.markov_pairs), default=0)),
                "misses": len(report.cover_misses),
                "overlap_classes": len(report.overlap_classes),
            },
        )
    ]
    if not report.passed:
        return checks, None
    h = build(backend, cover, validate=False)
    comm = check_commuting(h, cross_check=cross)
    checks.append(Check("commuting", comm.passed, {"pairs": len(comm.pairs), "cross_checks": comm.cross_checks}))
    checks.append(Check("frustration free", frustration_free(h)))
    return checks, h


def run_cover_build(ctx: Context, default: dict) -> tuple[list[Check], object, object]:
    backend = _backend(ctx, default)
    try:
        cover = _cover(backend, ctx.get("cover", "red"), ctx)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    checks, h = _hamiltonian_checks(backend, cover, ctx, bool(ctx.get("cross_check", True)))
    return checks, h, backend


def run_hamiltonian(ctx: Context) -> list[Check]:
    checks, h, backend = run_cover_build(ctx, {"builtin": "toric", "rows": 20, "cols": 20})
    if h is None:
        return checks
    if isinstance(backend, StabilizerBackend):
        k = restrict(h, backend.extent.faces())
        checks.append(Check("kernel", k.log2_dim >= 0, {"log2_dim": _num(k.log2_dim)}, gated=False))
    if ctx.get("controls", True) and len(h.cover.regions) > 1:
        dropped = validate_cover(backend, h.cover.without(0))
        checks.append(Check("control: dropped region detected", bool(dropped.cover_misses), {"misses": len(dropped.cover_misses)}))
    return checks


def _centers(ctx: Context, ext: lat.Extent) -> tuple:
    return tuple(tuple(c) for c in ctx.get("centers", [[ext.cols // 2, ext.rows // 2]]))


def run_ltqo(ctx: Context) -> list[Check]:
    backend = _backend(ctx, {"builtin": "toric", "rows": 65, "cols": 65})
    ext = backend.extent
    h = build(backend, lat.red_hexagon_cover(ext), validate=False)
    rc = cover_radius(h.cover)
    ell = ctx.get("ell")
    r_max = int(ctx.get("r_max", 4 * rc))
    rep = check_ltqo(h, LtqoParams(None if ell is None else int(ell), r_max, _centers(ctx, ext)))
    summary = {
        "ell": rep.ell,
        "cover_radius": rc,
        "r_max": r_max,
        "checked": sum(e.status == "checked" for e in rep.entries),
        "too_large": sum(e.status == "too-large" for e in rep.entries),
        "failed": [[*e.center, e.radius] for e in rep.entries if not e.passed],
    }
    checks = [Check("local uniqueness", rep.passed, summary)]
    if ctx.get("band_control", True):
        band = [f for f in ext.faces() if f.r in (0, 1)]
        lf, mo, detail = local_uniqueness(h, band, ext.faces())
        checks.append(Check("control: band detected", not (lf and mo), {"logical_free": lf, "marginal_ok": mo, **detail}))
    patch = ctx.get("dense_patch", True)
    if patch:
        checks.append(_dense_patch(h, ext, patch, ctx))
    return checks


def _dense_patch(h, ext: lat.Extent, patch, ctx: Context) -> Check:
    """Sandwich test on a small ``D``, using weight-reduced terms near it."""
    if isinstance(patch, dict) and "A" in patch:
        a, d = _region(patch["A"]), _region(patch["D"])
    else:
        c = FaceCoord(ext.cols // 2, ext.rows // 2)
        a = frozenset({c})
        d = frozenset({c, c + (1, 0), c - (1, 0), c + (0, 1), c - (0, 1), c + (1, -1)})
    reduced = weight_reduce(h, near=d).hamiltonian
    rep = dense_ltqo(reduced, a, d, observables=20, seed=ctx.seed)
    ok = rep["kernel_marginals"] < DENSE_TOL and rep["sandwich"] < DENSE_TOL
    return Check("dense sandwich", ok, {"A": _faces(a), "D": _faces(d), **{k: _num(v) for k, v in rep.items()}})


def run_weight_reduce(ctx: Context) -> list[Check]:
    backend = _backend(ctx, {"builtin": "toric", "rows": 20, "cols": 20})
    ext = backend.extent
    h = build(backend, lat.red_hexagon_cover(ext), validate=False)
    wr = weight_reduce(h, int(ctx.get("max_faces", 3)))
    info = wr.to_dict()
    checks = [
        Check("max weight", wr.max_weight <= int(ctx.get("max_faces", 3)), {"max_weight": wr.max_weight, "terms_after": info["terms_after"]}),
        Check("split CMI", info["max_split_cmi"] == 0, {"split_nodes": info["split_nodes"], "max_split_cmi": info["max_split_cmi"]}),
        Check("kernel equality", kernels_equal(h, wr.hamiltonian)),
    ]
    c = FaceCoord(ext.cols // 2, ext.rows // 2)
    x = frozenset({c, c + (1, 0), c - (1, 0), c + (0, 1), c - (0, 1), c + (1, -1)})
    small = build_from_regions(backend, [x], ext, {"builder": "single"})
    sw = weight_reduce(small, int(ctx.get("max_faces", 3)))
    dev = float(np.abs(dense_kernel_projector(small, x) - dense_kernel_projector(sw.hamiltonian, x)).max())
    checks.append(Check("dense kernel agreement", dev < DENSE_TOL, {"region": _faces(x), "terms": len(sw.hamiltonian.terms), "max_deviation": dev}))
    return checks


def run_domain_wall(ctx: Context) -> list[Check]:
    pitch = int(ctx.get("pitch", lat.MIN_WALL_PITCH))
    default = {"builtin": "wall", "rows": 4 * pitch, "cols": 4 * pitch, "wall_row": 2 * pitch}
    backend = _backend(ctx, default)
    wall = _wall(backend)
    if wall is None:
        raise ConfigError("domain-wall needs a wall backend")
    ext = backend.extent
    a0_bad = a1_bad = exempt = 0
    for f in ext.faces():
        a0_bad += not check_a0(backend, {f}).passed
        r = check_a1_wall(backend, {f}, wall)
        a1_bad += not r.passed
        exempt += len(r.exempt)
    checks = [
        Check("A0", a0_bad == 0, {"faces": len(ext.faces()), "failures": a0_bad}),
        Check("wall A1", a1_bad == 0, {"failures": a1_bad, "exempt_partitions": exempt}),
        Check("wall exemption observed", exempt > 0, {"exempt_partitions": exempt}),
    ]
    dec = lat.wall_decomposition(pitch, ext, wall.rows[0])
    bad = lat.wall_violations(dec)
    checks.append(Check("wall decomposition", not bad, {"violations": bad}))
    more, h = _hamiltonian_checks(backend, lat.cells_to_cover(dec), ctx, cross=False)
    checks += more
    if h is None:
        return checks
    rows = dec.wall_rows
    centers = _centers(ctx, ext) if ctx.get("centers") else tuple(
        (ext.cols // 2, r) for r in (wall.rows[0], wall.rows[0] - 1, wall.rows[0] + 1)
    )

    def single(a, d):
        return lat.wall_intervals(d, ext, rows) <= 1

    ell = ctx.get("ell")
    rep = check_ltqo(h, LtqoParams(None if ell is None else int(ell), int(ctx.get("r_max", 2)), centers), region_filter=single)
    checks.append(
        Check(
            "wall local uniqueness",
            rep.passed,
            {
                "ell": rep.ell,
                "checked": sum(e.status == "checked" for e in rep.entries),
                "excluded": sum(e.status == "excluded" for e in rep.entries),
                "failed": [[*e.center, e.radius] for e in rep.entries if not e.passed],
            },
        )
    )
    return checks


_TRIPLES = [
    ([[0, 0]], [[1, 0], [0, 1]], [[1, 1], [2, 0], [0, 2]]),
    ([[0, 0], [1, 0]], [[0, 1], [1, 1]], [[0, 2], [1, 2]]),
    ([[0, 0]], [[1, 0]], [[2, 0], [2, -1]]),
]


def run_modular(ctx: Context) -> list[Check]:
    backend = _backend(ctx, {"builtin": "toric", "rows": 8, "cols": 8})
    if not isinstance(backend, StabilizerBackend):
        raise ConfigError("modular densifies a stabilizer backend")
    ext = backend.extent
    center = FaceCoord(*ctx.get("center", (ext.cols // 2, ext.rows // 2)))
    checks = []
    for i, (a, b, c) in enumerate(ctx.get("triples", _TRIPLES)):
        a, b, c = ([center + tuple(o) for o in part] for part in (a, b, c))
        rho = backend.state.densify(a + b + c)
        j = modular_commutator(rho, a, b, c)
        checks.append(Check(f"J triple {i}", abs(j) < DENSE_TOL, {"A": _faces(a), "B": _faces(b), "C": _faces(c), "J": j}))
    return checks


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    keys: tuple
    run: Callable


SCENARIOS = {
    s.name: s
    for s in (
        Scenario("axioms", "A0 and A1 at every face, optional area-law fit", ("backend", "faces", "area_law", "center"), run_axioms),
        Scenario("extend", "A0 and A1 extension certificates", ("backend", "center", "a0_radius", "a1_region", "a1_triples"), run_extend),
        Scenario("markov", "Markov decompositions of random chains and the GHZ control", ("instances", "max_dim"), run_markov),
        Scenario("cover", "red-hexagon and cell covers: distances and cover condition", ("rows", "cols", "pitch"), run_cover),
        Scenario("hamiltonian", "build, commutation, frustration-freeness", ("backend", "cover", "pitch", "cross_check", "controls"), run_hamiltonian),
        Scenario("ltqo", "local uniqueness, band control, dense sandwich", ("backend", "ell", "r_max", "centers", "band_control", "dense_patch"), run_ltqo),
        Scenario("weight-reduce", "terms of at most three faces with the same kernel", ("backend", "max_faces"), run_weight_reduce),
        Scenario("domain-wall", "wall axioms, wall cover Hamiltonian, wall LTQO", ("backend", "pitch", "ell", "r_max", "centers"), run_domain_wall),
        Scenario("modular", "modular commutator on densified triples", ("backend", "center", "triples"), run_modular),
    )
}


def tolerances(ctx: Context) -> dict:
    return {
        "cmi_dense": EPS_CMI if ctx.tol_cmi is None else ctx.tol_cmi,
        "cmi_stabilizer": 0.0 if ctx.tol_cmi is None else ctx.tol_cmi,
        "dense_check": DENSE_TOL,
        "exact_float": EXACT_TOL,
        "rank_relative": TAU_RANK,
        "eigen_cap": EIGEN_CAP,
        "dense_qubit_cap": DENSE_QUBIT_CAP,
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return _faces(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # JSON has no inf/nan
        return x if math.isfinite(x) else str(x)
    return x


def run(name: str, config: dict, seed: int = 0, tol_cmi: float | None = None, base: Path | None = None) -> dict:
    """Run one scenario and return its report dict.

    Raises :class:`ConfigError` for unknown scenarios, bad configs and cap
    violations.
    """
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}")
    ctx = Context(dict(config), int(seed), tol_cmi, base or Path.cwd())
    try:
        checks = SCENARIOS[name].run(ctx)
    except CoverInvalid as e:
        checks = [Check("cover valid", False, e.report.to_dict())]
    except (KeyError, TypeError) as e:
        raise ConfigError(f"bad config for {name}: {e}") from e
    except ValueError as e:
        raise ConfigError(str(e)) from e
    gated = [c for c in checks if c.gated]
    report = {
        "artifact": {"name": "artifact", "package": "bootstrap_parent", "version": __version__},
        "scenario": name,
        "seed": ctx.seed,
        "config": config,
        "tolerances": tolerances(ctx),
        "checks": [c.to_dict() for c in checks],
        "summary": {"checks": len(checks), "gated": len(gated), "failed": sum(not c.passed for c in gated)},
        "pass": all(c.passed for c in gated),
    }
    return _jsonable(report)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def schema() -> dict:
    path = Path(__file__).with_name("report.schema.json")
    return json.loads(path.read_text())
