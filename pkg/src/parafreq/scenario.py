"""Declarative scenario execution: config parsing, check dispatch, emitters.

A scenario is one JSON document describing a background, an initial
coefficient field, a time grid, optional forcing, and the list of checks to
run.  Configs are the reproducibility unit: the canonical hash of the
normalized document goes into every emitted report, and a fixed config plus
resolution yields byte-identical outputs.

Check names accepted in ``checks`` (and ``report_only``):

    frequency_monotonicity  equality_case  harnack  harnack_printed
    weighted_monotonicity   drift_bochner  drift_bochner_verbatim
    general_bounds  general_harnack  eigenvalue_monotonicity
    selfsimilar_scaling  quadrature_mass

``report_only`` checks still run and are fully reported, but their failures
never affect the process exit code; that is how the two documented-
discrepancy variants stay visible without failing suites.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from ._version import __version__
from .backgrounds import Background, Cylinder, Plane, Sphere, kappa, quadrature
from .evolution import (
    CoefficientField,
    ConstantRate,
    Forcing,
    ModeMatrix,
    SampledRate,
    ScalarOnU,
    TimeGrid,
    Trajectory,
    evolve_exact_trajectory,
    evolve_forced,
)
from .frequency import FrequencyTrace, trace_from_trajectory
from .modes import Mode, enumerate_modes, mode_from_index, mode_sort_key
from .verifiers import (
    NodeCheck,
    VerificationReport,
    report_from_dict,
    standard_test_functions,
    verify_drift_bochner,
    verify_drift_bochner_verbatim,
    verify_eigenvalue_monotonicity,
    verify_equality_case,
    verify_frequency_monotonicity,
    verify_general_bounds,
    verify_general_harnack,
    verify_harnack,
    verify_harnack_printed,
    verify_quadrature_mass,
    verify_selfsimilar_scaling,
    verify_weighted_monotonicity,
)


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""

    def __init__(self, field: str, problem: str):
        self.field = field
        super().__init__(f"config field '{field}': {problem}")


_CHECK_NAMES = (
    "frequency_monotonicity",
    "equality_case",
    "harnack",
    "harnack_printed",
    "weighted_monotonicity",
    "drift_bochner",
    "drift_bochner_verbatim",
    "general_bounds",
    "general_harnack",
    "eigenvalue_monotonicity",
    "selfsimilar_scaling",
    "quadrature_mass",
)

# checks that evaluate modes or geometry pointwise and therefore need a
# background from the closed-form table
_POINTWISE_CHECKS = frozenset(
    {"weighted_monotonicity", "selfsimilar_scaling", "quadrature_mass"}
)
_BOCHNER_CHECKS = frozenset({"drift_bochner", "drift_bochner_verbatim"})


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated, normalized scenario description."""

    scenario_id: str
    background: Background
    initial_modes: tuple[tuple[Mode, float], ...]
    grid: TimeGrid
    kappa_value: float
    forcing: Forcing | None
    resolution: int
    checks: tuple[str, ...]
    report_only: frozenset[str]
    tolerances: tuple[tuple[str, float], ...]
    rk_local_tol: float
    random_mixture: tuple[tuple[str, float], ...] | None

    def tolerance_for(self, check: str) -> float | None:
        for name, value in self.tolerances:
            if name == check:
                return value
        return None

    def normalized(self) -> dict:
        """Canonical plain-data form; the sole input to the config hash."""
        bg = self.background
        if isinstance(bg, Plane):
            bg_doc: dict[str, Any] = {"kind": "plane", "n": bg.n}
        elif isinstance(bg, Sphere):
            bg_doc = {"kind": "sphere", "n": bg.n}
        else:
            assert isinstance(bg, Cylinder)
            bg_doc = {"kind": "cylinder", "k": bg.k, "m": bg.m}
        forcing_doc: dict[str, Any] | None = None
        if self.forcing is not None:
            rate = self.forcing.rate
            if isinstance(rate, ConstantRate):
                rate_doc: dict[str, Any] = {"type": "constant", "c0": rate.c0}
            else:
                assert isinstance(rate, SampledRate)
                rate_doc = {
                    "type": "sampled",
                    "times": list(rate.times),
                    "values": list(rate.values),
                }
            coupling = self.forcing.coupling
            if isinstance(coupling, ScalarOnU):
                forcing_doc = {"coupling": "scalar_on_u", "rate": rate_doc}
            else:
                assert isinstance(coupling, ModeMatrix)
                forcing_doc = {
                    "coupling": "mode_matrix",
                    "modes": [_mode_key(m) for m in coupling.modes],
                    "matrix": [list(row) for row in coupling.matrix],
                    "rate": rate_doc,
                }
        return {
            "scenario_id": self.scenario_id,
            "background": bg_doc,
            "initial_modes": {_mode_key(m): a for m, a in self.initial_modes},
            "time": {"a": self.grid.a, "b": self.grid.b, "nodes": len(self.grid.nodes)},
            "kappa": self.kappa_value,
            "forcing": forcing_doc,
            "resolution": self.resolution,
            "checks": sorted(self.checks),
            "report_only": sorted(self.report_only),
            "tolerances": {name: value for name, value in sorted(self.tolerances)},
            "rk_local_tol": self.rk_local_tol,
            "random_mixture": dict(self.random_mixture) if self.random_mixture is not None else None,
        }

    def config_hash(self) -> str:
        doc = json.dumps(self.normalized(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(doc.encode("utf-8")).hexdigest()


def _mode_key(mode: Mode) -> str:
    return ",".join(str(i) for i in mode.index)


def _parse_background(doc: Any) -> Background:
    if not isinstance(doc, Mapping):
        raise ConfigError("background", "must be an object with a 'kind'")
    kind = doc.get("kind")
    try:
        if kind == "plane":
            return Plane(int(doc["n"]))
        if kind == "sphere":
            return Sphere(int(doc["n"]))
        if kind == "cylinder":
            return Cylinder(int(doc["k"]), int(doc["m"]))
    except KeyError as exc:
        raise ConfigError("background", f"missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError("background", str(exc)) from exc
    raise ConfigError("background.kind", f"unknown kind {kind!r}")


def _parse_mode(bg: Background, key: str) -> Mode:
    try:
        index = tuple(int(part) for part in key.split(","))
    except ValueError as exc:
        raise ConfigError("initial_modes", f"bad multi-index {key!r}") from exc
    try:
        return mode_from_index(bg, index)
    except (ValueError, KeyError) as exc:
        raise ConfigError("initial_modes", f"invalid mode {key!r} for {bg.label()}: {exc}") from exc


def _parse_rate(doc: Any) -> ConstantRate | SampledRate:
    if not isinstance(doc, Mapping) or "type" not in doc:
        raise ConfigError("forcing.rate", "must be an object with a 'type'")
    if doc["type"] == "constant":
        try:
            return ConstantRate(float(doc["c0"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("forcing.rate.c0", str(exc)) from exc
    if doc["type"] == "sampled":
        try:
            return SampledRate(tuple(float(t) for t in doc["times"]), tuple(float(v) for v in doc["values"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("forcing.rate", str(exc)) from exc
    raise ConfigError("forcing.rate.type", f"unknown type {doc['type']!r}")


def _parse_forcing(bg: Background, doc: Any) -> Forcing:
    if not isinstance(doc, Mapping):
        raise ConfigError("forcing", "must be an object")
    rate = _parse_rate(doc.get("rate"))
    coupling_kind = doc.get("coupling")
    if coupling_kind == "scalar_on_u":
        return Forcing(rate, ScalarOnU())
    if coupling_kind == "mode_matrix":
        if "modes" not in doc or "matrix" not in doc:
            raise ConfigError("forcing", "mode_matrix coupling needs 'modes' and 'matrix'")
        modes = tuple(_parse_mode(bg, key) for key in doc["modes"])
        try:
            matrix = tuple(tuple(float(x) for x in row) for row in doc["matrix"])
            return Forcing(rate, ModeMatrix(modes, matrix))
        except (TypeError, ValueError) as exc:
            raise ConfigError("forcing.matrix", str(exc)) from exc
    raise ConfigError("forcing.coupling", f"unknown coupling {coupling_kind!r}")


def _pointwise_supported(bg: Background) -> bool:
    if isinstance(bg, Plane):
        return bg.n <= 3
    if isinstance(bg, Sphere):
        return bg.n <= 2
    return isinstance(bg, Cylinder) and (bg.k, bg.m) == (1, 1)


def _bochner_supported(bg: Background) -> bool:
    return (isinstance(bg, Plane) and bg.n <= 2) or (isinstance(bg, Sphere) and bg.n <= 2)


def parse_config(doc: Mapping, *, fallback_id: str = "") -> ScenarioConfig:
    """Validate a plain-data scenario document into a ``ScenarioConfig``.

    Raises ``ConfigError`` naming the offending field on any problem.
    """
    if not isinstance(doc, Mapping):
        raise ConfigError("<root>", "config must be a JSON object")
    known_keys = {
        "scenario_id", "background", "initial_modes", "time", "kappa", "forcing",
        "resolution", "checks", "report_only", "tolerances", "rk_local_tol", "random_mixture",
    }
    for key in doc:
        if key not in known_keys:
            raise ConfigError(key, "unknown field")

    scenario_id = str(doc.get("scenario_id") or fallback_id)
    if not scenario_id:
        raise ConfigError("scenario_id", "required (non-empty string)")
    bg = _parse_background(doc.get("background"))

    time_doc = doc.get("time")
    if not isinstance(time_doc, Mapping):
        raise ConfigError("time", "must be an object {a, b, nodes}")
    try:
        a = float(time_doc["a"])
        b = float(time_doc["b"])
        count = int(time_doc["nodes"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("time", str(exc)) from exc
    if not (a < b < 0.0):
        raise ConfigError("time", f"need a < b < 0, got a={a}, b={b}")
    if count < 3:
        raise ConfigError("time.nodes", f"need at least 3 nodes, got {count}")
    grid = TimeGrid.uniform(a, b, count)

    modes_doc = doc.get("initial_modes", {})
    if not isinstance(modes_doc, Mapping):
        raise ConfigError("initial_modes", "must be an object mapping multi-index to amplitude")
    coeffs: dict[Mode, float] = {}
    for key, amp in modes_doc.items():
        mode = _parse_mode(bg, str(key))
        try:
            value = float(amp)
        except (TypeError, ValueError) as exc:
            raise ConfigError("initial_modes", f"amplitude for {key!r} not a number") from exc
        if not math.isfinite(value):
            raise ConfigError("initial_modes", f"amplitude for {key!r} must be finite")
        if mode in coeffs:
            raise ConfigError("initial_modes", f"duplicate mode {key!r}")
        coeffs[mode] = value

    mixture_doc = doc.get("random_mixture")
    mixture: tuple[tuple[str, float], ...] | None = None
    if mixture_doc is not None:
        if not isinstance(mixture_doc, Mapping):
            raise ConfigError("random_mixture", "must be an object {seed, mu_cutoff, low, high}")
        try:
            seed = int(mixture_doc["seed"])
            mu_cutoff = float(mixture_doc["mu_cutoff"])
            low = float(mixture_doc["low"])
            high = float(mixture_doc["high"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("random_mixture", str(exc)) from exc
        if not (0.0 <= low <= high):
            raise ConfigError("random_mixture", f"need 0 <= low <= high, got low={low}, high={high}")
        if mu_cutoff < 0.0:
            raise ConfigError("random_mixture.mu_cutoff", "must be >= 0")
        mixture = (("seed", float(seed)), ("mu_cutoff", mu_cutoff), ("low", low), ("high", high))
        rng = np.random.default_rng(seed)
        for mode in enumerate_modes(bg, mu_cutoff):
            amp = float(rng.uniform(low, high)) * float(rng.choice((-1.0, 1.0)))
            coeffs[mode] = coeffs.get(mode, 0.0) + amp

    kappa_doc = doc.get("kappa")
    if kappa_doc is None or kappa_doc == "background":
        kappa_value = kappa(bg)
    else:
        try:
            kappa_value = float(kappa_doc)
        except (TypeError, ValueError) as exc:
            raise ConfigError("kappa", "must be a number") from exc
        if not math.isfinite(kappa_value) or kappa_value < 0.0:
            raise ConfigError("kappa", f"must be finite and >= 0, got {kappa_value}")

    forcing = None
    if doc.get("forcing") is not None:
        forcing = _parse_forcing(bg, doc["forcing"])

    resolution = doc.get("resolution", 24)
    try:
        resolution = int(resolution)
    except (TypeError, ValueError) as exc:
        raise ConfigError("resolution", "must be an integer") from exc
    if resolution < 2:
        raise ConfigError("resolution", f"must be >= 2, got {resolution}")

    checks_doc = doc.get("checks")
    if not isinstance(checks_doc, (list, tuple)) or not checks_doc:
        raise ConfigError("checks", "must be a non-empty list of check names")
    checks: list[str] = []
    for name in checks_doc:
        if name not in _CHECK_NAMES:
            raise ConfigError("checks", f"unknown check {name!r}")
        if name in checks:
            raise ConfigError("checks", f"duplicate check {name!r}")
        checks.append(name)
    if any(c in _POINTWISE_CHECKS for c in checks) and not _pointwise_supported(bg):
        raise ConfigError("checks", f"pointwise checks are not available on {bg.label()}")
    if any(c in _BOCHNER_CHECKS for c in checks) and not _bochner_supported(bg):
        raise ConfigError(
            "checks", f"curvature-identity checks support plane(n<=2) and sphere(n<=2); got {bg.label()}"
        )
    if forcing is not None and not _pointwise_supported(bg):
        raise ConfigError("forcing", f"hypothesis certification needs pointwise geometry; got {bg.label()}")

    report_only_doc = doc.get("report_only", [])
    if not isinstance(report_only_doc, (list, tuple)):
        raise ConfigError("report_only", "must be a list of check names")
    report_only: set[str] = set()
    for name in report_only_doc:
        if name not in checks:
            raise ConfigError("report_only", f"{name!r} is not among the requested checks")
        report_only.add(name)

    tolerances_doc = doc.get("tolerances", {})
    if not isinstance(tolerances_doc, Mapping):
        raise ConfigError("tolerances", "must be an object mapping check name to tolerance")
    tolerances: list[tuple[str, float]] = []
    for name, value in tolerances_doc.items():
        if name not in _CHECK_NAMES:
            raise ConfigError("tolerances", f"unknown check {name!r}")
        try:
            tol = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError("tolerances", f"tolerance for {name!r} not a number") from exc
        if not (tol >= 0.0 and math.isfinite(tol)):
            raise ConfigError("tolerances", f"tolerance for {name!r} must be finite and >= 0")
        tolerances.append((name, tol))

    rk_local_tol = doc.get("rk_local_tol", 1e-8)
    try:
        rk_local_tol = float(rk_local_tol)
    except (TypeError, ValueError) as exc:
        raise ConfigError("rk_local_tol", "must be a number") from exc
    if not (0.0 < rk_local_tol < 1.0):
        raise ConfigError("rk_local_tol", f"must be in (0, 1), got {rk_local_tol}")

    entries = tuple(sorted(coeffs.items(), key=lambda kv: mode_sort_key(kv[0])))
    return ScenarioConfig(
        scenario_id=scenario_id,
        background=bg,
        initial_modes=entries,
        grid=grid,
        kappa_value=kappa_value,
        forcing=forcing,
        resolution=resolution,
        checks=tuple(checks),
        report_only=frozenset(report_only),
        tolerances=tuple(sorted(tolerances)),
        rk_local_tol=rk_local_tol,
        random_mixture=mixture,
    )


def load_config(path: str | Path) -> ScenarioConfig:
    """Read and validate one scenario JSON file."""
    p = Path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", f"invalid JSON in {p}: {exc}") from exc
    return parse_config(doc, fallback_id=p.stem)


# ---------------------------------------------------------------------------
# execution


@dataclass(frozen=True)
class RunOutput:
    """Everything one scenario produced: trace, reports, provenance."""

    config: ScenarioConfig
    trace: FrequencyTrace
    reports: tuple[VerificationReport, ...]

    @property
    def provenance(self) -> dict:
        return {
            "config_hash": self.config.config_hash(),
            "tool_version": __version__,
            "resolution": self.config.resolution,
        }

    def failed_checks(self) -> tuple[str, ...]:
        """Names of failed checks that count toward the exit code."""
        return tuple(
            r.check_name
            for r in self.reports
            if r.status == "fail" and r.check_name not in self.config.report_only
        )


def _merge_nodes(
    check_name: str,
    reports: list[VerificationReport],
) -> tuple[list[NodeCheck], float, tuple[str, ...]]:
    nodes: list[NodeCheck] = []
    notes: list[str] = []
    tol = 0.0
    for r in reports:
        nodes.extend(r.nodes)
        notes.extend(r.notes)
        tol = max(tol, r.tolerance)
    return nodes, tol, tuple(notes)


def _run_weighted(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
    # one report per scenario: fold every packaged test function into one node list
    funcs = standard_test_functions(config.background)
    tol = config.tolerance_for("weighted_monotonicity")
    partial = []
    for name, poly in sorted(funcs.items()):
        kwargs = {"resolution": config.resolution, "scenario_id": config.scenario_id, "function_name": name}
        if tol is not None:
            kwargs["tolerance"] = tol
        rep = verify_weighted_monotonicity(config.background, poly, config.grid, **kwargs)
        relabeled = [NodeCheck(t=n.t, margin=n.margin, label=f"{name}:{n.label}") for n in rep.nodes]
        partial.append(
            VerificationReport(
                check_name=rep.check_name, background=rep.background, scenario_id=rep.scenario_id,
                nodes=tuple(relabeled), tolerance=rep.tolerance, min_margin=rep.min_margin,
                status=rep.status, notes=(),
            )
        )
    nodes, tol_merged, notes = _merge_nodes("weighted_monotonicity", partial)
    min_margin = min(n.margin for n in nodes)
    status = "pass" if min_margin >= -tol_merged else "fail"
    return VerificationReport(
        check_name="weighted_monotonicity",
        background=config.background.label(),
        scenario_id=config.scenario_id,
        nodes=tuple(nodes),
        tolerance=tol_merged,
        min_margin=min_margin,
        status=status,
        notes=(f"test functions: {', '.join(sorted(funcs))}",),
    )


def _run_bochner(config: ScenarioConfig, traj: Trajectory, verbatim: bool) -> VerificationReport:
    check = verify_drift_bochner_verbatim if verbatim else verify_drift_bochner
    name = "drift_bochner_verbatim" if verbatim else "drift_bochner"
    rule = quadrature(config.background, config.resolution)
    tol = config.tolerance_for(name)
    kwargs = {"scenario_id": config.scenario_id}
    if tol is not None:
        kwargs["tolerance"] = tol
    # identity is static per field; evaluate at both ends of the run
    fields = [traj.fields[0]]
    if len(traj.fields) > 1:
        fields.append(traj.fields[-1])
    partial = [check(config.background, f, rule, **kwargs) for f in fields]
    nodes, tol_merged, notes = _merge_nodes(name, partial)
    min_margin = min(n.margin for n in nodes)
    status = "pass" if min_margin >= -tol_merged else "fail"
    return VerificationReport(
        check_name=name,
        background=config.background.label(),
        scenario_id=config.scenario_id,
        nodes=tuple(nodes),
        tolerance=tol_merged,
        min_margin=min_margin,
        status=status,
        notes=notes,
    )


def _check_runners() -> dict[str, Callable[[ScenarioConfig, Trajectory], VerificationReport]]:
    def simple(fn, name, **extra):
        def run(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
            tol = config.tolerance_for(name)
            kwargs = {"scenario_id": config.scenario_id, **extra}
            if tol is not None:
                kwargs["tolerance"] = tol
            return fn(traj, config.kappa_value, **kwargs)
        return run

    def eigen(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
        tol = config.tolerance_for("eigenvalue_monotonicity")
        kwargs = {"scenario_id": config.scenario_id}
        if tol is not None:
            kwargs["tolerance"] = tol
        return verify_eigenvalue_monotonicity(config.background, config.grid, config.kappa_value, **kwargs)

    def selfsim(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
        tol = config.tolerance_for("selfsimilar_scaling")
        kwargs = {"scenario_id": config.scenario_id, "resolution": config.resolution}
        if tol is not None:
            kwargs["tolerance"] = tol
        return verify_selfsimilar_scaling(traj, **kwargs)

    def mass(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
        tol = config.tolerance_for("quadrature_mass")
        kwargs = {"scenario_id": config.scenario_id, "resolution": config.resolution}
        if tol is not None:
            kwargs["tolerance"] = tol
        return verify_quadrature_mass(config.background, **kwargs)

    def bounds(config: ScenarioConfig, traj: Trajectory) -> VerificationReport:
        tol = config.tolerance_for("general_bounds")
        kwargs = {"scenario_id": config.scenario_id, "resolution": config.resolution}
        if tol is not None:
            kwargs["tolerance"] = tol
        return verify_general_bounds(traj, config.kappa_value, **kwargs)

    return {
        "frequency_monotonicity": simple(verify_frequency_monotonicity, "frequency_monotonicity"),
        "equality_case": simple(verify_equality_case, "equality_case"),
        "harnack": simple(verify_harnack, "harnack"),
        "harnack_printed": simple(verify_harnack_printed, "harnack_printed"),
        "weighted_monotonicity": _run_weighted,
        "drift_bochner": lambda c, t: _run_bochner(c, t, verbatim=False),
        "drift_bochner_verbatim": lambda c, t: _run_bochner(c, t, verbatim=True),
        "general_bounds": bounds,
        "general_harnack": simple(verify_general_harnack, "general_harnack"),
        "eigenvalue_monotonicity": eigen,
        "selfsimilar_scaling": selfsim,
        "quadrature_mass": mass,
    }


_RUNNERS = _check_runners()


def run_scenario(config: ScenarioConfig) -> RunOutput:
    """Evolve the configured field and execute every requested check once."""
    field = CoefficientField.from_dict(
        config.background, config.grid.a, dict(config.initial_modes)
    )
    if config.forcing is None:
        traj = evolve_exact_trajectory(field, config.grid)
    else:
        traj = evolve_forced(field, config.grid, config.forcing, local_tol=config.rk_local_tol)
    trace = trace_from_trajectory(traj, config.kappa_value)
    reports = tuple(_RUNNERS[name](config, traj) for name in config.checks)
    return RunOutput(config=config, trace=trace, reports=reports)


# ---------------------------------------------------------------------------
# emitters


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def emit_trace_csv(output: RunOutput, path: str | Path) -> None:
    """Write the frequency trace; columns exactly t, I, D, U, N_raw, cs_defect."""
    lines = ["t,I,D,U,N_raw,cs_defect"]
    for row in output.trace.rows:
        lines.append(
            ",".join(
                f"{v:.17g}" for v in (row.t, row.I, row.D, row.U, row.N_raw, row.cs_defect)
            )
        )
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def emit_report_json(output: RunOutput, path: str | Path) -> None:
    """Write the full report document (reports + provenance), sorted and stable."""
    doc = {
        "scenario_id": output.config.scenario_id,
        "provenance": output.provenance,
        "kappa_used": output.trace.kappa_used,
        "report_only": sorted(output.config.report_only),
        "reports": [r.to_dict() for r in output.reports],
    }
    _atomic_write(Path(path), json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_report_json(path: str | Path) -> tuple[dict, tuple[VerificationReport, ...]]:
    """Read back an emitted report document; returns (provenance doc, reports)."""
    doc = json.loads(Path(path).read_text())
    reports = tuple(report_from_dict(r) for r in doc["reports"])
    return doc, reports


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Render U(t) and log I(t) from a frequency trace CSV (columns t,I,D,U,N_raw,cs_defect)."""
import argparse
import csv
import math

import matplotlib.pyplot as plt

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("csv_path", nargs="?", default={csv_name!r})
parser.add_argument("--out", default=None, help="save to file instead of showing")
args = parser.parse_args()

t, big_i, big_u = [], [], []
with open(args.csv_path, newline="") as fh:
    for row in csv.DictReader(fh):
        t.append(float(row["t"]))
        big_i.append(float(row["I"]))
        big_u.append(float(row["U"]))

fig, (ax_u, ax_i) = plt.subplots(2, 1, sharex=True, figsize=(7, 7))
ax_u.plot(t, big_u, marker=".", lw=1)
ax_u.set_ylabel("U(t)")
ax_u.set_title({title!r})
log_i = [math.log(v) if v > 0 else float("nan") for v in big_i]
ax_i.plot(t, log_i, marker=".", lw=1, color="tab:orange")
ax_i.set_ylabel("log I(t)")
ax_i.set_xlabel("t")
fig.tight_layout()
if args.out:
    fig.savefig(args.out, dpi=150)
else:
    plt.show()
'''


def emit_plot_script(output: RunOutput, path: str | Path) -> None:
    """Write a standalone plotting program for the scenario's trace CSV.

    The script resolves its CSV at plot time; emitting never checks that the
    CSV exists, so traces and plots can be produced in any order.
    """
    sid = output.config.scenario_id
    text = _PLOT_TEMPLATE.format(csv_name=f"{sid}.trace.csv", title=f"{sid} ({output.config.background.label()})")
    _atomic_write(Path(path), text)
