"""Weighted L^2 functionals and the parabolic frequency.

For a spectral field u = sum_j a_j(t) phi_j (modes orthonormal in the
time-invariant unit-scale measure):

    I(t) = int u^2 dmu_t            = sum a_j^2,
    D(t) = -2 int |grad u|^2 dmu_t  = 2 int u L_t u dmu_t
                                    = -(2 / (-t)) sum mu_j a_j^2 <= 0,
    N_raw(t) = (-t) D / I           = -2 * (weighted mean of mu),
    U(t)     = (-t)^(1 + 2 kappa) D / I = (-t)^(2 kappa) N_raw.

Both I and D also have an independent quadrature route (square resp.
projected-gradient square summed against the rule weights); the two routes
must agree and the test suite enforces that, so neither path may be deleted.

The Cauchy-Schwarz defect I * int (L u)^2 - (int u L u)^2 is the exact
eigenfunction residual: defect / I = int (L u - c u)^2 dmu at the fitted
c = D / (2 I), so it vanishes iff the field is a single eigenmode (all active
mu equal) and is strictly positive for genuine mixtures.

``lambda1`` returns the smallest NONZERO drift eigenvalue divided by (-t).
Constant functions are admissible for the weighted Dirichlet quotient and
would give zero identically, making any monotonicity statement empty; the
first nonconstant eigenvalue is the quantity whose scaled version
(-t)^(1 + 2 kappa) lambda1(t) is checked to be nonincreasing.  On every
supported family the bottom nonzero unit-scale eigenvalue is 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backgrounds import Background, QuadratureRule, geometry_at, kappa
from .evolution import CoefficientField, Trajectory
from .modes import combination_gradients, combination_values, first_nonzero_eigenvalue

__all__ = [
    "ZeroFieldError",
    "compute_I",
    "compute_D",
    "compute_U",
    "compute_N_raw",
    "cauchy_schwarz_defect",
    "compute_I_quadrature",
    "compute_D_quadrature",
    "lambda1",
    "TraceRow",
    "FrequencyTrace",
    "trace_from_trajectory",
]


class ZeroFieldError(ValueError):
    """Frequency quantities are undefined on the zero field."""


def compute_I(field: CoefficientField) -> float:
    return float(np.sum(field.amplitudes**2))


def compute_D(field: CoefficientField) -> float:
    mus = np.array([m.mu for m in field.modes], dtype=float)
    return float(-(2.0 / (-field.time)) * np.sum(mus * field.amplitudes**2))


def compute_N_raw(field: CoefficientField) -> float:
    i_val = compute_I(field)
    if i_val == 0.0:
        raise ZeroFieldError("frequency undefined: zero field")
    return (-field.time) * compute_D(field) / i_val


def compute_U(field: CoefficientField, kappa_value: float | None = None) -> float:
    """Frequency (-t)^(1 + 2 kappa) D / I; kappa defaults to the background constant."""
    k = kappa(field.background) if kappa_value is None else float(kappa_value)
    return (-field.time) ** (2.0 * k) * compute_N_raw(field)


def cauchy_schwarz_defect(field: CoefficientField) -> float:
    """I * int (L_t u)^2 dmu - (int u L_t u dmu)^2 >= 0, zero iff pure mode."""
    amps = field.amplitudes
    c = np.array([-m.mu / (-field.time) for m in field.modes], dtype=float)
    sq = amps**2
    return float(np.sum(sq) * np.sum(c**2 * sq) - np.sum(c * sq) ** 2)


def compute_I_quadrature(field: CoefficientField, rule: QuadratureRule) -> float:
    """Independent route: point values squared against the rule weights."""
    if rule.background != field.background:
        raise ValueError("quadrature rule background does not match the field")
    values = combination_values(field.background, field.coeff_map, rule.points)
    return rule.integrate(values**2)


def compute_D_quadrature(field: CoefficientField, rule: QuadratureRule) -> float:
    """Independent route: -2 int |grad u|^2 dmu_t via projected ambient gradients."""
    if rule.background != field.background:
        raise ValueError("quadrature rule background does not match the field")
    grads = combination_gradients(field.background, field.coeff_map, rule.points)
    proj = np.stack([geometry_at(field.background, p).tangent_projector for p in rule.points], axis=0)
    tangential = np.einsum("nij,nj->ni", proj, grads)
    unit_scale = rule.integrate(np.sum(tangential**2, axis=1))
    return -2.0 * unit_scale / (-field.time)


def lambda1(bg: Background, t: float) -> float:
    """First nonzero Dirichlet eigenvalue of the drift Laplacian at time t."""
    if not (math.isfinite(t) and t < 0.0):
        raise ValueError(f"time must be negative, got {t!r}")
    return first_nonzero_eigenvalue(bg) / (-t)


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class TraceRow:
    t: float
    I: float
    D: float
    U: float
    N_raw: float
    cs_defect: float


@dataclass(frozen=True)
class FrequencyTrace:
    kappa_used: float
    rows: tuple[TraceRow, ...]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def times(self) -> np.ndarray:
        return self.column("t")


def trace_from_trajectory(traj: Trajectory, kappa_value: float | None = None) -> FrequencyTrace:
    """Tabulate the functionals along a trajectory.

    Zero-field nodes keep I = D = cs_defect = 0 but carry U = N_raw = nan;
    verifiers treat such trajectories as inapplicable rather than failing.
    """
    k = kappa(traj.background) if kappa_value is None else float(kappa_value)
    rows = []
    for f in traj.fields:
        i_val = compute_I(f)
        if i_val == 0.0:
            rows.append(TraceRow(f.time, 0.0, 0.0, math.nan, math.nan, 0.0))
            continue
        d_val = compute_D(f)
        n_raw = (-f.time) * d_val / i_val
        u_val = (-f.time) ** (2.0 * k) * n_raw
        rows.append(TraceRow(f.time, i_val, d_val, u_val, n_raw, cauchy_schwarz_defect(f)))
    return FrequencyTrace(k, tuple(rows))
