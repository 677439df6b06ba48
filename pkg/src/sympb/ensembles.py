"""Finite-time transmission experiments on the truncated normal form.

Ensemble A samples bath actions uniformly over the admissible interval;
Ensemble B pushes them toward the maximal action with a localization
parameter xi.  Each initial condition starts in the forward-reactive
half-space (Q_1 < 0 < P_1) at an energy drawn from a narrow window, and is
transmitted when the closed-form reactive coordinate Q_1(t) has crossed zero
by t_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bottleneck import j_max_cnf
from .errors import BelowSaddleError, SamplingError
from .models import CnfModel, effective_lyapunov, eval_cnf
from .tables import ExperimentReport

__all__ = [
    "EnsembleSpec",
    "InitialCondition",
    "TransmissionResult",
    "sample_ensemble",
    "transmit",
    "transmission_fraction",
    "transmission_scan",
    "default_t_max",
    "default_delta_e",
    "scan_report",
]

# Q_1 is drawn from [-q1_range, -Q1_DELTA]: strictly negative.
Q1_DELTA = 1e-9
# |I'| at or below this relative level is snapped to zero, so boundary cases
# (xi = 1 with zero energy spread) survive root-finder rounding exactly.
I_CLAMP_RTOL = 1e-12
# Per-point cap on bath-action redraws; the documented rejection-rate limit.
MAX_REDRAWS = 100


@dataclass(frozen=True)
class EnsembleSpec:
    """Sampling parameters for one ensemble."""

    n_traj: int
    e_center: float
    delta_e: float
    seed: int
    xi: float = 0.0
    q1_range: float = 1.0

    def __post_init__(self):
        if self.n_traj < 1:
            raise ValueError(f"n_traj must be >= 1, got {self.n_traj}")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError(f"xi must lie in [0, 1], got {self.xi}")
        if self.delta_e < 0:
            raise ValueError(f"delta_e must be >= 0, got {self.delta_e}")
        if self.q1_range <= 0:
            raise ValueError(f"q1_range must be > 0, got {self.q1_range}")


@dataclass(frozen=True)
class InitialCondition:
    """Phase-space point in rotated normal-form coordinates."""

    q1: float
    p1: float
    j: tuple
    phases: tuple
    energy: float

    def __post_init__(self):
        if not (self.q1 < 0.0 < self.p1):
            raise ValueError(
                f"initial conditions live in the forward-reactive half-space "
                f"Q1 < 0 < P1, got Q1 = {self.q1}, P1 = {self.p1}"
            )


@dataclass(frozen=True)
class TransmissionResult:
    xi: float
    fraction: float
    n_transmitted: int
    n_total: int
    t_max: float
    kind: str = "B"


def default_t_max(model: CnfModel) -> float:
    """Observation horizon 5/lambda."""
    return 5.0 / model.lam


def default_delta_e(model: CnfModel, e_center: float) -> float:
    """Default half-width of the energy window: 1% of the excess energy."""
    return 0.01 * (e_center - model.e0)


def _solve_reactive_integral(model: CnfModel, e_target: float, j: np.ndarray) -> float:
    """Solve K(I, J) = e_target for I at fixed bath actions.

    The linear-in-I estimate is exact for the built-in truncations; a short
    Newton polish handles coefficient tables with higher I powers.
    """
    lam_j = effective_lyapunov(model, j)
    i_val = (e_target - eval_cnf(model, 0.0, j)) / lam_j
    if any(ip > 1 for ip, _, _ in model.terms):
        for _ in range(50):
            f = eval_cnf(model, i_val, j) - e_target
            if abs(f) <= 1e-14 * max(abs(e_target), 1.0):
                break
            df = _dk_di(model, i_val, j)
            if df == 0.0:
                break
            i_val -= f / df
    return i_val


def _dk_di(model: CnfModel, i: float, j: np.ndarray) -> float:
    total = 0.0
    for i_pow, j_pows, coeff in model.terms:
        if i_pow < 1:
            continue
        v = coeff * i_pow
        for _ in range(i_pow - 1):
            v *= i
        for k, p in enumerate(j_pows):
            for _ in range(p):
                v *= j[k]
        total += v
    return total


def sample_ensemble(model: CnfModel, spec: EnsembleSpec, kind: str) -> list:
    """Draw ``spec.n_traj`` initial conditions of the given kind ("A" or "B").

    Per point, in order: energy E' uniform in the window; J_2 uniform in
    [0, J2max(E')] for kind A or [xi*J2max(E'), J2max(E')] for kind B (any
    higher bath actions are zero); bath phases uniform in [0, 2pi); the
    reaction integral I' solved from K(I', J) = E'; Q_1 uniform in
    [-q1_range, -1e-9] and P_1 = +sqrt(Q_1^2 + 2 I').  Draws with I' < 0
    redraw J_2.  Each point has its own seed substream, so results do not
    depend on evaluation order.
    """
    if kind not in ("A", "B"):
        raise ValueError(f"ensemble kind must be 'A' or 'B', got {kind!r}")
    e_lo = spec.e_center - spec.delta_e
    e_hi = spec.e_center + spec.delta_e
    if e_lo <= model.e0:
        raise BelowSaddleError(
            f"energy window [{e_lo}, {e_hi}] reaches the saddle energy e0 = {model.e0}"
        )
    nb = model.n_bath
    out = []
    children = np.random.SeedSequence(spec.seed).spawn(spec.n_traj)
    for child in children:
        rng = np.random.default_rng(child)
        e_point = rng.uniform(e_lo, e_hi)
        j2max = j_max_cnf(model, e_point, 2)
        lo = spec.xi * j2max if kind == "B" else 0.0
        j = np.zeros(nb)
        for _ in range(MAX_REDRAWS + 1):
            j[0] = rng.uniform(lo, j2max)
            i_val = _solve_reactive_integral(model, e_point, j)
            if abs(i_val) <= I_CLAMP_RTOL * max(abs(e_point), 1.0):
                i_val = 0.0
            if i_val >= 0.0:
                break
        else:
            raise SamplingError(
                f"rejection rate above 99%: I' < 0 for {MAX_REDRAWS + 1} "
                f"consecutive bath-action draws at E' = {e_point}"
            )
        phases = tuple(rng.uniform(0.0, 2.0 * math.pi) for _ in range(nb))
        q1 = rng.uniform(-spec.q1_range, -Q1_DELTA)
        p1 = math.sqrt(q1 * q1 + 2.0 * i_val)
        out.append(
            InitialCondition(q1=q1, p1=p1, j=tuple(j), phases=phases, energy=e_point)
        )
    return out


def transmit(model: CnfModel, ic: InitialCondition, t_max: float) -> bool:
    """True iff ``Q_1 cosh(L t_max) + P_1 sinh(L t_max) > 0`` with L = Lambda(J)."""
    lam_j = effective_lyapunov(model, np.asarray(ic.j))
    lt = lam_j * t_max
    if lt > 350.0:
        # cosh/sinh overflow; in this regime coth(lt) is 1 to machine precision.
        return ic.p1 + ic.q1 > 0.0
    return ic.q1 * math.cosh(lt) + ic.p1 * math.sinh(lt) > 0.0


def transmission_fraction(model: CnfModel, ics, t_max: float, xi: float = float("nan"),
                          kind: str = "B") -> TransmissionResult:
    """Count transmitted points of a sampled ensemble."""
    n = len(ics)
    if n == 0:
        raise ValueError("ensemble is empty")
    n_trans = sum(1 for ic in ics if transmit(model, ic, t_max))
    return TransmissionResult(
        xi=xi, fraction=n_trans / n, n_transmitted=n_trans, n_total=n,
        t_max=float(t_max), kind=kind,
    )


def transmission_scan(model: CnfModel, spec_base: EnsembleSpec, xis,
                      t_max: float | None = None) -> list:
    """Ensemble A baseline plus an Ensemble B sweep over xi values.

    Every ensemble reuses ``spec_base.seed``, so the B results share their
    random draws across xi (common random numbers).  Returns the baseline
    first (kind "A", xi = nan), then one result per xi in the given order.
    """
    xis = [float(x) for x in xis]
    if any(not 0.0 <= x <= 1.0 for x in xis):
        raise ValueError(f"xi values must lie in [0, 1], got {xis}")
    if t_max is None:
        t_max = default_t_max(model)
    ics_a = sample_ensemble(model, replace(spec_base, xi=0.0), "A")
    results = [transmission_fraction(model, ics_a, t_max, kind="A")]
    for xi in xis:
        ics_b = sample_ensemble(model, replace(spec_base, xi=xi), "B")
        results.append(transmission_fraction(model, ics_b, t_max, xi=xi, kind="B"))
    return results


def scan_report(model: CnfModel, spec_base: EnsembleSpec, xis,
                t_max: float | None = None, extra_meta: dict | None = None) -> ExperimentReport:
    """Transmission scan as a CSV-ready table (baseline row flagged kind=A)."""
    if t_max is None:
        t_max = default_t_max(model)
    results = transmission_scan(model, spec_base, xis, t_max)
    rows = [
        (res.kind, res.xi, res.fraction, res.n_transmitted, res.n_total,
         res.t_max, spec_base.seed)
        for res in results
    ]
    meta = {
        "n_traj": spec_base.n_traj,
        "e_center": spec_base.e_center,
        "delta_e": spec_base.delta_e,
        "q1_range": spec_base.q1_range,
        "seed": spec_base.seed,
        "t_max": float(t_max),
        "xis": [float(x) for x in xis],
        "model_e0": model.e0,
        "model_terms": [[ip, list(jp), c] for ip, jp, c in model.terms],
    }
    if extra_meta:
        meta.update(extra_meta)
    return ExperimentReport(
        columns=("kind", "xi", "fraction", "n_transmitted", "n_total", "t_max", "seed"),
        rows=rows,
        meta=meta,
    )
