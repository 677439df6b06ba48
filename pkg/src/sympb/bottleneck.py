"""Bottleneck width and flux diagnostics.

On the dividing surface the admissible bath actions form the region
``{J >= 0 : K(0, J) <= E}``.  This module computes per-mode maximal actions
``J_k_max(E)``, the candidate transverse width ``c_cand = 2 pi min_k J_k_max``,
the action-space volume (exactly for quadratic models, by seeded Monte Carlo
for polynomial ones), and the directional flux ``phi = (2 pi)^(n-1) V``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import BelowSaddleError, DimensionError, RootBracketError
from .models import CnfModel, QuadraticSaddleModel, eval_cnf
from .tables import ExperimentReport

__all__ = [
    "WidthReport",
    "FluxReport",
    "j_max_quadratic",
    "j_max_cnf",
    "candidate_width",
    "action_volume_mc",
    "flux_quadratic_exact",
    "energy_scan",
]

# Root bracketing for j_max_cnf.
BRACKET_CAP = 1e12
ROOT_RTOL = 1e-12

# Monte-Carlo chunk size; chunk i draws from substream i of the seed, so the
# totals do not depend on how chunks would be scheduled across workers.
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class WidthReport:
    """Maximal bath actions and the candidate width at one energy."""

    e: float
    j_max: tuple
    c_cand: float
    limiting_mode: int


@dataclass(frozen=True)
class FluxReport:
    """Action-space volume and directional flux at one energy."""

    e: float
    volume: float
    flux: float
    mc_samples: int
    std_error: float
    seed: int | None = None


def _check_mode(model, k: int) -> int:
    """Validate a mode index (paper numbering: bath modes are 2..n)."""
    nb = model.n_bath
    if not 2 <= k <= nb + 1:
        raise DimensionError(
            f"mode index k must be in [2, {nb + 1}] for this model, got {k}"
        )
    return k - 2


def j_max_quadratic(model: QuadraticSaddleModel, e: float, k: int) -> float:
    """Maximal action of mode k at energy e: ``(e - e0) / omega_k``."""
    idx = _check_mode(model, k)
    if e <= model.e0:
        raise BelowSaddleError(f"E = {e} is not above the saddle energy e0 = {model.e0}")
    return (e - model.e0) / model.omegas[idx]


def j_max_cnf(model: CnfModel, e: float, k: int) -> float:
    """Smallest positive root of ``K(0, ..., J_k, ...) = e`` (other J zero).

    Bracketing starts from the linear estimate ``(e - e0) / omega_k`` and
    doubles the upper bound until the sign changes (cap 1e12), then the root
    is refined by Brent's method to relative tolerance 1e-12.
    """
    idx = _check_mode(model, k)
    if e <= model.e0:
        raise BelowSaddleError(f"E = {e} is not above the saddle energy e0 = {model.e0}")
    nb = model.n_bath

    def f(jk: float) -> float:
        j = np.zeros(nb)
        j[idx] = jk
        return eval_cnf(model, 0.0, j) - e

    lo = 0.0
    hi = (e - model.e0) / model.omegas[idx]
    flo = f(lo)
    fhi = f(hi)
    while fhi < 0.0:
        lo, flo = hi, fhi
        hi *= 2.0
        if hi > BRACKET_CAP:
            raise RootBracketError(
                f"no positive root of K(0, J_{k}) = {e} below {BRACKET_CAP:.0e}"
            )
        fhi = f(hi)
    if fhi == 0.0:
        return hi
    if flo == 0.0:
        return lo
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=ROOT_RTOL))


def candidate_width(model, e: float) -> WidthReport:
    """Candidate transverse width ``2 pi min_k J_k_max(e)`` with the limiting
    mode index (ties resolved to the lowest mode)."""
    if isinstance(model, CnfModel):
        j_max_op = j_max_cnf
    elif isinstance(model, QuadraticSaddleModel):
        j_max_op = j_max_quadratic
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    nb = model.n_bath
    if nb < 1:
        raise DimensionError("candidate width needs at least one bath mode")
    j_max = tuple(j_max_op(model, e, k) for k in range(2, nb + 2))
    arg = int(np.argmin(j_max))
    return WidthReport(
        e=float(e),
        j_max=j_max,
        c_cand=2.0 * math.pi * j_max[arg],
        limiting_mode=2 + arg,
    )


def _zero_i_terms(model: CnfModel):
    """Coefficient table of K(0, J): terms whose I-power is zero."""
    keep = [(jp, c) for ip, jp, c in model.terms if ip == 0]
    j_pows = np.array([jp for jp, _ in keep], dtype=np.int64).reshape(len(keep), model.n_bath)
    coeffs = np.array([c for _, c in keep], dtype=np.float64)
    return j_pows, coeffs


def action_volume_mc(model: CnfModel, e: float, samples: int, seed: int) -> FluxReport:
    """Monte-Carlo action-space volume and flux at energy e.

    Samples uniformly over the bounding box ``prod_k [0, J_k_max(e)]`` and
    counts points with ``K(0, J) <= e``.  ``std_error`` is the binomial
    standard error of the volume estimate, ``box_volume *
    sqrt(p(1-p)/samples)``.  Deterministic per seed, independent of chunking.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if model.n_bath < 1:
        raise DimensionError("need at least one bath mode")
    if e < model.e0:
        raise BelowSaddleError(f"E = {e} is below the saddle energy e0 = {model.e0}")
    if e == model.e0:
        return FluxReport(e=float(e), volume=0.0, flux=0.0, mc_samples=int(samples),
                          std_error=0.0, seed=int(seed))
    nb = model.n_bath
    box = np.array([j_max_cnf(model, e, k) for k in range(2, nb + 2)])
    box_volume = float(np.prod(box))
    j_pows, coeffs = _zero_i_terms(model)

    n_chunks = (samples + MC_CHUNK - 1) // MC_CHUNK
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    remaining = samples
    for child in children:
        m = min(MC_CHUNK, remaining)
        rng = np.random.default_rng(child)
        js = rng.uniform(0.0, box, size=(m, nb))
        hits += kernels.count_box_hits(js, j_pows, coeffs, e)
        remaining -= m
    p_hat = hits / samples
    volume = box_volume * p_hat
    std_error = box_volume * math.sqrt(p_hat * (1.0 - p_hat) / samples)
    flux = (2.0 * math.pi) ** nb * volume
    return FluxReport(e=float(e), volume=volume, flux=flux, mc_samples=int(samples),
                      std_error=std_error, seed=int(seed))


def flux_quadratic_exact(model: QuadraticSaddleModel, e: float) -> FluxReport:
    """Exact simplex volume and flux for a quadratic model.

    ``V = (e - e0)^(n-1) / ((n-1)! prod_k omega_k)`` and
    ``phi = (2 pi)^(n-1) V``.
    """
    nb = model.n_bath
    if nb < 1:
        raise DimensionError("need at least one bath mode")
    if e < model.e0:
        raise BelowSaddleError(f"E = {e} is below the saddle energy e0 = {model.e0}")
    de = e - model.e0
    volume = de**nb / (math.factorial(nb) * float(np.prod(model.omegas)))
    return FluxReport(e=float(e), volume=volume, flux=(2.0 * math.pi) ** nb * volume,
                      mc_samples=0, std_error=0.0)


def energy_scan(model: CnfModel, e_min: float, e_max: float, steps: int,
                samples: int, seed: int, extra_meta: dict | None = None) -> ExperimentReport:
    """Width and flux table over a uniform energy grid.

    Row i uses seed ``seed + i`` for its Monte-Carlo volume, recorded in the
    seed column, so any row can be reproduced in isolation.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if e_max < e_min:
        raise ValueError(f"e_max = {e_max} is below e_min = {e_min}")
    energies = np.linspace(e_min, e_max, steps) if steps > 1 else np.array([e_min])
    nb = model.n_bath
    columns = (
        ["E"]
        + [f"J_max_{k}" for k in range(2, nb + 2)]
        + ["c_cand", "limiting_mode", "V", "phi", "std_error", "seed"]
    )
    rows = []
    for i, e in enumerate(energies):
        width = candidate_width(model, float(e))
        row_seed = seed + i
        flux = action_volume_mc(model, float(e), samples, row_seed)
        rows.append(
            (width.e, *width.j_max, width.c_cand, width.limiting_mode,
             flux.volume, flux.flux, flux.std_error, row_seed)
        )
    meta = {
        "e_min": float(e_min),
        "e_max": float(e_max),
        "steps": int(steps),
        "samples": int(samples),
        "seed": int(seed),
        "model_e0": model.e0,
        "model_terms": [[ip, list(jp), c] for ip, jp, c in model.terms],
    }
    if extra_meta:
        meta.update(extra_meta)
    return ExperimentReport(columns=tuple(columns), rows=rows, meta=meta)
