"""Linear evolution of ellipsoids and saddle-plane shadow areas.

The quadratic normal form has an exact state-transition matrix: a hyperbolic
block on the reactive pair ``(Q_1, P_1)`` and a rotation per bath mode.  A
round ball of radius r, skewed by a symplectic mixer and evolved backward in
time, casts a shadow on the saddle plane whose area ``A(tau)`` can touch but
never cross the ball capacity ``pi r^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bottleneck import candidate_width
from .errors import DimensionError, PreconditionError
from .linalg import ellipsoid_capacity, is_symplectic, random_symplectic
from .models import QuadraticSaddleModel
from .tables import ExperimentReport

__all__ = [
    "ProjectionAreaCurve",
    "stm",
    "projection_area",
    "min_projection_area",
    "evolved_shape_matrix",
    "default_tau_grid",
    "area_curve",
    "radius_scan",
    "capacity_after_evolution",
]

MIXER_TOL = 1e-10
DET_FLOOR = -1e-12
DEFAULT_TAU_POINTS = 600
DEFAULT_SIGMA = 0.5


@dataclass(frozen=True)
class ProjectionAreaCurve:
    """Shadow areas A(tau) over a time grid, with the ball capacity for scale."""

    r: float
    taus: np.ndarray
    areas: np.ndarray
    min_area: float
    gromov_scale: float


def stm(model: QuadraticSaddleModel, t: float) -> np.ndarray:
    """State-transition matrix of the quadratic normal form at time t.

    Saddle block ``[[cosh lt, sinh lt], [sinh lt, cosh lt]]`` on (Q_1, P_1),
    rotation ``[[cos wt, sin wt], [-sin wt, cos wt]]`` on each bath pair,
    assembled in the global ``(q..., p...)`` ordering.
    """
    n = model.n_dof
    phi = np.zeros((2 * n, 2 * n))
    lt = model.lam * t
    phi[0, 0] = math.cosh(lt)
    phi[0, n] = math.sinh(lt)
    phi[n, 0] = math.sinh(lt)
    phi[n, n] = math.cosh(lt)
    for i, omega in enumerate(model.omegas, start=1):
        wt = omega * t
        c, s = math.cos(wt), math.sin(wt)
        phi[i, i] = c
        phi[i, n + i] = s
        phi[n + i, i] = -s
        phi[n + i, n + i] = c
    return phi


def _check_mixer(model: QuadraticSaddleModel, s_mix) -> np.ndarray:
    s_mix = np.asarray(s_mix, dtype=float)
    n = model.n_dof
    if s_mix.shape != (2 * n, 2 * n):
        raise DimensionError(
            f"mixer shape {s_mix.shape} does not match the model dimension {2 * n}"
        )
    if not is_symplectic(s_mix, MIXER_TOL):
        raise PreconditionError(
            f"mixing matrix is not symplectic at tolerance {MIXER_TOL:.0e}"
        )
    return s_mix


def projection_area(model: QuadraticSaddleModel, r: float, s_mix, tau: float) -> float:
    """Saddle-plane shadow area of the mixed ball evolved backward to time tau.

    ``A(tau) = pi r^2 sqrt(det(P Phi(-tau) S S^T Phi(-tau)^T P^T))`` where P
    selects the (Q_1, P_1) rows.  The 2x2 determinant is clipped at zero;
    values below -1e-12 raise, since the Gram matrix cannot be that negative.
    """
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    s_mix = _check_mixer(model, s_mix)
    n = model.n_dof
    phi = stm(model, -tau)
    g = (phi @ s_mix)[[0, n], :]
    c = g @ g.T
    det = c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]
    if det < DET_FLOOR:
        raise PreconditionError(
            f"projected Gram determinant {det:.3e} is negative beyond {DET_FLOOR:.0e}"
        )
    return math.pi * r * r * math.sqrt(max(det, 0.0))


def min_projection_area(model: QuadraticSaddleModel, r: float, s_mix, tau_grid) -> ProjectionAreaCurve:
    """Evaluate A(tau) on a sorted grid and record the full curve and its minimum."""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise ValueError("tau grid must be nonempty")
    if np.any(np.diff(taus) < 0):
        raise ValueError("tau grid must be sorted ascending")
    areas = np.array([projection_area(model, r, s_mix, t) for t in taus])
    return ProjectionAreaCurve(
        r=float(r),
        taus=taus,
        areas=areas,
        min_area=float(areas.min()),
        gromov_scale=math.pi * r * r,
    )


def evolved_shape_matrix(model: QuadraticSaddleModel, r: float, s_mix, tau: float) -> np.ndarray:
    """Shape matrix of the evolved ellipsoid ``Phi(-tau) S_mix B(r)``.

    Returns the symmetric PD matrix M with the evolved set equal to
    ``{z : z^T M z <= 1}``; its capacity stays ``pi r^2``.
    """
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    s_mix = _check_mixer(model, s_mix)
    t = stm(model, -tau) @ s_mix
    m = np.linalg.inv(r * r * (t @ t.T))
    return 0.5 * (m + m.T)


def default_tau_grid(model: QuadraticSaddleModel, points: int = DEFAULT_TAU_POINTS) -> np.ndarray:
    """Uniform grid of ``points`` times on [0, 3/lambda] (a few e-foldings)."""
    if points < 1:
        raise ValueError(f"need at least one grid point, got {points}")
    return np.linspace(0.0, 3.0 / model.lam, points)


def area_curve(model: QuadraticSaddleModel, r: float, s_mix, tau_grid,
               extra_meta: dict | None = None) -> ExperimentReport:
    """A(tau) curve as a (tau, area) table."""
    curve = min_projection_area(model, r, s_mix, tau_grid)
    meta = {"r": float(r), "min_area": curve.min_area, "gromov_scale": curve.gromov_scale}
    if extra_meta:
        meta.update(extra_meta)
    rows = [(float(t), float(a)) for t, a in zip(curve.taus, curve.areas)]
    return ExperimentReport(columns=("tau", "area"), rows=rows, meta=meta)


def radius_scan(model: QuadraticSaddleModel, radii, s_mix_seed: int, tau_grid=None,
                sigma: float = DEFAULT_SIGMA, e_ref: float = 0.0,
                extra_meta: dict | None = None) -> ExperimentReport:
    """Minimum shadow area against the ball capacity for a range of radii.

    One random mixer is drawn from ``s_mix_seed`` and shared by all radii.
    The reference column is the candidate width at the central energy
    ``e_ref``, the dashed comparison level of the infimum-scaling figure.
    """
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("need at least one radius")
    if any(r <= 0 for r in radii):
        raise ValueError(f"radii must be positive, got {radii}")
    if tau_grid is None:
        tau_grid = default_tau_grid(model)
    s_mix = random_symplectic(model.n_dof, sigma, s_mix_seed)
    c_ref = candidate_width(model, e_ref).c_cand
    rows = []
    for r in radii:
        curve = min_projection_area(model, r, s_mix, tau_grid)
        rows.append((r, curve.min_area, curve.gromov_scale, c_ref))
    meta = {
        "s_mix_seed": int(s_mix_seed),
        "sigma": float(sigma),
        "e_ref": float(e_ref),
        "tau_points": int(len(np.asarray(tau_grid))),
        "tau_max": float(np.asarray(tau_grid)[-1]),
        "lam": model.lam,
        "omegas": list(model.omegas),
        "e0": model.e0,
    }
    if extra_meta:
        meta.update(extra_meta)
    return ExperimentReport(
        columns=("r", "min_area", "pi_r2", "c_cand_ref"), rows=rows, meta=meta
    )


def capacity_after_evolution(model: QuadraticSaddleModel, r: float, s_mix, tau: float) -> float:
    """Capacity of the evolved ellipsoid (invariantly ``pi r^2``)."""
    return ellipsoid_capacity(evolved_shape_matrix(model, r, s_mix, tau))
