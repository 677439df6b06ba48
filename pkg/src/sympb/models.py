"""Model definitions.

Two families describe dynamics near an index-1 saddle:

* quadratic / polynomial normal forms in the action-like variables
  ``(I, J_2, ..., J_n)``, where ``I`` is the reactive integral and the ``J_k``
  are bath actions, and
* the Eckart-Morse(-Morse) Hamiltonian in physical coordinates, used for
  direct trajectory integration.

The built-in polynomial coefficients are the truncated normal form of the
2 and 3 degree-of-freedom Eckart-Morse(-Morse) systems at the default
parameters below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DimensionError, LyapunovSignError

__all__ = [
    "QuadraticSaddleModel",
    "CnfModel",
    "eval_cnf",
    "effective_lyapunov",
    "builtin_cnf",
    "builtin_eckart_morse_2dof",
    "builtin_eckart_morse_morse_3dof",
    "builtin_quadratic",
    "load_cnf_model",
    "cnf_from_obj",
    "EckartMorseParams",
    "default_params",
    "load_params",
    "eckart_potential",
    "morse_potential",
    "potential",
    "grad_potential",
    "kinetic_energy",
    "velocities",
    "full_hamiltonian",
    "barrier_x",
]

# Truncated normal-form coefficients of the built-in saddle.
E0_BUILTIN = -0.9875
LAMBDA_BUILTIN = 0.7350
OMEGA2_BUILTIN = 1.8225
B2_BUILTIN = -0.0123
OMEGA3_BUILTIN = 1.267


@dataclass(frozen=True)
class QuadraticSaddleModel:
    """Quadratic saddle-center normal form.

    ``H = e0 + lam*I + sum_k omegas[k]*J_k`` with one unstable direction of
    rate ``lam`` and one center per bath frequency.
    """

    lam: float
    omegas: tuple
    e0: float

    def __post_init__(self):
        object.__setattr__(self, "omegas", tuple(float(w) for w in self.omegas))
        if self.lam <= 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if any(w <= 0 for w in self.omegas):
            raise ValueError(f"bath frequencies must be > 0, got {self.omegas}")

    @property
    def n_dof(self) -> int:
        return 1 + len(self.omegas)

    @property
    def n_bath(self) -> int:
        return len(self.omegas)


@dataclass(frozen=True)
class CnfModel:
    """Polynomial normal form ``K(I, J_2, ..., J_n)``.

    ``terms`` is a tuple of ``(i_power, j_powers, coeff)`` entries; the value
    of the model is ``sum coeff * I**i_power * prod J_k**j_powers[k]``.
    Required structure: a constant term equal to ``e0``, a pure-I linear term
    with positive coefficient (the saddle rate), and a positive linear term in
    each bath action (the bath frequencies).
    """

    e0: float
    terms: tuple

    def __post_init__(self):
        norm = []
        for t in self.terms:
            i_pow, j_pows, coeff = t
            norm.append((int(i_pow), tuple(int(p) for p in j_pows), float(coeff)))
        object.__setattr__(self, "terms", tuple(norm))
        if not self.terms:
            raise ValueError("CnfModel needs at least one term")
        nb = len(self.terms[0][1])
        if nb < 1:
            raise ValueError("CnfModel needs at least one bath action")
        for i_pow, j_pows, _ in self.terms:
            if len(j_pows) != nb:
                raise DimensionError(
                    f"inconsistent bath arity: expected {nb}, got {len(j_pows)}"
                )
            if i_pow < 0 or any(p < 0 for p in j_pows):
                raise ValueError("powers must be nonnegative")
        zero = (0,) * nb
        const = self.coefficient(0, zero)
        if const != self.e0:
            raise ValueError(
                f"constant term {const!r} must equal e0 = {self.e0!r}"
            )
        if self.coefficient(1, zero) <= 0:
            raise ValueError("linear I coefficient (saddle rate) must be > 0")
        for k in range(nb):
            unit = tuple(1 if i == k else 0 for i in range(nb))
            if self.coefficient(0, unit) <= 0:
                raise ValueError(f"linear coefficient of J_{k + 2} must be > 0")

    @property
    def n_bath(self) -> int:
        return len(self.terms[0][1])

    @property
    def n_dof(self) -> int:
        return 1 + self.n_bath

    @property
    def lam(self) -> float:
        """Saddle rate: coefficient of the pure linear I term."""
        return self.coefficient(1, (0,) * self.n_bath)

    @property
    def omegas(self) -> tuple:
        """Bath frequencies: coefficients of the pure linear J_k terms."""
        nb = self.n_bath
        return tuple(
            self.coefficient(0, tuple(1 if i == k else 0 for i in range(nb)))
            for k in range(nb)
        )

    def coefficient(self, i_power: int, j_powers) -> float:
        """Stored coefficient of the monomial I**i_power * prod J**j_powers
        (0.0 when absent)."""
        key = (int(i_power), tuple(int(p) for p in j_powers))
        total = 0.0
        for i_pow, j_pows, coeff in self.terms:
            if (i_pow, j_pows) == key:
                total += coeff
        return total


def eval_cnf(model: CnfModel, i: float, j) -> float:
    """Evaluate ``K(I, J)`` for a CnfModel.

    Parameters
    ----------
    model : CnfModel
    i : float
        Reactive integral value.
    j : array_like
        Bath actions, length ``model.n_bath``.
    """
    j = np.asarray(j, dtype=float)
    if j.shape != (model.n_bath,):
        raise DimensionError(
            f"expected {model.n_bath} bath actions, got shape {j.shape}"
        )
    i = float(i)
    total = 0.0
    for i_pow, j_pows, coeff in model.terms:
        v = coeff
        for _ in range(i_pow):
            v *= i
        for k, p in enumerate(j_pows):
            for _ in range(p):
                v *= j[k]
        total += v
    return total


def effective_lyapunov(model: CnfModel, j) -> float:
    """Action-dependent unstable rate ``Lambda(J) = dK/dI at I = 0``.

    Raises
    ------
    LyapunovSignError
        If the rate is not positive at the given bath actions.
    """
    j = np.asarray(j, dtype=float)
    if j.shape != (model.n_bath,):
        raise DimensionError(
            f"expected {model.n_bath} bath actions, got shape {j.shape}"
        )
    total = 0.0
    for i_pow, j_pows, coeff in model.terms:
        if i_pow != 1:
            continue
        v = coeff
        for k, p in enumerate(j_pows):
            for _ in range(p):
                v *= j[k]
        total += v
    if total <= 0.0:
        raise LyapunovSignError(
            f"effective rate Lambda(J) = {total:.6e} is not positive at J = {j.tolist()}"
        )
    return total


def builtin_cnf(n_dof: int = 2) -> CnfModel:
    """Built-in truncated normal form (2 or 3 degrees of freedom)."""
    if n_dof == 2:
        terms = (
            (0, (0,), E0_BUILTIN),
            (1, (0,), LAMBDA_BUILTIN),
            (0, (1,), OMEGA2_BUILTIN),
            (1, (1,), B2_BUILTIN),
        )
        return CnfModel(e0=E0_BUILTIN, terms=terms)
    if n_dof == 3:
        terms = (
            (0, (0, 0), E0_BUILTIN),
            (1, (0, 0), LAMBDA_BUILTIN),
            (0, (1, 0), OMEGA2_BUILTIN),
            (0, (0, 1), OMEGA3_BUILTIN),
            (1, (1, 0), B2_BUILTIN),
        )
        return CnfModel(e0=E0_BUILTIN, terms=terms)
    raise DimensionError(f"built-in models exist for 2 or 3 dof, got {n_dof}")


def builtin_eckart_morse_2dof() -> CnfModel:
    """Truncated normal form of the 2-DoF Eckart-Morse system."""
    return builtin_cnf(2)


def builtin_eckart_morse_morse_3dof() -> CnfModel:
    """Truncated normal form of the 3-DoF Eckart-Morse-Morse system."""
    return builtin_cnf(3)


def builtin_quadratic(n_dof: int = 2) -> QuadraticSaddleModel:
    """Quadratic part of the built-in normal form."""
    if n_dof == 2:
        return QuadraticSaddleModel(LAMBDA_BUILTIN, (OMEGA2_BUILTIN,), E0_BUILTIN)
    if n_dof == 3:
        return QuadraticSaddleModel(
            LAMBDA_BUILTIN, (OMEGA2_BUILTIN, OMEGA3_BUILTIN), E0_BUILTIN
        )
    raise DimensionError(f"built-in models exist for 2 or 3 dof, got {n_dof}")


def cnf_from_obj(obj) -> CnfModel:
    """Build a CnfModel from parsed JSON.

    Accepts either ``{"e0": x, "terms": [{"i": .., "j": [..], "c": ..}, ...]}``
    or a flat list of term objects with one ``{"e0": x}`` entry.  A missing
    constant term is filled in from ``e0``.
    """
    if isinstance(obj, dict):
        e0 = obj["e0"]
        raw_terms = obj["terms"]
    else:
        e0 = None
        raw_terms = []
        for entry in obj:
            if "e0" in entry and "c" not in entry:
                e0 = entry["e0"]
            else:
                raw_terms.append(entry)
        if e0 is None:
            raise ValueError("model list is missing an {'e0': ...} entry")
    terms = [(int(t["i"]), tuple(int(p) for p in t["j"]), float(t["c"])) for t in raw_terms]
    if terms:
        nb = len(terms[0][1])
        zero = (0,) * nb
        if not any(i == 0 and j == zero for i, j, _ in terms):
            terms.append((0, zero, float(e0)))
    return CnfModel(e0=float(e0), terms=tuple(terms))


def load_cnf_model(path: str) -> CnfModel:
    with open(path) as fh:
        return cnf_from_obj(json.load(fh))


# ---------------------------------------------------------------------------
# Eckart-Morse(-Morse) Hamiltonian
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EckartMorseParams:
    """Parameters of the Eckart-Morse(-Morse) Hamiltonian.

    The reactive coordinate x moves across an Eckart barrier (asymmetry ``A``,
    scale ``B``, length ``a``, offset ``x0``); each bath coordinate sits in a
    Morse well (depth ``De``, range ``aM``); ``eps`` couples all momentum
    pairs through the kinetic energy.
    """

    m: float = 1.0
    eps: float = 0.3
    A: float = -0.5
    B: float = 2.0
    a: float = 1.0
    x0: float = 0.0
    De: float = 1.0
    aM: float = 1.0

    def __post_init__(self):
        if self.m <= 0 or self.a <= 0 or self.De <= 0 or self.aM <= 0:
            raise ValueError("m, a, De, aM must all be > 0")
        if self.B <= 0:
            raise ValueError(f"barrier scale B must be > 0, got {self.B}")


def barrier_x(p: EckartMorseParams) -> float:
    """Location of the Eckart barrier maximum, from dV/dx = 0.

    The stationary point sits at logistic argument u* = (A + B) / (2B), which
    requires ``B > |A|``.
    """
    if p.B <= abs(p.A):
        raise ValueError("no interior barrier maximum unless B > |A|")
    u_star = (p.A + p.B) / (2.0 * p.B)
    return p.a * math.log(u_star / (1.0 - u_star)) - p.x0


def default_params() -> EckartMorseParams:
    """Built-in parameter set, with x0 chosen to center the barrier at x = 0."""
    base = EckartMorseParams(x0=0.0)
    # barrier_x(p) = a*logit(u*) - p.x0, so x0 = a*logit(u*) puts the top at 0.
    return EckartMorseParams(x0=barrier_x(base))


def load_params(path: str) -> EckartMorseParams:
    with open(path) as fh:
        obj = json.load(fh)
    return EckartMorseParams(**obj)


def eckart_potential(p: EckartMorseParams, x):
    """Eckart barrier ``A*u + B*u*(1-u)`` with ``u = logistic((x + x0)/a)``.

    Evaluated through a numerically stable logistic, so it is exact at
    arguments as far out as ``x = +/- 500 a`` (no overflow).
    """
    u = expit((np.asarray(x, dtype=float) + p.x0) / p.a)
    return p.A * u + p.B * u * (1.0 - u)


def morse_potential(p: EckartMorseParams, q):
    """Morse well ``De * (exp(-2 aM q) - 2 exp(-aM q))`` with minimum -De."""
    e = np.exp(-p.aM * np.asarray(q, dtype=float))
    return p.De * (e * e - 2.0 * e)


def potential(p: EckartMorseParams, q) -> float:
    """Total potential at configuration ``q = (x, y[, z])``."""
    q = np.asarray(q, dtype=float)
    v = float(eckart_potential(p, q[0]))
    for qi in q[1:]:
        v += float(morse_potential(p, qi))
    return v


def grad_potential(p: EckartMorseParams, q) -> np.ndarray:
    """Analytic gradient of :func:`potential`."""
    q = np.asarray(q, dtype=float)
    g = np.empty_like(q)
    u = float(expit((q[0] + p.x0) / p.a))
    g[0] = u * (1.0 - u) * (p.A + p.B * (1.0 - 2.0 * u)) / p.a
    e = np.exp(-p.aM * q[1:])
    g[1:] = 2.0 * p.De * p.aM * (e - e * e)
    return g


def kinetic_energy(p: EckartMorseParams, mom) -> float:
    """Kinetic energy ``|p|^2 / (2m) + eps * sum_{i<j} p_i p_j``."""
    mom = np.asarray(mom, dtype=float)
    s = float(np.sum(mom))
    return float(np.dot(mom, mom)) / (2.0 * p.m) + 0.5 * p.eps * (
        s * s - float(np.dot(mom, mom))
    )


def velocities(p: EckartMorseParams, mom) -> np.ndarray:
    """dq/dt = dH/dp, with the momentum coupling included."""
    mom = np.asarray(mom, dtype=float)
    s = np.sum(mom)
    return mom / p.m + p.eps * (s - mom)


def full_hamiltonian(p: EckartMorseParams, state) -> float:
    """Energy of a phase-space point ``(q_1..q_d, p_1..p_d)`` with d = 2 or 3."""
    state = np.asarray(state, dtype=float)
    if state.ndim != 1 or state.size % 2 != 0:
        raise DimensionError(f"state must be a flat (2d,) array, got shape {state.shape}")
    d = state.size // 2
    if d not in (2, 3):
        raise DimensionError(f"supported systems have 2 or 3 degrees of freedom, got {d}")
    return kinetic_energy(p, state[d:]) + potential(p, state[:d])
