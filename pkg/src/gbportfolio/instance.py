"""Problem data, the risk quadratic form, and objective/constraint evaluation.

The integer problem is

    max  mu.x   s.t.  a.x <= B,  Q(x) <= B^2 r0^2,  x in Z_+^n

with Q(x) = (a*x)^T Omega (a*x) = x^T C x and C = D Omega D, D = diag(a).
Prices, returns and the budget are Python ints, so every integer evaluation
here is exact at any magnitude.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AsymmetricCovariance,
    DimensionMismatch,
    NegativeBudget,
    NegativeRisk,
    NegativeReturn,
    NonPositivePrice,
    NotPositiveDefinite,
)


def _as_int_tuple(values):
    out = []
    for v in values:
        if isinstance(v, (float, np.floating)):
            if not float(v).is_integer():
                raise ValueError(f"expected an integer, got {v!r}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    a: tuple
    mu: tuple
    omega: np.ndarray
    B: int
    r0_sq: float
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "a", _as_int_tuple(self.a))
        object.__setattr__(self, "mu", _as_int_tuple(self.mu))
        om = np.array(self.omega, dtype=float, copy=True)
        if om.ndim == 0:
            om = om.reshape(1, 1)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "B", int(self.B))
        object.__setattr__(self, "r0_sq", float(self.r0_sq))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def n(self) -> int:
        return len(self.a)

    def with_risk(self, r0_sq: float) -> "Instance":
        return Instance(self.a, self.mu, self.omega, self.B, r0_sq, self.labels)

    def with_budget(self, B: int) -> "Instance":
        return Instance(self.a, self.mu, self.omega, B, self.r0_sq, self.labels)

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return f"x{i + 1}"


@dataclass(frozen=True)
class QuadraticForm:
    C: np.ndarray
    cap: float
    _chol: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def n(self) -> int:
        return self.C.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.C @ x)

    def values(self, X) -> np.ndarray:
        """Q evaluated row-wise on a 2-D array of points."""
        X = np.asarray(X, dtype=float)
        return np.einsum("ij,jk,ik->i", X, self.C, X)

    def gradient(self, x) -> np.ndarray:
        return 2.0 * (self.C @ np.asarray(x, dtype=float))

    def solve(self, v) -> np.ndarray:
        """C^{-1} v via the cached Cholesky factor."""
        from scipy.linalg import cho_solve

        return cho_solve((self._chol, True), np.asarray(v, dtype=float))


def validate_instance(inst: Instance) -> Instance:
    n = len(inst.a)
    if len(inst.mu) != n:
        raise DimensionMismatch(f"mu has length {len(inst.mu)}, expected {n}")
    if inst.omega.shape != (n, n):
        raise DimensionMismatch(f"omega has shape {inst.omega.shape}, expected {(n, n)}")
    if inst.labels is not None and len(inst.labels) != n:
        raise DimensionMismatch(f"{len(inst.labels)} labels for {n} assets")
    for i, ai in enumerate(inst.a):
        if ai < 1:
            raise NonPositivePrice(f"price a[{i}] = {ai} must be >= 1")
    for i, mi in enumerate(inst.mu):
        if mi < 0:
            raise NegativeReturn(f"return mu[{i}] = {mi} must be >= 0")
    if inst.B < 0:
        raise NegativeBudget(f"budget B = {inst.B} must be >= 0")
    if not inst.r0_sq >= 0:
        raise NegativeRisk(f"risk cap r0^2 = {inst.r0_sq} must be >= 0")

    om = inst.omega
    scale = float(np.max(np.abs(om))) if n else 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if abs(om[i, j] - om[j, i]) > 1e-12 * scale:
                raise AsymmetricCovariance(
                    f"omega[{i},{j}] = {om[i, j]!r} but omega[{j},{i}] = {om[j, i]!r}"
                )
    _cholesky_checked(om)
    return inst


def _cholesky_checked(M):
    """Lower Cholesky factor; fails on the first pivot below the PD tolerance."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    tol = 1e-14 * (np.trace(M) / n if n else 1.0)
    L = np.zeros_like(M)
    for j in range(n):
        pivot = M[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > tol:
            raise NotPositiveDefinite(f"non-positive Cholesky pivot {pivot!r} at index {j}")
        L[j, j] = np.sqrt(pivot)
        L[j + 1:, j] = (M[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def risk_form(inst: Instance) -> QuadraticForm:
    a = np.array(inst.a, dtype=float)
    C = a[:, None] * inst.omega * a[None, :]
    C = 0.5 * (C + C.T)
    C.setflags(write=False)
    chol = _cholesky_checked(C)
    return QuadraticForm(C=C, cap=float(inst.B) ** 2 * inst.r0_sq, _chol=chol)


def scale_instance(inst: Instance, k: int) -> Instance:
    """Multiply prices, returns and budget by 10**k; the feasible set is unchanged."""
    if k < 0:
        raise ValueError("k must be >= 0")
    f = 10 ** k
    return Instance(
        tuple(f * v for v in inst.a),
        tuple(f * v for v in inst.mu),
        inst.omega,
        f * inst.B,
        inst.r0_sq,
        inst.labels,
    )


def _check_dim(inst, x):
    if len(x) != inst.n:
        raise DimensionMismatch(f"portfolio has {len(x)} entries, instance has {inst.n}")


def risk_value(q: QuadraticForm, x: Sequence[int]) -> float:
    if len(x) != q.n:
        raise DimensionMismatch(f"portfolio has {len(x)} entries, form has {q.n}")
    return q(x)


def return_value(inst: Instance, x: Sequence[int]) -> int:
    _check_dim(inst, x)
    return sum(int(m) * int(v) for m, v in zip(inst.mu, x))


def budget_value(inst: Instance, x: Sequence[int]) -> int:
    _check_dim(inst, x)
    return sum(int(p) * int(v) for p, v in zip(inst.a, x))


def is_feasible(inst: Instance, q: QuadraticForm, x: Sequence[int]) -> bool:
    if any(int(v) < 0 for v in x):
        return False
    return budget_value(inst, x) <= inst.B and risk_value(q, x) <= q.cap
