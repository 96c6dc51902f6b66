"""The Grassmannian G(n, k) as a computational object.

A k-plane is represented by its n x n orthogonal projection matrix.  The
metric is the spectral norm of the difference of projection matrices, which
coincides with the sup over unit vectors of the projected-image distance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import matrixkit as mk
from .errors import DegeneracyError, InputDomainError

# Two subspaces with rho below this are considered equal.
EQUALITY_RHO = 1e-8

_SYMMETRY_TOL = 1e-10
_IDEMPOTENCY_TOL = 1e-10
_TRACE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Subspace:
    """A k-plane through the origin in R^n, stored as its projection matrix."""

    n: int
    k: int
    proj: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.proj, dtype=float)
        object.__setattr__(self, "proj", p)
        if not (0 < self.k < self.n):
            raise InputDomainError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if p.shape != (self.n, self.n):
            raise InputDomainError(
                f"projection matrix shape {p.shape} does not match n={self.n}")
        if not np.all(np.isfinite(p)):
            raise InputDomainError("projection matrix entries must be finite")
        if mk.spectral_norm(p - p.T) > _SYMMETRY_TOL:
            raise InputDomainError("invariant violated: proj is not symmetric")
        if mk.spectral_norm(p @ p - p) > _IDEMPOTENCY_TOL:
            raise InputDomainError("invariant violated: proj is not idempotent")
        if abs(np.trace(p) - self.k) > _TRACE_TOL:
            raise InputDomainError(
                f"invariant violated: trace(proj)={np.trace(p):.6g} != k={self.k}")

    def same_as(self, other: "Subspace") -> bool:
        return metric_rho(self, other) <= EQUALITY_RHO

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k,
                           "proj": self.proj.ravel().tolist()})

    @classmethod
    def from_json(cls, text: str) -> "Subspace":
        obj = json.loads(text)
        for key in ("n", "k", "proj"):
            if key not in obj:
                raise InputDomainError(f"subspace JSON missing field '{key}'")
        n = int(obj["n"])
        proj = np.asarray(obj["proj"], dtype=float)
        if proj.size != n * n:
            raise InputDomainError(
                f"invariant violated: proj has {proj.size} entries, expected {n * n}")
        return cls(n=n, k=int(obj["k"]), proj=proj.reshape(n, n))


@dataclass(frozen=True, eq=False)
class AffinePlane:
    """An affine k-plane V + t; the offset is canonicalized orthogonal to V."""

    direction: Subspace
    offset: np.ndarray = field(default=None)

    def __post_init__(self):
        t = np.zeros(self.direction.n) if self.offset is None \
            else np.asarray(self.offset, dtype=float)
        object.__setattr__(self, "offset", t)
        if t.shape != (self.direction.n,):
            raise InputDomainError("offset dimension does not match the direction")
        if np.linalg.norm(self.direction.proj @ t) > 1e-10:
            raise InputDomainError("invariant violated: offset not orthogonal to direction")

    @classmethod
    def through(cls, direction: Subspace, point) -> "AffinePlane":
        """The affine plane with the given direction passing through a point."""
        p = np.asarray(point, dtype=float)
        return cls(direction, p - direction.proj @ p)

    def contains_point(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x - (self.direction.proj @ x + self.offset)) <= tol


def _symmetrized_projection(n: int, k: int, p: np.ndarray) -> Subspace:
    return Subspace(n=n, k=k, proj=(p + p.T) / 2.0)


def from_basis(columns) -> Subspace:
    """Orthogonal projection onto the span of the given column vectors."""
    a = np.column_stack([np.asarray(c, dtype=float) for c in columns]) \
        if not isinstance(columns, np.ndarray) else np.asarray(columns, dtype=float)
    a = mk.as_matrix(a)
    n, k = a.shape
    sigma = mk.smallest_singular_value(a)
    if sigma <= 1e-8:
        raise DegeneracyError("basis columns are (nearly) linearly dependent",
                              sigma=sigma)
    p = a @ np.linalg.solve(a.T @ a, a.T)
    return _symmetrized_projection(n, k, p)


def project_point(v: Subspace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (v.n,):
        raise InputDomainError(f"point has shape {x.shape}, expected ({v.n},)")
    return v.proj @ x


def metric_rho(v1: Subspace, v2: Subspace) -> float:
    """Spectral norm of the difference of projection matrices; lies in [0, 1]."""
    if v1.n != v2.n or v1.k != v2.k:
        raise InputDomainError("metric requires subspaces of the same (n, k)")
    return mk.spectral_norm(v1.proj - v2.proj)


def orthogonal_complement(v: Subspace) -> Subspace:
    return Subspace(n=v.n, k=v.n - v.k, proj=np.eye(v.n) - v.proj)


def contains(w: Subspace, v: Subspace, tol: float = EQUALITY_RHO) -> bool:
    """Whether the plane of ``v`` lies inside ``w`` (any k's, same n)."""
    if w.n != v.n:
        raise InputDomainError("containment requires the same ambient dimension")
    return mk.spectral_norm(w.proj @ v.proj - v.proj) <= tol


def sample_uniform(n: int, k: int, rng: np.random.Generator) -> Subspace:
    """Invariant-measure sample: orthonormalize k iid Gaussian vectors."""
    if not (0 < k < n):
        raise InputDomainError(f"need 0 < k < n, got k={k}, n={n}")
    g = rng.standard_normal((n, k))
    q, _ = np.linalg.qr(g)
    return _symmetrized_projection(n, k, q @ q.T)


def perturb_within(v: Subspace, eps: float, rng: np.random.Generator) -> Subspace:
    """A genuine rank-k projection at metric distance in (0, eps] from ``v``.

    Moves in chart coordinates by a random free-block offset, shrinking the
    step until the metric target is met; this keeps the result exactly on
    the Grassmannian, unlike naive perturbation of the projection matrix.
    """
    if not (0.0 < eps < 1.0):
        raise InputDomainError(f"eps must lie in (0, 1), got {eps}")
    from . import charts  # local import: charts builds on this module

    c = charts.to_chart(v)
    g = rng.standard_normal(c.free.shape)
    g /= mk.spectral_norm(g)
    t = eps
    for _ in range(200):
        cand = charts.Chart(n=c.n, k=c.k, I=c.I, free=c.free + t * g)
        w = charts.from_chart(cand)
        rho = metric_rho(w, v)
        if 0.0 < rho <= eps:
            return w
        t /= 2.0
    raise DegeneracyError("could not realize a perturbation below eps", sigma=eps)
