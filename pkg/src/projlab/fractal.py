"""Self-similar set generators and empirical dimension estimators.

Attractors come from iterated function systems of pure contractions
(ratio * x + translation, no rotations).  Dimension is estimated by counting
occupied dyadic boxes on grids anchored at the origin; the similarity
dimension from the Moran equation serves as the ground-truth oracle.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import InputDomainError, ResourceBudgetError

EXHAUSTIVE_BUDGET = 10**7
CHAOS_BURN_IN = 100

# Bit-length "compressors": deterministic byte-in / bits-out estimators.
Compressor = Callable[[bytes], float]


@dataclass(frozen=True)
class Similarity:
    """One contraction x -> ratio * x + translation."""

    ratio: float
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "translation",
                           np.asarray(self.translation, dtype=float))
        if not (0.0 < self.ratio < 1.0):
            raise InputDomainError(f"contraction ratio must be in (0, 1), got {self.ratio}")

    @property
    def fixed_point(self) -> np.ndarray:
        return self.translation / (1.0 - self.ratio)


@dataclass(frozen=True)
class IFSSpec:
    """A self-similar set description: ambient dimension plus contractions.

    The open-set condition is recorded as supplied, not verified.
    """

    n: int
    maps: tuple
    label: Optional[str] = None
    open_set_condition: bool = True

    def __post_init__(self):
        maps = tuple(m if isinstance(m, Similarity) else Similarity(*m)
                     for m in self.maps)
        object.__setattr__(self, "maps", maps)
        if len(maps) < 2:
            raise InputDomainError("an IFS needs at least 2 maps")
        for m in maps:
            if m.translation.shape != (self.n,):
                raise InputDomainError(
                    f"translation shape {m.translation.shape} does not match n={self.n}")

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "maps": [{"ratio": m.ratio, "translation": m.translation.tolist()}
                     for m in self.maps],
            "label": self.label,
        })

    @classmethod
    def from_json(cls, text: str) -> "IFSSpec":
        obj = json.loads(text) if isinstance(text, str) else text
        for key in ("n", "maps"):
            if key not in obj:
                raise InputDomainError(f"IFS JSON missing field '{key}'")
        maps = tuple(Similarity(m["ratio"], m["translation"]) for m in obj["maps"])
        return cls(n=int(obj["n"]), maps=maps, label=obj.get("label"))


def cantor_middle_thirds() -> IFSSpec:
    return IFSSpec(n=1, maps=(Similarity(1 / 3, np.zeros(1)),
                              Similarity(1 / 3, np.array([2 / 3]))),
                   label="cantor-1/3")


def cantor_dust() -> IFSSpec:
    """C(1/3) x C(1/3) in the plane."""
    maps = tuple(Similarity(1 / 3, np.array([tx, ty]))
                 for tx in (0.0, 2 / 3) for ty in (0.0, 2 / 3))
    return IFSSpec(n=2, maps=maps, label="cantor-dust")


def cantor_on_axis() -> IFSSpec:
    """C(1/3) x {0} in the plane."""
    return IFSSpec(n=2, maps=(Similarity(1 / 3, np.zeros(2)),
                              Similarity(1 / 3, np.array([2 / 3, 0.0]))),
                   label="cantor-x-axis")


@dataclass(frozen=True)
class PointSample:
    """A finite point cloud approximating an IFS attractor."""

    points: np.ndarray
    depth: int
    source: IFSSpec = field(repr=False, default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.size == 0:
            raise InputDomainError("point sample must be nonempty")
        object.__setattr__(self, "points", pts)


def similarity_dimension(spec: IFSSpec) -> float:
    """The s >= 0 solving the Moran equation sum(r_i^s) = 1, by bisection."""
    ratios = np.array([m.ratio for m in spec.maps])

    def excess(s):
        return float(np.sum(ratios**s)) - 1.0

    lo, hi = 0.0, 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
    while hi - lo > 1e-12:
        mid = (lo + hi) / 2.0
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def generate(spec: IFSSpec, depth: int, mode: str = "exhaustive",
             rng: Optional[np.random.Generator] = None,
             ratio_weighted: bool = False) -> PointSample:
    """Point cloud on the attractor.

    Exhaustive mode applies every length-``depth`` composition of the maps to
    the fixed point of the first map (m^depth points).  Chaos mode runs a
    chaos-game orbit of ``depth`` points after a 100-step burn-in.
    """
    m = len(spec.maps)
    ratios = [s.ratio for s in spec.maps]
    translations = [s.translation for s in spec.maps]
    if mode == "exhaustive":
        if m**depth > EXHAUSTIVE_BUDGET:
            raise ResourceBudgetError(
                f"{m}^{depth} points exceed the exhaustive budget {EXHAUSTIVE_BUDGET}; "
                "use chaos mode")
        pts = spec.maps[0].fixed_point[None, :]
        for _ in range(depth):
            pts = np.concatenate([r * pts + t for r, t in zip(ratios, translations)])
        return PointSample(points=pts, depth=depth, source=spec)
    if mode == "chaos":
        if rng is None:
            raise InputDomainError("chaos mode requires an rng")
        weights = _chaos_weights(spec, ratio_weighted)
        x = spec.maps[0].fixed_point
        choices = rng.choice(m, size=CHAOS_BURN_IN + depth, p=weights)
        out = np.empty((depth, spec.n))
        for step, i in enumerate(choices):
            x = ratios[i] * x + translations[i]
            if step >= CHAOS_BURN_IN:
                out[step - CHAOS_BURN_IN] = x
        return PointSample(points=out, depth=depth, source=spec)
    raise InputDomainError(f"unknown generation mode '{mode}'")


def _chaos_weights(spec: IFSSpec, ratio_weighted: bool = False) -> np.ndarray:
    m = len(spec.maps)
    if not ratio_weighted:
        return np.full(m, 1.0 / m)
    s = similarity_dimension(spec)
    w = np.array([sm.ratio**s for sm in spec.maps])
    return w / w.sum()


@dataclass(frozen=True)
class DimensionEstimate:
    """Box-counting regression: slope of log2(counts) against the dyadic
    scale exponent, with residual diagnostics."""

    value: float
    slope_stderr: float
    scales: tuple
    counts: tuple


def default_scale_hi(sample, scale_lo: int = 2) -> int:
    """Finest reliable dyadic scale exponent for a sample.

    For IFS samples the resolution is r_max^depth, so scales up to
    depth*log2(1/r_max) - 2 avoid saturation; the coarse-side bias of a short
    window is worse than previously assumed, so the cap sits at 18 rather
    than 8.  Bare point lists keep the conservative 8.
    """
    if isinstance(sample, PointSample) and sample.source is not None:
        r_max = max(m.ratio for m in sample.source.maps)
        hi = math.floor(sample.depth * math.log2(1.0 / r_max)) - 2
        return max(scale_lo + 2, min(18, hi))
    return max(scale_lo + 2, 8)


def box_dimension(sample, scale_lo: int = 2,
                  scale_hi: Optional[int] = None) -> DimensionEstimate:
    """Least-squares box-counting dimension over dyadic scales 2^-j.

    Boxes are anchored at the origin; a point on a box boundary belongs to
    the box whose lower edge it lies on, so counts are deterministic.
    ``scale_hi`` defaults to :func:`default_scale_hi` of the sample.
    """
    if scale_hi is None:
        scale_hi = default_scale_hi(sample, scale_lo)
    pts = sample.points if isinstance(sample, PointSample) else np.asarray(sample, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.size == 0:
        raise InputDomainError("cannot box-count an empty point set")
    if scale_lo >= scale_hi:
        raise InputDomainError("need scale_lo < scale_hi")
    scales = list(range(scale_lo, scale_hi + 1))
    if len(scales) < 3:
        raise InputDomainError("need at least 3 scales")

    counts = []
    for j in scales:
        cells = np.floor(pts * float(2**j)).astype(np.int64)
        cells -= cells.min(axis=0)
        dims = cells.max(axis=0) + 1
        keys = np.ravel_multi_index(tuple(cells.T), tuple(dims))
        counts.append(int(np.unique(keys).size))

    x = np.asarray(scales, dtype=float)
    y = np.log2(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    dof = len(x) - 2
    sxx = float(np.sum((x - x.mean()) ** 2))
    stderr = math.sqrt(float(residuals @ residuals) / dof / sxx) if dof > 0 else 0.0
    return DimensionEstimate(value=float(slope), slope_stderr=stderr,
                             scales=tuple(scales), counts=tuple(counts))


def normalize_unit_box(points, degenerate_tol: float = 1e-12) -> np.ndarray:
    """Affinely rescale each coordinate into [0, 1]; coordinates whose range
    is below the tolerance collapse to 0 (dimension-neutral for the rest)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    out = np.zeros_like(pts)
    live = span > degenerate_tol
    out[:, live] = (pts[:, live] - lo[live]) / span[live]
    return out


def null_compressor(data: bytes) -> float:
    """Identity length in bits; calibration baseline."""
    return 8.0 * len(data)


def deflate_compressor(data: bytes) -> float:
    """zlib at max level, overhead-corrected against the empty input."""
    return 8.0 * max(0, len(zlib.compress(data, 9)) - len(zlib.compress(b"", 9)))


def kt_compressor(data: bytes) -> float:
    """Order-0 Krichevsky-Trofimov code length of the bit string, in bits.

    An ideal arithmetic code under the KT estimator: near 1 bit/bit on
    incoherent input, O(log n) total on constant input, with none of the
    container overhead general-purpose compressors pay on tiny payloads.
    """
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    total = 0.0
    ones = 0.0
    for i, b in enumerate(bits):
        p_one = (ones + 0.5) / (i + 1.0)
        total -= math.log2(p_one if b else 1.0 - p_one)
        ones += b
    return total


def _truncate_bits(points: np.ndarray, r: int) -> bytes:
    """Fixed-point binary truncation to r dyadic digits per coordinate,
    concatenated coordinate-major and packed into bytes."""
    levels = np.floor(points * float(2**r)).astype(np.uint64)
    levels = np.minimum(levels, 2**r - 1)
    bit_rows = []
    for c in range(points.shape[1]):  # coordinate-major
        for v in levels[:, c]:
            bit_rows.append([(int(v) >> (r - 1 - b)) & 1 for b in range(r)])
    bits = np.asarray(bit_rows, dtype=np.uint8).ravel()
    return np.packbits(bits).tobytes()


def complexity_profile(x, r_max: int,
                       compressor: Compressor = kt_compressor) -> list[tuple[int, float, float]]:
    """Heuristic compression profile: (r, K_hat_r, K_hat_r / r) for r <= r_max.

    The input is truncated to r dyadic digits per coordinate after affine
    normalization into [0, 1): fractional parts for a single vector, min-max
    scaling for a point list.  Raw profile only; no liminf is claimed.
    """
    if r_max > 64:
        raise InputDomainError(f"r_max must be <= 64, got {r_max}")
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
        pts = pts - np.floor(pts)
    else:
        pts = np.clip(normalize_unit_box(pts), 0.0, np.nextafter(1.0, 0.0))
    profile = []
    for r in range(1, r_max + 1):
        k_hat = float(compressor(_truncate_bits(pts, r)))
        profile.append((r, k_hat, k_hat / r))
    return profile


def export_sample(sample: PointSample, path) -> None:
    """Write points as little-endian float64 rows plus a JSON sidecar."""
    path = Path(path)
    path.write_bytes(sample.points.astype("<f8").tobytes())
    sidecar = {"n": int(sample.points.shape[1]),
               "count": int(sample.points.shape[0]),
               "depth": int(sample.depth)}
    path.with_suffix(".json").write_text(json.dumps(sidecar))


def load_sample(path) -> PointSample:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    pts = raw.reshape(sidecar["count"], sidecar["n"])
    return PointSample(points=pts, depth=int(sidecar["depth"]))
