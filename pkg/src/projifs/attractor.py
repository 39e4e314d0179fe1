"""Attractor and repeller point clouds, box-counting dimension, and the
set-level diagnostics built on them.

Two routes produce a cloud.  The fixed-point route collects attracting and
neutral fixed directions of every product up to a depth; it is deterministic
and exhausts the cylinder structure.  The orbit route pushes a reference
configuration through long random products and records the limit direction;
it scales to systems whose product tables would be enormous and doubles as
the stationary-measure sampler.

Angles live in (0, pi] throughout, and every cloud is kept sorted.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError
from .geometry import (
    CLASS_TOL,
    PI,
    normalize_angle,
    normalize_angles_array,
    proj_act_array,
)
from .runtime import run_partitioned
from .semigroup import ProductTable, SystemConfig

#: Orbit sampling always runs in this many independent streams, whatever the
#: thread count, so results are reproducible bit for bit.
_BATCHES = 16

#: Reference points pushed through the random products; convergence is
#: declared when their images collapse in the chordal metric.
_PROBES = (1j, 1.0 + 1j, -1.0 + 1j)


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    method: str
    depth: int | None = None
    samples: int | None = None
    dropped: int = 0

    def __len__(self) -> int:
        return int(self.points.size)


def _inverse_cfg(cfg: SystemConfig) -> SystemConfig:
    return dataclasses.replace(
        cfg,
        matrices=tuple(m.inverse() for m in cfg.matrices),
        source_rows=None,
    )


def _sorted_dedupe(pts: np.ndarray, merge_tol: float) -> np.ndarray:
    if pts.size == 0:
        return pts
    s = np.sort(pts)
    keep = np.concatenate([[True], np.diff(s) > merge_tol])
    s = s[keep]
    if s.size > 1 and (s[0] + PI) - s[-1] <= merge_tol:
        s = s[:-1]
    return s


def attractor_points_fixedpoint(
    cfg: SystemConfig,
    depth: int,
    merge_tol: float = 1e-12,
    *,
    table: ProductTable | None = None,
) -> PointCloud:
    """Attracting and neutral fixed directions of all products of length
    1..depth, merged at merge_tol."""
    table = table or ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, depth), source_rows=None
        )
    )
    chunks = []
    eye = np.eye(2)
    for n in range(1, depth + 1):
        lev = table.level(n)
        a = lev[:, 0, 0]
        b = lev[:, 0, 1]
        c = lev[:, 1, 0]
        d = lev[:, 1, 1]
        tr = a + d
        pm_id = (
            (np.abs(lev - eye).max(axis=(1, 2)) <= CLASS_TOL)
            | (np.abs(lev + eye).max(axis=(1, 2)) <= CLASS_TOL)
        )
        hyp = np.abs(tr) > 2.0 + CLASS_TOL
        par = (np.abs(np.abs(tr) - 2.0) <= CLASS_TOL) & ~pm_id
        sel = hyp | par
        if not sel.any():
            continue
        disc = np.sqrt(np.maximum(tr * tr - 4.0, 0.0))
        lam = 0.5 * (tr + np.sign(tr) * disc)
        v1x, v1y = b, lam - a
        v2x, v2y = lam - d, c
        use1 = v1x * v1x + v1y * v1y >= v2x * v2x + v2y * v2y
        vx = np.where(use1, v1x, v2x)
        vy = np.where(use1, v1y, v2y)
        chunks.append(
            normalize_angles_array(np.arctan2(vy[sel], vx[sel]))
        )
    pts = np.concatenate(chunks) if chunks else np.empty(0)
    return PointCloud(
        points=_sorted_dedupe(pts, merge_tol),
        method="fixed-point",
        depth=depth,
    )


def repeller_points_fixedpoint(
    cfg: SystemConfig, depth: int, merge_tol: float = 1e-12
) -> PointCloud:
    """The repeller is the attractor of the inverted alphabet."""
    return attractor_points_fixedpoint(_inverse_cfg(cfg), depth, merge_tol)


# ---------------------------------------------------------------------------
# Orbit sampling.

def _homog_chordal(n1: complex, d1: complex, n2: complex, d2: complex) -> float:
    num = abs(n1 * d2 - n2 * d1)
    s1 = math.sqrt(n1.real ** 2 + n1.imag ** 2 + d1.real ** 2 + d1.imag ** 2)
    s2 = math.sqrt(n2.real ** 2 + n2.imag ** 2 + d2.real ** 2 + d2.imag ** 2)
    return num / (s1 * s2)


def _orbit_batch(cfg, seed, batch, count, tol, max_iter):
    """Sample count limit directions from one reproducible stream."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(batch,)))
    cum = np.cumsum(cfg.weights())
    cum[-1] = 1.0
    entries = [m.entries for m in cfg.matrices]
    out = np.empty(count)
    dropped = 0
    for s in range(count):
        pa, pb, pc, pd = 1.0, 0.0, 0.0, 1.0
        steps = 0
        done = False
        while steps < max_iter and not done:
            draws = rng.random(min(64, max_iter - steps))
            for u in draws:
                i = int(np.searchsorted(cum, u, side="right"))
                a, b, c, d = entries[i]
                pa, pb, pc, pd = (
                    pa * a + pb * c,
                    pa * b + pb * d,
                    pc * a + pd * c,
                    pc * b + pd * d,
                )
                scale = max(abs(pa), abs(pb), abs(pc), abs(pd))
                pa, pb, pc, pd = pa / scale, pb / scale, pc / scale, pd / scale
                steps += 1
                nums = [pa * w + pb for w in _PROBES]
                dens = [pc * w + pd for w in _PROBES]
                diam = max(
                    _homog_chordal(nums[0], dens[0], nums[1], dens[1]),
                    _homog_chordal(nums[0], dens[0], nums[2], dens[2]),
                    _homog_chordal(nums[1], dens[1], nums[2], dens[2]),
                )
                if diam < tol:
                    done = True
                    break
        if not done:
            out[s] = math.nan
            dropped += 1
            continue
        # The collapsed probe image is chordally near a real projective
        # point; dividing by the larger homogeneous coordinate keeps the
        # chart ratio small, so dropping its imaginary part moves the point
        # by no more than the collapse tolerance even at the chart ends.
        n0, d0 = nums[0], dens[0]
        if abs(n0) >= abs(d0):
            out[s] = normalize_angle(math.atan2((d0 / n0).real, 1.0))
        else:
            out[s] = normalize_angle(math.atan2(1.0, (n0 / d0).real))
    return out, dropped


def attractor_points_orbit(
    cfg: SystemConfig,
    samples: int,
    seed: int | None = None,
    tol: float = 1e-9,
    max_iter: int = 3000,
) -> PointCloud:
    """Limit directions of random products drawn from the system's weights.

    Sampling is split into a fixed number of seeded batches, so the cloud is
    identical for any thread count.  Samples that fail to collapse within
    max_iter are dropped; more than 1% of them is an error.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    master = cfg.seed if seed is None else seed
    sizes = [
        samples // _BATCHES + (1 if b < samples % _BATCHES else 0)
        for b in range(_BATCHES)
    ]
    parts = [
        (b, sz) for b, sz in enumerate(sizes) if sz > 0
    ]
    results = run_partitioned(
        lambda p: _orbit_batch(cfg, master, p[0], p[1], tol, max_iter), parts
    )
    pts = np.concatenate([r[0] for r in results])
    dropped = sum(r[1] for r in results)
    if dropped > 0.01 * samples:
        raise NonConvergenceError(
            f"{dropped} of {samples} orbits failed to converge within "
            f"{max_iter} steps at tol {tol:g}; the system may be too close "
            "to neutral, or needs a larger iteration budget"
        )
    pts = np.sort(pts[~np.isnan(pts)])
    return PointCloud(
        points=pts, method="orbit", samples=samples, dropped=dropped
    )


def repeller_points_orbit(
    cfg: SystemConfig,
    samples: int,
    seed: int | None = None,
    tol: float = 1e-9,
    max_iter: int = 3000,
) -> PointCloud:
    return attractor_points_orbit(_inverse_cfg(cfg), samples, seed, tol, max_iter)


# ---------------------------------------------------------------------------
# Box-counting dimension.

@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    stderr: float
    scales: tuple[float, ...]
    counts: tuple[int, ...]
    dropped_scales: tuple[float, ...] = ()
    notes: tuple[str, ...] = ()


def _as_points(cloud) -> np.ndarray:
    pts = getattr(cloud, "points", cloud)
    return np.asarray(pts, dtype=float)


def box_dimension(
    cloud,
    eps_values=None,
    min_scales: int = 4,
) -> DimensionEstimate:
    """Least-squares slope of log N(eps) against log 1/eps over bins aligned
    at zero.  Scales where the count saturates the circle (>= 95% of all
    bins) or drops below 10 boxes are excluded, and so are scales too fine
    for the cloud to resolve (boxes averaging fewer than 8 points count the
    sample rather than the set), though never so many that fewer than
    min_scales survive."""
    pts = _as_points(cloud)
    if pts.size == 0:
        raise ValueError("empty point cloud")
    if eps_values is None:
        eps_values = [PI / 2.0 ** k for k in range(3, 15)]
    folded = np.mod(pts, PI)
    finest = min(eps_values)
    if len(np.unique(np.floor(folded / finest).astype(np.int64))) < 10:
        return DimensionEstimate(
            value=0.0,
            stderr=0.0,
            scales=(),
            counts=(),
            dropped_scales=tuple(sorted(eps_values, reverse=True)),
            notes=(
                "fewer than 10 occupied boxes at the finest scale; "
                "the cloud is effectively finite",
            ),
        )
    rows, dropped = [], []
    for e in sorted(eps_values, reverse=True):
        n_boxes = len(np.unique(np.floor(folded / e).astype(np.int64)))
        total = math.ceil(PI / e)
        if n_boxes >= 0.95 * total or n_boxes < 10:
            dropped.append(e)
            continue
        rows.append((e, n_boxes))
    # unresolved scales form the fine end; shed them finest-first but keep
    # enough scales for the fit
    unresolved = [e for e, n in rows if 8 * n > pts.size]
    n_shed = min(len(unresolved), max(len(rows) - min_scales, 0))
    if n_shed:
        victims = set(unresolved[-n_shed:])
        dropped.extend(e for e, _ in rows if e in victims)
        rows = [(e, n) for e, n in rows if e not in victims]
    kept = [e for e, _ in rows]
    counts = [n for _, n in rows]
    if len(kept) < min_scales:
        raise ValueError(
            f"only {len(kept)} usable scales (need {min_scales}); the cloud "
            "is too sparse or too dense for this range of box sizes"
        )
    x = np.log(1.0 / np.asarray(kept))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = len(kept) - 2
    var = float(resid @ resid) / dof if dof > 0 else 0.0
    sx = float(((x - x.mean()) ** 2).sum())
    stderr = math.sqrt(var / sx) if sx > 0 else math.inf
    notes = []
    if n_shed:
        notes.append(f"{n_shed} scales finer than the cloud resolves were dropped")
    value = float(slope)
    if value < 0.0 or value > 1.0:
        notes.append(f"raw slope {value:.4f} clamped into [0, 1]")
        value = min(1.0, max(0.0, value))
    return DimensionEstimate(
        value=value,
        stderr=stderr,
        scales=tuple(kept),
        counts=tuple(counts),
        dropped_scales=tuple(dropped),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Set-level diagnostics.

def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    ext = np.concatenate([[b[-1] - PI], b, [b[0] + PI]])
    idx = np.searchsorted(ext, a)
    gaps = np.minimum(a - ext[idx - 1], ext[idx] - a)
    return float(np.maximum(gaps, 0.0).max())


def hausdorff_circle(a, b) -> float:
    """Hausdorff distance between two angle sets in the circular metric."""
    a = np.sort(_as_points(a))
    b = np.sort(_as_points(b))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty point cloud")
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))


def _min_cross_distance(a: np.ndarray, b: np.ndarray) -> float:
    ext = np.concatenate([[b[-1] - PI], b, [b[0] + PI]])
    idx = np.searchsorted(ext, a)
    gaps = np.minimum(a - ext[idx - 1], ext[idx] - a)
    return float(np.maximum(gaps, 0.0).min())


@dataclass(frozen=True)
class SeparationReport:
    min_distance: float
    overlapping: bool
    tol: float


def separation_report(a, b, tol: float = 1e-3) -> SeparationReport:
    """Closest approach of two clouds, e.g. attractor against repeller."""
    a = np.sort(_as_points(a))
    b = np.sort(_as_points(b))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty point cloud")
    d = _min_cross_distance(a, b)
    return SeparationReport(min_distance=d, overlapping=d <= tol, tol=tol)


def invariance_residual(cfg: SystemConfig, cloud) -> float:
    """Hausdorff distance between a cloud and the union of its letter images;
    small values mean the cloud closely approximates an invariant set."""
    pts = _as_points(cloud)
    if pts.size == 0:
        raise ValueError("empty point cloud")
    images = np.concatenate(
        [proj_act_array(m, pts) for m in cfg.matrices]
    )
    return hausdorff_circle(pts, np.sort(images))
