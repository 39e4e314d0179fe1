"""Words, products, and separation diagnostics for matrix semigroups.

A system is a finite alphabet of unit-determinant matrices; a word w = w_1...w_n
indexes the product A_w = A_{w_1} ... A_{w_n}.  Products are built level by
level as (k^n, 2, 2) arrays in lexicographic word order and renormalized to
determinant one at every level, with norms cached per depth.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import runtime
from .errors import BudgetExceededError
from .geometry import (
    IDENTITY2,
    NORM_KINDS,
    OP2,
    Matrix2,
    MatrixClass,
    circ_dist,
    classify,
    fixed_points,
    op_norms_array,
    proj_act,
    renormalize_array,
)

Word = tuple[int, ...]

#: Pairs closer than this are treated as the same matrix (exact collisions).
COLLISION_TOL = 1e-10

#: Per-level hard cap on enumerated words, independent of any user budget.
_HARD_LEVEL_WORDS = 6_000_000

#: Above this many products, pairwise minima switch to a sorted-window scan.
_EXACT_PAIR_LIMIT = 4096

_WINDOW = 64


@dataclass(frozen=True)
class SystemConfig:
    """A finite matrix system plus the knobs shared by most entry points.

    `probs` is None for the uniform choice; `source_rows` keeps the literal
    config-file tokens for exact round-trips and never takes part in equality.
    """

    matrices: tuple[Matrix2, ...]
    probs: tuple[float, ...] | None = None
    norm: str = OP2
    depth_cap: int = 22
    seed: int = 0
    source_rows: tuple[tuple[str, str, str, str], ...] | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("system needs at least one matrix")
        if self.norm not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.norm!r}")
        if self.depth_cap < 1:
            raise ValueError("depth_cap must be positive")
        if self.probs is not None:
            if len(self.probs) != len(self.matrices):
                raise ValueError("probs length must match alphabet size")
            if any(p <= 0.0 for p in self.probs):
                raise ValueError("probs must be positive")
            s = sum(self.probs)
            if abs(s - 1.0) > 1e-9:
                object.__setattr__(
                    self, "probs", tuple(p / s for p in self.probs)
                )

    @property
    def k(self) -> int:
        return len(self.matrices)

    def weights(self) -> tuple[float, ...]:
        if self.probs is not None:
            return self.probs
        return tuple(1.0 / self.k for _ in self.matrices)


def enumerate_words(
    k: int, max_len: int, budget: int | None = None
) -> Iterator[Word]:
    """Yield all nonempty words over {0..k-1} up to max_len, shortest first
    and lexicographic within a length.  A budget bounds the total count and
    overruns raise with progress attached."""
    done = 0
    completed = 0
    for n in range(1, max_len + 1):
        for w in itertools.product(range(k), repeat=n):
            if budget is not None and done >= budget:
                raise BudgetExceededError(
                    f"word budget {budget} exhausted",
                    words_done=done,
                    depth_reached=completed,
                )
            yield w
            done += 1
        completed = n


def word_product(cfg: SystemConfig, word: Sequence[int]) -> Matrix2:
    """The matrix A_w for one word."""
    out = IDENTITY2
    for letter in word:
        out = out @ cfg.matrices[letter]
    return out


class ProductTable:
    """All level-n products of a system, built lazily and cached.

    level(n) is a (k^n, 2, 2) array in lexicographic word order (the word is
    recoverable as the base-k digits of the row index), renormalized to
    determinant one.  norms(n) caches the matching norm vector.  Levels are
    assembled by left-multiplying the previous level by each letter, one
    partition per letter, so threaded runs merge in a fixed order.
    """

    def __init__(self, cfg: SystemConfig, word_budget: int | None = None):
        self.cfg = cfg
        self.word_budget = word_budget
        self._base = np.stack([m.array for m in cfg.matrices])
        self._levels: dict[int, np.ndarray] = {}
        self._norms: dict[int, np.ndarray] = {}
        self._words_built = 0

    def _check_budget(self, n: int):
        count = self.cfg.k ** n
        if n > self.cfg.depth_cap:
            raise BudgetExceededError(
                f"depth {n} exceeds cap {self.cfg.depth_cap}",
                words_done=self._words_built,
                depth_reached=max(self._levels, default=0),
            )
        if count > _HARD_LEVEL_WORDS or (
            self.word_budget is not None
            and self._words_built + count > self.word_budget
        ):
            raise BudgetExceededError(
                f"level {n} needs {count} words",
                words_done=self._words_built,
                depth_reached=max(self._levels, default=0),
            )

    def level(self, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("levels start at 1")
        if n in self._levels:
            return self._levels[n]
        self._check_budget(n)
        if n == 1:
            lev = self._base.copy()
        else:
            prev = self.level(n - 1)
            parts = runtime.run_partitioned(
                lambda a: np.matmul(self._base[a], prev), list(range(self.cfg.k))
            )
            lev = np.concatenate(parts, axis=0)
        renormalize_array(lev)
        self._levels[n] = lev
        self._words_built += len(lev)
        return lev

    def norms(self, n: int) -> np.ndarray:
        if n not in self._norms:
            self._norms[n] = op_norms_array(self.level(n), self.cfg.norm)
        return self._norms[n]

    def min_norm(self, n: int) -> float:
        return float(self.norms(n).min())

    def max_norm(self, n: int) -> float:
        return float(self.norms(n).max())


# ---------------------------------------------------------------------------
# Left-invariant metric on SL(2).

def _displacement_norm(c: Matrix2) -> float:
    """Frobenius norm of log(c) for c in SL(2), via the scalar functional
    calculus on the traceless part.  Matrices with trace <= 0 have no real
    principal log; they get the crude proxy ||c - id||_F, which is only ever
    large and never misreports a small distance."""
    t = 0.5 * c.trace
    na, nb, nc, nd = c.a - t, c.b, c.c, c.d - t
    if t <= 0.0:
        da, dd = c.a - 1.0, c.d - 1.0
        return math.sqrt(da * da + nb * nb + nc * nc + dd * dd)
    if abs(t - 1.0) < 1e-8:
        coef = 1.0
    elif t > 1.0:
        m = math.acosh(t)
        coef = m / math.sinh(m)
    else:
        th = math.acos(t)
        coef = th / math.sin(th)
    return coef * math.sqrt(na * na + nb * nb + nc * nc + nd * nd)


def left_invariant_dist(a: Matrix2, b: Matrix2) -> float:
    """d(a, b) = ||log(a^{-1} b)||_F; invariant under left multiplication."""
    return _displacement_norm(a.inverse() @ b)


def _displacement_norms_array(c: np.ndarray) -> np.ndarray:
    """Vector version of the log-norm: c has shape (n, 2, 2), det one."""
    t = 0.5 * (c[:, 0, 0] + c[:, 1, 1])
    na = c[:, 0, 0] - t
    nd = c[:, 1, 1] - t
    nb = c[:, 0, 1]
    nc = c[:, 1, 0]
    frob_n = np.sqrt(na * na + nb * nb + nc * nc + nd * nd)

    coef = np.ones_like(t)
    hyp = t > 1.0 + 1e-8
    ell = (t > 0.0) & (t < 1.0 - 1e-8)
    m = np.arccosh(np.where(hyp, t, 2.0))
    coef = np.where(hyp, m / np.sinh(m), coef)
    th = np.arccos(np.clip(np.where(ell, t, 0.5), -1.0, 1.0))
    coef = np.where(ell, th / np.sin(th), coef)
    out = coef * frob_n

    bad = t <= 0.0
    if np.any(bad):
        da = c[bad, 0, 0] - 1.0
        dd = c[bad, 1, 1] - 1.0
        ob = c[bad, 0, 1]
        oc = c[bad, 1, 0]
        out[bad] = np.sqrt(da * da + ob * ob + oc * oc + dd * dd)
    return out


def _adjugates(arr: np.ndarray) -> np.ndarray:
    """Inverses of a det-one stack, entrywise."""
    out = np.empty_like(arr)
    out[:, 0, 0] = arr[:, 1, 1]
    out[:, 0, 1] = -arr[:, 0, 1]
    out[:, 1, 0] = -arr[:, 1, 0]
    out[:, 1, 1] = arr[:, 0, 0]
    return out


def _dists_to_identity(arr: np.ndarray) -> np.ndarray:
    """min(d(P, id), d(P, -id)) for every P in the stack."""
    plus = _displacement_norms_array(arr)
    minus = _displacement_norms_array(-arr)
    return np.minimum(plus, minus)


def _pairwise_min(
    arr: np.ndarray, other: np.ndarray | None = None
) -> tuple[float, int]:
    """Minimum left-invariant distance between distinct matrices, and the
    number of exact collisions (distance < COLLISION_TOL) excluded from it.

    One array: pairs within it.  Two arrays: pairs across.  Beyond
    _EXACT_PAIR_LIMIT the scan is a sorted sliding window, so the reported
    minimum is an upper bound for the true one; exact collisions still sort
    adjacent and are always caught.
    """
    best = math.inf
    collisions = 0

    def absorb(dists: np.ndarray):
        nonlocal best, collisions
        hit = dists < COLLISION_TOL
        collisions += int(hit.sum())
        live = dists[~hit]
        if live.size:
            best = min(best, float(live.min()))

    if other is None:
        n = len(arr)
        if n < 2:
            return math.inf, 0
        if n <= _EXACT_PAIR_LIMIT:
            adj = _adjugates(arr)
            for i in range(n - 1):
                c = np.matmul(adj[i], arr[i + 1:])
                absorb(_displacement_norms_array(c))
        else:
            order = np.lexsort(
                (arr[:, 1, 1], arr[:, 1, 0], arr[:, 0, 1], arr[:, 0, 0])
            )
            s = arr[order]
            adj = _adjugates(s)
            for i in range(n - 1):
                j = min(n, i + 1 + _WINDOW)
                c = np.matmul(adj[i], s[i + 1: j])
                absorb(_displacement_norms_array(c))
        return best, collisions

    if len(arr) == 0 or len(other) == 0:
        return math.inf, 0
    if len(arr) * len(other) <= _EXACT_PAIR_LIMIT ** 2:
        adj = _adjugates(arr)
        for i in range(len(arr)):
            absorb(_displacement_norms_array(np.matmul(adj[i], other)))
        return best, collisions
    both = np.concatenate([arr, other], axis=0)
    tag = np.concatenate(
        [np.zeros(len(arr), dtype=bool), np.ones(len(other), dtype=bool)]
    )
    order = np.lexsort(
        (both[:, 1, 1], both[:, 1, 0], both[:, 0, 1], both[:, 0, 0])
    )
    s, st = both[order], tag[order]
    adj = _adjugates(s)
    for i in range(len(s) - 1):
        j = min(len(s), i + 1 + _WINDOW)
        cross = st[i + 1: j] != st[i]
        if not cross.any():
            continue
        c = np.matmul(adj[i], s[i + 1: j][cross])
        absorb(_displacement_norms_array(c))
    return best, collisions


# ---------------------------------------------------------------------------
# Separation profiles.

@dataclass(frozen=True)
class SeparationRow:
    depth: int
    word_count: int
    min_dist: float
    collisions: int


@dataclass(frozen=True)
class DiophantineProfile:
    """Same-length separation of products, depth by depth.

    `fitted_c` is the exponential decay rate of the per-depth minima (the
    base c in min_n ~ C c^n), clamped into (0, 1]; None when fewer than two
    finite rows exist past depth 2.  `total_collisions` counts exact
    coincidences of distinct words, the signature of a non-free system.
    """

    rows: tuple[SeparationRow, ...]
    fitted_c: float | None
    total_collisions: int

    @property
    def free_so_far(self) -> bool:
        return self.total_collisions == 0


def diophantine_profile(
    cfg: SystemConfig, depth: int, *, table: ProductTable | None = None
) -> DiophantineProfile:
    table = table or ProductTable(cfg)
    rows = []
    for n in range(1, depth + 1):
        lev = table.level(n)
        d, coll = _pairwise_min(lev)
        rows.append(SeparationRow(n, len(lev), d, coll))
    pts = [(r.depth, math.log(r.min_dist)) for r in rows
           if r.depth >= 3 and math.isfinite(r.min_dist) and r.min_dist > 0]
    fitted = None
    if len(pts) >= 2:
        xs = np.array([p for p, _ in pts])
        ys = np.array([q for _, q in pts])
        slope = np.polyfit(xs, ys, 1)[0]
        fitted = min(math.exp(slope), 1.0)
    return DiophantineProfile(
        rows=tuple(rows),
        fitted_c=fitted,
        total_collisions=sum(r.collisions for r in rows),
    )


@dataclass(frozen=True)
class DiscretenessRow:
    depth: int
    word_count: int
    min_dist_to_identity: float
    min_pairwise: float
    collisions: int


@dataclass(frozen=True)
class DiscretenessProfile:
    """Evidence about semidiscreteness from finite enumeration.

    Per depth: the closest approach of any product to +-identity, and the
    closest pair among all distinct products seen so far (any lengths, exact
    collisions excluded).  Approach of the pairwise minimum to zero is the
    accumulation signature of a non-semidiscrete system; approach to
    identity refutes outright.
    """

    rows: tuple[DiscretenessRow, ...]
    total_collisions: int

    @property
    def final_min_pairwise(self) -> float:
        return self.rows[-1].min_pairwise if self.rows else math.inf

    @property
    def final_min_to_identity(self) -> float:
        if not self.rows:
            return math.inf
        return min(r.min_dist_to_identity for r in self.rows)


def discreteness_profile(
    cfg: SystemConfig, depth: int, *, table: ProductTable | None = None
) -> DiscretenessProfile:
    table = table or ProductTable(cfg)
    rows = []
    pool: np.ndarray | None = None
    running = math.inf
    collisions = 0
    for n in range(1, depth + 1):
        lev = table.level(n)
        to_id = float(_dists_to_identity(lev).min())
        d_in, c_in = _pairwise_min(lev)
        d_cross, c_cross = (
            (math.inf, 0) if pool is None else _pairwise_min(lev, pool)
        )
        collisions += c_in + c_cross
        running = min(running, d_in, d_cross)
        rows.append(DiscretenessRow(n, len(lev), to_id, running, c_in + c_cross))
        pool = lev if pool is None else np.concatenate([pool, lev], axis=0)
    return DiscretenessProfile(rows=tuple(rows), total_collisions=collisions)


# ---------------------------------------------------------------------------
# Common fixed points.

def common_fixed_points(cfg: SystemConfig, tol: float = 1e-9) -> tuple[float, ...]:
    """Angles fixed by every letter of the system, ascending; empty when none
    exist (an elliptic letter forces that).  Identity letters fix everything
    and constrain nothing."""
    candidates: list[float] = []
    for m in cfg.matrices:
        fp = fixed_points(m)
        if fp.kind is MatrixClass.ELLIPTIC:
            return ()
        if fp.kind is MatrixClass.IDENTITY:
            continue
        if fp.kind is MatrixClass.PARABOLIC:
            candidates.append(fp.parabolic)
        else:
            candidates.extend((fp.attracting, fp.repelling))
    if not candidates:
        return ()
    out: list[float] = []
    for t in sorted(candidates):
        if out and circ_dist(out[-1], t) <= tol:
            continue
        if all(
            circ_dist(proj_act(m, t), t) <= tol for m in cfg.matrices
        ):
            out.append(t)
    # endpoints of (0, pi] can alias across the wrap
    if len(out) > 1 and circ_dist(out[0], out[-1]) <= tol:
        out.pop()
    return tuple(out)
