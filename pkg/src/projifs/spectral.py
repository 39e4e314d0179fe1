"""Zeta partial sums, pressure bounds, and critical-exponent brackets.

The weighted word count Z_n(s) = sum over |w| = n of ||A_w||^{-2s} is
supermultiplicative in n (norms are submultiplicative and every word splits),
so Fekete's lemma turns any single depth into an unconditional lower bound on
the pressure P(s) = lim (1/n) log Z_n(s).  An almost-multiplicativity
constant c with ||AB|| >= c ||A|| ||B|| makes c^{-2s} Z_n submultiplicative
and yields matching upper bounds.  The critical exponent delta is the zero
crossing of P; bracketing P at probe points brackets delta.

Every certified claim here is one-sided and per-probe: "lower(s) > 0" proves
delta > s, "upper(s) < 0" proves delta < s, monotonicity nowhere assumed.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .geometry import OP2
from .semigroup import (
    ProductTable,
    SystemConfig,
    Word,
    common_fixed_points,
    discreteness_profile,
    _pairwise_min,
)

#: log 2 shows up as the norm-equivalence penalty for the max-entry norm,
#: whose submultiplicativity only holds with a factor 2.
_LOG2 = math.log(2.0)

_PARABOLIC_TOL = 1e-9
_ACCUMULATION_TOL = 1e-3


@dataclass(frozen=True)
class ZetaValues:
    s: float
    per_depth: tuple[float, ...]
    cumulative: float


def partial_zeta(
    cfg: SystemConfig, s: float, depth: int, *, table: ProductTable | None = None
) -> ZetaValues:
    """Z_1(s) .. Z_depth(s) and their sum, each level summed with fsum so the
    result is independent of threading and platform."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    table = table or ProductTable(cfg)
    per = []
    for n in range(1, depth + 1):
        terms = table.norms(n) ** (-2.0 * s)
        per.append(math.fsum(terms))
    return ZetaValues(s=s, per_depth=tuple(per), cumulative=math.fsum(per))


@dataclass(frozen=True)
class PressureEval:
    """One-point pressure bracket: lower <= P(s) <= upper.

    upper is +inf when no almost-multiplicativity constant was supplied.
    """

    s: float
    lower: float
    upper: float
    depth_used: int
    c_const: float | None


def _check_c(c_const: float | None):
    if c_const is not None and not (0.0 < c_const <= 1.0):
        raise ValueError(f"c_const must lie in (0, 1], got {c_const}")


class _PressureProbe:
    """Caches per-level log-norms so repeated probes at new s are cheap."""

    def __init__(self, cfg: SystemConfig, depth: int, table: ProductTable | None):
        self.cfg = cfg
        self.depth = depth
        self.table = table or ProductTable(cfg)
        self.log_norms = [np.log(self.table.norms(n)) for n in range(1, depth + 1)]
        # max-entry norm is submultiplicative only up to a factor 2, which
        # costs 2s log2 per split in the lower bound
        self.split_penalty = _LOG2 if cfg.norm != OP2 else 0.0

    def log_zeta(self, s: float, n: int) -> float:
        return math.log(math.fsum(np.exp(-2.0 * s * self.log_norms[n - 1])))

    def lower(self, s: float) -> float:
        return max(
            (self.log_zeta(s, m) - 2.0 * s * self.split_penalty) / m
            for m in range(1, self.depth + 1)
        )

    def upper(self, s: float, c_const: float) -> float:
        pen = -2.0 * s * math.log(c_const)
        return min(
            (self.log_zeta(s, m) + pen) / m for m in range(1, self.depth + 1)
        )


def pressure_bracket(
    cfg: SystemConfig,
    s: float,
    depth: int,
    c_const: float | None = None,
    *,
    table: ProductTable | None = None,
) -> PressureEval:
    """Rigorous pressure bounds at one s from depths 1..depth."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    _check_c(c_const)
    probe = _PressureProbe(cfg, depth, table)
    upper = math.inf if c_const is None else probe.upper(s, c_const)
    return PressureEval(
        s=s, lower=probe.lower(s), upper=upper, depth_used=depth, c_const=c_const
    )


@dataclass(frozen=True)
class Bracket:
    """Interval [lo, hi] around the critical exponent.

    certified means both endpoints rest on one-sided pressure certificates
    (op2 norm, almost-multiplicativity constant supplied, hi finite); an
    estimated endpoint is flagged in notes instead.
    """

    lo: float
    hi: float
    depth_used: int
    certified: bool
    c_const: float | None
    notes: tuple[str, ...] = ()

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _bisect_edge(pred, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink [lo, hi] to width tol keeping pred(lo) true and pred(hi) false.
    Every accepted probe was verified, so soundness needs no monotonicity."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _collision_note(cfg: SystemConfig, depth: int, table: ProductTable) -> str | None:
    check_depth = 1
    while cfg.k ** (check_depth + 1) <= 2048 and check_depth < min(depth, 11):
        check_depth += 1
    for n in range(2, check_depth + 1):
        _, coll = _pairwise_min(table.level(n))
        if coll:
            return (
                "system is not free: distinct words repeat a matrix from "
                f"depth {n}; zeta weights count words, not matrices"
            )
    return None


def critical_exponent_bracket(
    cfg: SystemConfig,
    depth: int,
    c_const: float | None = None,
    tol: float = 1e-4,
    s_max: float = 5.0,
    *,
    table: ProductTable | None = None,
) -> Bracket:
    """Bracket the critical exponent by bisecting on pressure certificates.

    With c_const: lo always satisfies a lower-pressure certificate (or is 0)
    and hi an upper one (or +inf when even s_max cannot be certified).
    Without it there is no rigorous upper route; hi is then the zero of the
    deepest finite-depth pressure estimate and the bracket is not certified.
    A width above tol means the certificates themselves, not the bisection,
    ran out of resolution at this depth.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_c(c_const)
    probe = _PressureProbe(cfg, depth, table)
    notes = []
    coll = _collision_note(cfg, depth, probe.table)
    if coll:
        notes.append(coll)
    if cfg.norm != OP2:
        notes.append(
            "max-entry norm: lower bounds carry the factor-2 split penalty "
            "and certification is reserved for the op2 norm"
        )

    def low_ok(s):
        return probe.lower(s) > 0.0

    def refine_lower(hi_limit):
        if not low_ok(0.0):
            return 0.0
        return _bisect_edge(low_ok, 0.0, hi_limit, tol / 2.0)[0]

    if c_const is not None and probe.upper(s_max, c_const) < 0.0:

        def high_ok(s):
            return probe.upper(s, c_const) < 0.0

        lo, hi = 0.0, s_max
        lo_holds = low_ok(0.0)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if low_ok(mid):
                lo, lo_holds = mid, True
            elif high_ok(mid):
                hi = mid
            else:
                # the certificate gap at this depth straddles mid; sharpen
                # both edges separately and stop
                if lo_holds:
                    lo, _ = _bisect_edge(low_ok, lo, mid, tol / 4.0)
                _, hi = _bisect_edge(lambda t: not high_ok(t), mid, hi, tol / 4.0)
                notes.append(
                    f"certificate gap wider than tol at depth {depth}; "
                    "increase depth to narrow further"
                )
                break
        certified = cfg.norm == OP2
        return Bracket(lo, hi, depth, certified, c_const, tuple(notes))

    if c_const is not None:
        notes.append(
            f"no certified upper bound at or below s_max={s_max}; "
            "pressure upper bound stays nonnegative"
        )
        return Bracket(
            refine_lower(s_max), math.inf, depth, False, c_const, tuple(notes)
        )

    # estimate-only upper route
    notes.append(
        "upper endpoint is a finite-depth estimate; supply an "
        "almost-multiplicativity constant for a certified bracket"
    )
    lo = refine_lower(s_max)

    def est_pos(s):
        return probe.log_zeta(s, depth) / depth >= 0.0

    if est_pos(s_max):
        notes.append(f"finite-depth pressure still positive at s_max={s_max}")
        return Bracket(lo, math.inf, depth, False, None, tuple(notes))
    hi = max(_bisect_edge(est_pos, 0.0, s_max, tol / 2.0)[1], lo)
    return Bracket(lo, hi, depth, False, None, tuple(notes))


# ---------------------------------------------------------------------------
# Structural shortcuts: bounds that need no zeta enumeration at all.

@dataclass(frozen=True)
class QuickBound:
    value: float
    reason: str
    certified: bool
    word: Word | None = None


def _parabolic_word(cfg: SystemConfig, table: ProductTable, scan_depth: int):
    """Shortest word whose product is parabolic but not +-identity."""
    for n in range(1, scan_depth + 1):
        if cfg.k ** n > 65536:
            break
        lev = table.level(n)
        tr = lev[:, 0, 0] + lev[:, 1, 1]
        near = np.abs(np.abs(tr) - 2.0) <= _PARABOLIC_TOL
        if not near.any():
            continue
        eye = np.eye(2)
        dev_p = np.abs(lev - eye).max(axis=(1, 2))
        dev_m = np.abs(lev + eye).max(axis=(1, 2))
        mask = near & (dev_p > _PARABOLIC_TOL) & (dev_m > _PARABOLIC_TOL)
        idx = np.flatnonzero(mask)
        if idx.size:
            i = int(idx[0])
            word = []
            for _ in range(n):
                word.append(i % cfg.k)
                i //= cfg.k
            return tuple(reversed(word))
    return None


def _accumulation_evidence(cfg: SystemConfig) -> bool:
    """True when distinct products pile up on each other within the scan
    budget, the finite-depth signature of a non-semidiscrete system."""
    if cfg.k == 1:
        # powers of one matrix are cheap, and recurrence times of a generic
        # rotation only show up around its deeper continued-fraction
        # convergents, so scan well past the multi-letter budget
        depth = 1024
    else:
        depth, pool = 1, cfg.k
        while pool + cfg.k ** (depth + 1) <= 1024:
            depth += 1
            pool += cfg.k ** depth
    scan_cfg = dataclasses.replace(
        cfg, depth_cap=max(cfg.depth_cap, depth), source_rows=None
    )
    prof = discreteness_profile(scan_cfg, depth)
    final = prof.final_min_pairwise
    first = prof.rows[min(1, len(prof.rows) - 1)].min_pairwise
    return final < _ACCUMULATION_TOL and (
        not math.isfinite(first) or final < 0.25 * first
    )


def quick_lower_bounds(
    cfg: SystemConfig, scan_depth: int = 6
) -> tuple[QuickBound, ...]:
    """Lower bounds on the critical exponent from structure alone.

    A parabolic product forces delta >= 1/2 (its powers have norm growing
    linearly).  A shared fixed point whose one-dimensional reduction yields
    an interval attractor forces delta >= 1.  Accumulation of distinct
    products is evidence, not proof, of delta = infinity.
    """
    bounds: list[QuickBound] = []
    table = ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, scan_depth), source_rows=None
        )
    )
    w = _parabolic_word(cfg, table, scan_depth)
    if w is not None:
        bounds.append(QuickBound(0.5, "parabolic-product", True, w))
    if common_fixed_points(cfg):
        from . import subsystems

        red = subsystems.reducible_dimension(cfg)
        if red.case in (
            subsystems.ReducibleCase.ATTRACTOR_MEETS_REPELLER,
            subsystems.ReducibleCase.PARABOLIC_AT_REPELLER,
        ):
            bounds.append(QuickBound(1.0, "reducible-interval-attractor", True))
    if _accumulation_evidence(cfg):
        bounds.append(QuickBound(math.inf, "accumulation-evidence", False))
    bounds.sort(key=lambda b: b.value, reverse=True)
    return tuple(bounds)
