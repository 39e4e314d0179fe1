"""Multicones and the certificates built on them.

A multicone is a finite union of open arcs of RP^1 with disjoint closures,
not the whole circle.  A system that maps some multicone strictly inside
itself is uniformly hyperbolic on it, and the strict invariance also
certifies semidiscreteness of the generated semigroup.  The search below
grows a candidate from fixed-point seeds, closes it under the letter maps,
and then measures how far inside itself the closure lands.

Arcs are stored as (lo, hi) with lo in (0, pi] and hi = lo + length for a
length in (0, pi); hi may pass pi, the wrap is implicit.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, DegenerateDirectionsError
from .geometry import (
    PI,
    Matrix2,
    MatrixClass,
    ccw_span,
    classify,
    fixed_points,
    normalize_angle,
    proj_act,
    singular_directions,
)
from .semigroup import (
    ProductTable,
    SystemConfig,
    discreteness_profile,
    enumerate_words,
    word_product,
)

_HALF_PI = PI / 2.0

#: Ceiling on arcs in any working union; smallest gaps are bridged past it.
_MAX_ARCS = 64

#: Identity-approach threshold that turns evidence into refutation.
_IDENTITY_TOL = 1e-9

Arc = tuple[float, float]


def _sdiff(a: float, b: float) -> float:
    """Signed ccw displacement from a to b, folded into [-pi/2, pi/2)."""
    return (b - a + _HALF_PI) % PI - _HALF_PI


def _canon(arc: Arc) -> Arc:
    lo, hi = arc
    length = ccw_span(lo, hi)
    lo = normalize_angle(lo)
    return (lo, lo + length)


def _merge_arcs(arcs: list[Arc], gap_tol: float) -> list[Arc] | None:
    """Union of arcs, gluing gaps up to gap_tol; None when the union is the
    whole circle (or indistinguishable from it)."""
    if not arcs:
        return []
    cs = sorted(_canon(a) for a in arcs)
    if any(hi - lo >= PI - 1e-12 for lo, hi in cs):
        return None
    base = cs[0][0]
    unrolled = cs + [(lo + PI, hi + PI) for lo, hi in cs]
    merged: list[list[float]] = [list(unrolled[0])]
    for lo, hi in unrolled[1:]:
        if lo <= merged[-1][1] + gap_tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    out = [
        (lo, hi) for lo, hi in merged if base <= lo < base + PI
    ]
    # an arc reaching past base+pi wraps onto the earliest ones; absorb them
    while len(out) > 1 and out[-1][1] - PI >= out[0][0] - gap_tol:
        lo0, hi0 = out.pop(0)
        lo_l, hi_l = out[-1]
        out[-1] = (lo_l, max(hi_l, hi0 + PI))
    if any(hi - lo >= PI - 1e-9 for lo, hi in out):
        return None
    out = sorted(_canon(a) for a in out)
    if math.fsum(hi - lo for lo, hi in out) >= PI - 1e-9:
        return None
    return out


def _bridge_to_cap(arcs: list[Arc], cap: int = _MAX_ARCS) -> list[Arc] | None:
    """Bridge the smallest circular gaps until at most cap arcs remain."""
    arcs = sorted(arcs)
    while len(arcs) > cap:
        gaps = [
            ccw_span(arcs[i][1], arcs[(i + 1) % len(arcs)][0])
            for i in range(len(arcs))
        ]
        i = int(np.argmin(gaps))
        j = (i + 1) % len(arcs)
        lo = arcs[i][0]
        merged = (lo, lo + (arcs[i][1] - arcs[i][0]) + gaps[i]
                  + (arcs[j][1] - arcs[j][0]))
        keep = [a for t, a in enumerate(arcs) if t not in (i, j)]
        arcs = sorted(_canon(a) for a in keep + [merged])
        if math.fsum(hi - lo for lo, hi in arcs) >= PI - 1e-6:
            return None
    return arcs


@dataclass(frozen=True)
class Multicone:
    """Validated union of arcs: disjoint closures, total length below pi."""

    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if not self.arcs:
            raise ValueError("multicone needs at least one arc")
        cs = sorted(_canon(a) for a in self.arcs)
        total = math.fsum(hi - lo for lo, hi in cs)
        if total >= PI - 1e-12:
            raise ValueError("arcs cover the whole circle")
        for i in range(len(cs) - 1):
            if cs[i + 1][0] <= cs[i][1]:
                raise ValueError("arc closures overlap")
        if len(cs) > 1 and cs[-1][1] - PI >= cs[0][0]:
            raise ValueError("arc closures overlap")
        object.__setattr__(self, "arcs", tuple(cs))

    @property
    def total_length(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.arcs)

    def contains_point(self, theta: float, slack: float = 0.0) -> bool:
        for lo, hi in self.arcs:
            if ccw_span(lo, theta) <= (hi - lo) + slack:
                return True
            if slack > 0.0 and ccw_span(theta, lo) <= slack:
                return True
        return False

    def point_clearance(self, theta: float) -> float:
        """Circular distance from theta to the union; 0 inside."""
        best = math.inf
        for lo, hi in self.arcs:
            if ccw_span(lo, theta) <= hi - lo:
                return 0.0
            best = min(best, ccw_span(hi, theta), ccw_span(theta, lo))
        return best


def _map_arc(m: Matrix2, arc: Arc) -> Arc:
    # the action preserves orientation, so an arc maps to the ccw arc
    # between its endpoint images
    lo, hi = arc
    a = proj_act(m, lo)
    b = proj_act(m, normalize_angle(hi))
    return (a, a + ccw_span(a, b))


def _arc_margin_in(outer: Arc, inner: Arc) -> float:
    """Containment margin of inner inside outer; -inf when the pair is not
    even approximately nested."""
    li, hi_ = _canon(inner)
    lo, ho = _canon(outer)
    m1 = _sdiff(lo, li)
    m2 = _sdiff(hi_, ho)
    if abs(m1 + (hi_ - li) + m2 - (ho - lo)) > 1e-9:
        return -math.inf
    return min(m1, m2)


def containment_margin(outer_arcs, inner_arcs) -> float:
    """min over inner arcs of the best per-arc nesting margin.

    Nonnegative means inner is contained in outer; a small negative value
    measures the worst overhang; -inf means some inner arc is nowhere near
    a single outer arc.
    """
    worst = math.inf
    for ia in inner_arcs:
        best = max((_arc_margin_in(oa, ia) for oa in outer_arcs),
                   default=-math.inf)
        worst = min(worst, best)
    return worst


def multicone_gap(a: Multicone, b: Multicone) -> float:
    """Smallest circular distance between the two unions; 0 when they meet."""
    best = math.inf
    for la, ha in a.arcs:
        for lb, hb in b.arcs:
            if ccw_span(la, lb) <= ha - la or ccw_span(lb, la) <= hb - lb:
                return 0.0
            best = min(best, ccw_span(ha, lb), ccw_span(hb, la))
    return best


# ---------------------------------------------------------------------------
# Invariant multicone search.

class ConeKind(enum.Enum):
    COMPACT = "compact"
    STRICT_ONLY = "strict-only"


@dataclass(frozen=True)
class ConeSearchResult:
    found: bool
    cone: Multicone | None
    kind: ConeKind | None
    margin: float
    iterations: int
    notes: tuple[str, ...] = ()


def _fatten(arcs: list[Arc], amount: float) -> list[Arc]:
    """Widen each arc into its neighboring gaps, never past a third of a gap,
    so disjointness of closures is preserved."""
    n = len(arcs)
    out = []
    for i, (lo, hi) in enumerate(arcs):
        before = ccw_span(arcs[(i - 1) % n][1], lo) if n > 1 else PI - (hi - lo)
        after = ccw_span(hi, arcs[(i + 1) % n][0]) if n > 1 else PI - (hi - lo)
        lo2 = lo - min(amount, before / 3.0)
        hi2 = hi + min(amount, after / 3.0)
        out.append(_canon((lo2, hi2)))
    return sorted(out)


def _seed_points(cfg: SystemConfig, seed_depth: int) -> list[float]:
    pts = []
    try:
        for w in enumerate_words(cfg.k, seed_depth, budget=640):
            fp = fixed_points(word_product(cfg, w))
            if fp.kind is MatrixClass.HYPERBOLIC:
                pts.append(fp.attracting)
            elif fp.kind is MatrixClass.PARABOLIC:
                pts.append(fp.parabolic)
    except BudgetExceededError:
        pass
    return pts


def find_invariant_multicone(
    cfg: SystemConfig,
    seed_depth: int = 8,
    eps: float = 1e-3,
    max_iters: int = 64,
    merge_tol: float = 1e-9,
    stall_tol: float = 1e-7,
) -> ConeSearchResult:
    """Search for a multicone every letter maps into itself.

    Seeds are neighborhoods of attracting and neutral fixed points of short
    products; the union is closed under the letter maps until it stalls.
    The final margin classifies the outcome: at least eps inside is a
    compact certificate, within eps either way is a strict-only certificate
    (invariance verified at tolerance eps), anything worse is a failure.
    """
    notes = []
    for m in cfg.matrices:
        if classify(m) is MatrixClass.ELLIPTIC:
            return ConeSearchResult(
                False, None, None, -math.inf, 0,
                ("elliptic letter: no invariant multicone can exist; "
                 "a finite-order elliptic may admit a symmetrized search",),
            )
    seeds = _seed_points(cfg, seed_depth)
    if not seeds:
        return ConeSearchResult(
            False, None, None, -math.inf, 0,
            ("no hyperbolic or neutral fixed points to seed from",),
        )
    radius = 4.0 * eps
    arcs = _merge_arcs([(t - radius, t + radius) for t in seeds], merge_tol)
    iterations = 0
    for iterations in range(1, max_iters + 1):
        if arcs is None:
            return ConeSearchResult(
                False, None, None, -math.inf, iterations,
                ("closure filled the circle",),
            )
        arcs = _bridge_to_cap(arcs)
        if arcs is None:
            return ConeSearchResult(
                False, None, None, -math.inf, iterations,
                ("closure filled the circle",),
            )
        images = [a for m in cfg.matrices for a in (_map_arc(m, arc) for arc in arcs)]
        new = _merge_arcs(arcs + images, merge_tol)
        if new is None:
            return ConeSearchResult(
                False, None, None, -math.inf, iterations,
                ("closure filled the circle",),
            )
        new = _bridge_to_cap(new)
        if new is None:
            return ConeSearchResult(
                False, None, None, -math.inf, iterations,
                ("closure filled the circle",),
            )
        if len(new) == len(arcs):
            move = max(
                max(abs(_sdiff(a[0], b[0])), abs(_sdiff(a[1], b[1])))
                for a, b in zip(arcs, new)
            )
            if move < stall_tol:
                arcs = new
                break
        arcs = new
    else:
        notes.append(f"closure did not stabilize within {max_iters} passes")

    # The closure converges onto the minimal invariant set, which the letters
    # map into itself with no room to spare at its extreme fixed points.
    # Gluing sub-resolution gaps and padding the stalled arcs into the
    # remaining ones buys back a measurable margin.
    glued = _merge_arcs(arcs, 12.0 * eps)
    if glued is not None:
        arcs = glued
    arcs = _fatten(arcs, 4.0 * eps)
    margin = min(
        containment_margin(arcs, [_map_arc(m, arc) for arc in arcs])
        for m in cfg.matrices
    )
    cone = Multicone(tuple(arcs))
    if margin >= eps:
        return ConeSearchResult(
            True, cone, ConeKind.COMPACT, margin, iterations, tuple(notes)
        )
    if margin > -eps:
        notes.append(
            f"containment verified only at tolerance {eps}; the invariant "
            "set grazes its own boundary"
        )
        return ConeSearchResult(
            True, cone, ConeKind.STRICT_ONLY, margin, iterations, tuple(notes)
        )
    notes.append(f"final margin {margin:.3e} is worse than -eps")
    return ConeSearchResult(False, cone, None, margin, iterations, tuple(notes))


# ---------------------------------------------------------------------------
# Almost-multiplicativity.

@dataclass(frozen=True)
class AlmostMultConstant:
    """c with ||AB|| >= c ||A|| ||B|| across the semigroup, from cone geometry.

    c = sin(g)^2 where g lower-bounds the angle every product's contracting
    singular direction keeps from the invariant multicone.  Words of norm
    below the recorded threshold are checked directly; beyond it the image
    of the multicone is too short for the contracting direction to sit
    inside, and no enumeration is needed.
    """

    c: float
    g: float
    valid: bool
    threshold: float
    checked_words: int
    checked_depth: int
    notes: tuple[str, ...] = ()


def almost_mult_constant(
    cfg: SystemConfig,
    cone_result: ConeSearchResult,
    max_check_depth: int = 14,
    *,
    table: ProductTable | None = None,
) -> AlmostMultConstant:
    if not cone_result.found or cone_result.kind is not ConeKind.COMPACT:
        return AlmostMultConstant(
            0.0, 0.0, False, 0.0, 0, 0,
            ("needs a compact invariant multicone",),
        )
    cone = cone_result.cone
    margin = cone_result.margin
    threshold = 2.0 / margin
    table = table or ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, max_check_depth), source_rows=None
        )
    )
    g = margin
    checked = 0
    depth = 0
    notes = []
    try:
        for n in range(1, max_check_depth + 1):
            if table.min_norm(n) ** 2 > threshold:
                depth = n - 1
                break
            lev = table.level(n)
            norms = table.norms(n)
            for i in np.flatnonzero(norms ** 2 <= threshold):
                m = Matrix2(*lev[i].ravel())
                try:
                    u_minus, _ = singular_directions(m)
                except DegenerateDirectionsError:
                    # sigma_1 ~ sigma_2 ~ 1: ||Mv|| >= 1/||M|| >= sin(g) ||M||
                    # holds for every direction, nothing to exclude
                    continue
                d = cone.point_clearance(u_minus)
                checked += 1
                if d <= 0.0:
                    return AlmostMultConstant(
                        0.0, 0.0, False, threshold, checked, n,
                        ("contracting direction of a checked word lies inside "
                         "the multicone; the sine bound does not apply",),
                    )
                g = min(g, d)
            depth = n
        else:
            return AlmostMultConstant(
                0.0, 0.0, False, threshold, checked, max_check_depth,
                (f"word norms failed to clear the threshold {threshold:.3g} "
                 f"by depth {max_check_depth}",),
            )
    except BudgetExceededError:
        return AlmostMultConstant(
            0.0, 0.0, False, threshold, checked, depth,
            (f"norm threshold {threshold:.3g} not cleared within the "
             "table's depth budget",),
        )
    c = math.sin(g) ** 2
    return AlmostMultConstant(
        c, g, True, threshold, checked, depth, tuple(notes)
    )


def empirical_almost_mult(
    cfg: SystemConfig, total_depth: int = 8, *,
    table: ProductTable | None = None,
) -> float:
    """Observed min of ||A_v A_w|| / (||A_v|| ||A_w||) over all splits of all
    words up to total_depth.  Diagnostic only; never feeds a certificate."""
    table = table or ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, total_depth), source_rows=None
        )
    )
    best = 1.0
    for n in range(2, total_depth + 1):
        whole = table.norms(n)
        for m in range(1, n):
            left = table.norms(m)
            right = table.norms(n - m)
            denom = np.outer(left, right).ravel()
            best = min(best, float((whole / denom).min()))
    return best


def verify_almost_mult(
    cfg: SystemConfig, c: float, total_depth: int = 6, *,
    table: ProductTable | None = None,
) -> int:
    """Count violations of ||A_v A_w|| >= c ||A_v|| ||A_w|| over every split
    of every word up to total_depth (0 for a sound constant)."""
    table = table or ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, total_depth), source_rows=None
        )
    )
    bad = 0
    for n in range(2, total_depth + 1):
        whole = table.norms(n)
        for m in range(1, n):
            denom = np.outer(table.norms(m), table.norms(n - m)).ravel()
            bad += int((whole < c * denom * (1.0 - 1e-12)).sum())
    return bad


# ---------------------------------------------------------------------------
# Certificates.

@dataclass(frozen=True)
class GrowthEstimate:
    """Least-squares growth of the slowest word: min ||A_w|| ~ c lambda^n."""

    lam: float
    c: float
    depths: tuple[int, ...]
    min_norms: tuple[float, ...]


def _growth_estimate(cfg: SystemConfig, depth: int, table: ProductTable) -> GrowthEstimate:
    ns, mins = [], []
    for n in range(1, depth + 1):
        if cfg.k ** n > 262144:
            break
        ns.append(n)
        mins.append(table.min_norm(n))
    logs = np.log(mins)
    if len(ns) >= 2:
        slope, _ = np.polyfit(ns, logs, 1)
    else:
        slope = logs[0]
    lam = math.exp(slope)
    c = min(m / lam ** n for n, m in zip(ns, mins))
    return GrowthEstimate(lam, c, tuple(ns), tuple(float(m) for m in mins))


class UHStatus(enum.Enum):
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not-certified"


@dataclass(frozen=True)
class UHCertificate:
    status: UHStatus
    forward: ConeSearchResult
    backward: ConeSearchResult
    relation: str | None
    cone_gap: float
    growth: GrowthEstimate
    almost_mult: AlmostMultConstant | None
    empirical_c: float
    notes: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status is UHStatus.CERTIFIED


def certify_uniform_hyperbolicity(
    cfg: SystemConfig,
    depth: int = 10,
    eps: float = 1e-3,
) -> UHCertificate:
    """Certificate route: a compact forward multicone, a compact backward
    multicone for the inverse system, and a positive gap between them.
    Growth statistics and the empirical split ratio are reported either way;
    only the cone route certifies.
    """
    notes = []
    forward = find_invariant_multicone(cfg, eps=eps)
    inv_cfg = dataclasses.replace(
        cfg,
        matrices=tuple(m.inverse() for m in cfg.matrices),
        source_rows=None,
    )
    backward = find_invariant_multicone(inv_cfg, eps=eps)
    relation = None
    gap = math.nan
    if forward.found and backward.found:
        gap = multicone_gap(forward.cone, backward.cone)
        relation = "disjoint" if gap > 0.0 else "intersecting"
    table = ProductTable(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, depth), source_rows=None
        )
    )
    growth = _growth_estimate(cfg, depth, table)
    empirical = empirical_almost_mult(cfg, min(depth, 8), table=table)
    certified = (
        forward.found
        and forward.kind is ConeKind.COMPACT
        and backward.found
        and backward.kind is ConeKind.COMPACT
        and relation == "disjoint"
    )
    am = None
    if certified:
        am = almost_mult_constant(cfg, forward, table=table)
        if not am.valid:
            notes.extend(am.notes)
    else:
        if not forward.found:
            notes.append("no forward invariant multicone found")
        elif forward.kind is not ConeKind.COMPACT:
            notes.append("forward multicone is strict-only, not compact")
        if not backward.found:
            notes.append("no backward invariant multicone found")
        elif backward.kind is not ConeKind.COMPACT:
            notes.append("backward multicone is strict-only, not compact")
        if relation == "intersecting":
            notes.append("forward and backward multicones intersect")
    return UHCertificate(
        status=UHStatus.CERTIFIED if certified else UHStatus.NOT_CERTIFIED,
        forward=forward,
        backward=backward,
        relation=relation,
        cone_gap=gap,
        growth=growth,
        almost_mult=am,
        empirical_c=empirical,
        notes=tuple(notes),
    )


class SDStatus(enum.Enum):
    CERTIFIED_VIA_INVARIANT_SET = "certified-via-invariant-set"
    REFUTED_VIA_IDENTITY_APPROACH = "refuted-via-identity-approach"
    EVIDENCE_ONLY = "evidence-only"


@dataclass(frozen=True)
class SDCertificate:
    status: SDStatus
    cone: ConeSearchResult | None
    min_dist_to_identity: float
    min_pairwise: float
    notes: tuple[str, ...] = ()

    @property
    def decided(self) -> bool:
        return self.status is not SDStatus.EVIDENCE_ONLY


def certify_semidiscrete(
    cfg: SystemConfig,
    depth: int = 10,
    eps: float = 1e-3,
) -> SDCertificate:
    """A strictly invariant multicone certifies semidiscreteness; products
    collapsing onto +-identity refute it; everything else stays evidence.
    The strict-only flavor of invariance carries its tolerance as a note.
    """
    notes = []
    cone = find_invariant_multicone(cfg, eps=eps)
    if cone.found:
        if cone.kind is ConeKind.STRICT_ONLY:
            notes.append(
                f"strict invariance verified at tolerance {eps}; margin "
                f"{cone.margin:.2e}"
            )
        return SDCertificate(
            SDStatus.CERTIFIED_VIA_INVARIANT_SET,
            cone, math.inf, math.inf, tuple(notes),
        )
    scan_depth = depth
    while cfg.k ** scan_depth > 4096 and scan_depth > 2:
        scan_depth -= 1
    prof = discreteness_profile(
        dataclasses.replace(
            cfg, depth_cap=max(cfg.depth_cap, scan_depth), source_rows=None
        ),
        scan_depth,
    )
    to_id = prof.final_min_to_identity
    pairwise = prof.final_min_pairwise
    if to_id < _IDENTITY_TOL:
        notes.append(
            f"products reach +-identity within {to_id:.1e} by depth {scan_depth}"
        )
        return SDCertificate(
            SDStatus.REFUTED_VIA_IDENTITY_APPROACH,
            cone, to_id, pairwise, tuple(notes),
        )
    notes.extend(cone.notes)
    if pairwise < 1e-3:
        notes.append(
            f"distinct products approach each other ({pairwise:.2e}); "
            "accumulation suggests a non-semidiscrete system"
        )
    return SDCertificate(
        SDStatus.EVIDENCE_ONLY, cone, to_id, pairwise, tuple(notes)
    )
