"""Periodic points, limit sets and the hyperbolicity / expansivity / Schottky checks."""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy import ndimage

from .errors import BadParameter, DepthOverflow
from .partition import BOUNDARY, TOL_B
from .pmt import PMT, Consistency, Termination, Word
from .raster import (
    Attractor,
    Label,
    SphereWindow,
    classify_points,
    raster_classify,
)
from .spiderweb import SpiderwebApprox, backward_arcs, distance_to_arcs
from .sphere import (
    MapClass,
    chordal_dist,
    homogeneous_array,
    is_inf,
    random_sphere_points,
    sphere_coords,
    points_from_homogeneous,
    spherical_deriv,
)

NEUTRAL_TOL = 1e-7
ROOT_ORDER = 64
WORD_CAP = 1_000_000
GHOST_ARC_TOL = 1e-6
GHOST_SEEDS = 8


class Kind(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    IDENTITY = "identity"
    GHOST = "ghost"

    @property
    def neutral(self) -> bool:
        return self in (Kind.ELLIPTIC, Kind.PARABOLIC, Kind.IDENTITY)


@dataclass(frozen=True)
class PeriodicPoint:
    point: complex
    word: Word
    multiplier: complex
    kind: Kind
    consistency: Consistency
    map_class: MapClass

    @property
    def period(self) -> int:
        return len(self.word)

    def as_dict(self) -> dict:
        return {"point": self.point, "word": list(self.word), "multiplier": self.multiplier,
                "kind": self.kind.value, "consistency": self.consistency.value,
                "period": self.period}


# -- word enumeration ----------------------------------------------------------

def lyndon_words(K: int, max_len: int) -> Iterator[Word]:
    """Aperiodic words minimal among their rotations, by Duval's algorithm.

    One word per primitive cycle of length ``<= max_len`` over ``1..K``.
    """
    w = [0]
    while w:
        yield tuple(x + 1 for x in w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == K - 1:
            w.pop()
        if w:
            w[-1] += 1


def primitive_words(K: int, max_len: int) -> list[Word]:
    if max_len < 1:
        raise BadParameter("max_len must be at least 1")
    if K ** max_len > WORD_CAP:
        raise DepthOverflow(f"{K}^{max_len} words exceeds the cap of {WORD_CAP}")
    return sorted(lyndon_words(K, max_len), key=lambda w: (len(w), w))


def kind_from_multiplier(m: complex, map_class: MapClass, tol: float = NEUTRAL_TOL) -> Kind:
    if map_class is MapClass.PARABOLIC:
        return Kind.PARABOLIC
    r = abs(m)
    if r < 1 - tol:
        return Kind.ATTRACTING
    if r > 1 + tol:
        return Kind.REPELLING
    theta = cmath.phase(m) / (2 * math.pi)
    for q in range(1, ROOT_ORDER + 1):
        if abs(theta * q - round(theta * q)) <= tol * q:
            return Kind.IDENTITY
    return Kind.ELLIPTIC


def _rotations(F: PMT, z: complex, word: Word) -> list[tuple[complex, Word]]:
    out = [(z, word)]
    for i in range(1, len(word)):
        z = F.f(word[i - 1])(z)
        out.append((z, word[i:] + word[:i]))
    return out


def _cycle_points(F: PMT, z: complex, word: Word) -> list[complex]:
    return [p for p, _ in _rotations(F, z, word)]


def find_periodic(F: PMT, max_len: int = 6, tol: float = 1e-8, tol_b: float = TOL_B,
                  spiderweb: SpiderwebApprox | None = None,
                  verify_ghosts: bool = True) -> list[PeriodicPoint]:
    """Census of periodic points up to period ``max_len``.

    Identity-class words are skipped (every point of their domain is periodic).
    Points whose itinerary only holds on region closures are kept when they
    pass ghost verification and dropped otherwise.
    """
    found: list[PeriodicPoint] = []
    S = spiderweb
    for word in primitive_words(F.K, max_len):
        M = F.word_map(word)
        cls = M.classify()
        if cls is MapClass.IDENTITY:
            continue
        for fp in M.fixed_points():
            cons = F.itinerary_consistent(fp.point, word, tol_b)
            if cons is Consistency.INCONSISTENT:
                continue
            kind = kind_from_multiplier(fp.multiplier, cls)
            if cons is Consistency.ON_CLOSURE:
                if kind is not Kind.ATTRACTING or not verify_ghosts:
                    continue
                if S is None:
                    S = backward_arcs(F, max(4, len(word) + 1))
                if not is_ghost(F, fp.point, word, S):
                    continue
                kind = Kind.GHOST
            for p, w in _rotations(F, fp.point, word):
                if any(chordal_dist(p, q.point) <= tol for q in found):
                    continue
                found.append(PeriodicPoint(p, w, fp.multiplier, kind, cons, cls))
    return found


def is_ghost(F: PMT, z: complex, word: Word, S: SpiderwebApprox,
             arc_tol: float = GHOST_ARC_TOL, seeds: int = GHOST_SEEDS,
             radius: float = 1e-3, cycles: int = 4000) -> bool:
    """Ghost test: near the spiderweb, and orbits from the adjacent region converge to ``z``."""
    if distance_to_arcs(S, z) > arc_tol:
        return False
    pts = ghost_seeds(F, z, word[0], seeds, radius)
    if not pts:
        return False
    n = len(word)
    for p in pts:
        ok = False
        for _ in range(cycles):
            if chordal_dist(p, z) < 1e-6:
                ok = True
                break
            for _ in range(n):
                p = F(p)
                if p is None:
                    break
            if p is None:
                break
        if not ok:
            return False
    return True


def ghost_seeds(F: PMT, z: complex, k: int, count: int = GHOST_SEEDS,
                radius: float = 1e-3) -> list[complex]:
    """Up to ``count`` points at chordal distance about ``radius`` from ``z`` inside ``R_k``."""
    region = F.partition.regions[k - 1]
    angles = 2 * math.pi * (np.arange(256) + 0.5) / 256
    if is_inf(z):
        cand = [1 / (radius / 2 * cmath.exp(1j * t)) for t in angles]
    else:
        s = radius * (1 + abs(z) ** 2) / 2
        cand = [z + s * cmath.exp(1j * t) for t in angles]
    inside = [c for c in cand if region.contains(c, 1e-12)]
    if not inside:
        return []
    step = max(1, len(inside) // count)
    return inside[::step][:count]


def classify_periodic(F: PMT, pp: PeriodicPoint, spiderweb: SpiderwebApprox | None = None) -> PeriodicPoint:
    """Re-derive the kind of ``pp``, running the ghost test for closure-only itineraries."""
    M = F.word_map(pp.word)
    cls = M.classify()
    kind = kind_from_multiplier(pp.multiplier, cls)
    if pp.consistency is Consistency.ON_CLOSURE and kind is Kind.ATTRACTING:
        S = spiderweb or backward_arcs(F, max(4, len(pp.word) + 1))
        if is_ghost(F, pp.point, pp.word, S):
            kind = Kind.GHOST
    return PeriodicPoint(pp.point, pp.word, pp.multiplier, kind, pp.consistency, cls)


def attracting_cycles(points: Sequence[PeriodicPoint]) -> list[list[PeriodicPoint]]:
    """Group attracting points into cycles (by rotation of their words)."""
    cycles: list[list[PeriodicPoint]] = []
    for p in points:
        if p.kind is not Kind.ATTRACTING:
            continue
        for cyc in cycles:
            if len(cyc[0].word) == len(p.word) and _is_rotation(cyc[0].word, p.word) \
                    and abs(cyc[0].multiplier - p.multiplier) < 1e-6:
                cyc.append(p)
                break
        else:
            cycles.append([p])
    return cycles


def _is_rotation(a: Word, b: Word) -> bool:
    return len(a) == len(b) and any(a[i:] + a[:i] == b for i in range(len(a)))


def attractors_for(points: Sequence[PeriodicPoint]) -> list[Attractor]:
    return [Attractor(i, tuple(p.point for p in cyc), f"cycle {'.'.join(map(str, cyc[0].word))}")
            for i, cyc in enumerate(attracting_cycles(points))]


# -- limit sets ----------------------------------------------------------------

def omega_limit_approx(F: PMT, z: complex, N: int = 2000, tail_fraction: float = 0.25,
                       radius: float = 1e-6, max_clusters: int | None = None) -> list[complex] | None:
    """Cluster representatives of the orbit tail, or ``None`` if the orbit hit B.

    Greedy clustering by chordal ``radius``.  With ``max_clusters`` the scan
    stops early once more clusters than that have appeared.
    """
    rec = F.orbit(z, n=N, tol_conv=-1.0)
    if rec.termination is Termination.HIT_BOUNDARY:
        return None
    pts = rec.points
    tail = pts[int(len(pts) * (1 - tail_fraction)):]
    X = sphere_coords(homogeneous_array(tail))
    reps: list[int] = []
    for i in range(len(tail)):
        if reps and np.min(np.linalg.norm(X[reps] - X[i], axis=1)) <= radius:
            continue
        reps.append(i)
        if max_clusters is not None and len(reps) > max_clusters:
            break
    return [tail[i] for i in reps]


def alpha_sample(F: PMT, S: SpiderwebApprox, budget: int = 200,
                 periodic: Sequence[PeriodicPoint] | None = None,
                 max_len: int = 6, per_arc: int = 2, levels: int | None = None) -> list[complex]:
    """Points approximating the alpha-limit set; ``[]`` signals an empty alpha.

    Repelling and parabolic periodic points come first, then points of the
    arcs in the deepest ``levels`` levels (default: the deeper half, never
    level 0), spread evenly up to ``budget``.
    """
    if S.depth < 3:
        raise BadParameter("alpha sampling needs a spiderweb of depth >= 3")
    if periodic is None:
        periodic = find_periodic(F, max_len, spiderweb=S)
    pts = [p.point for p in periodic if p.kind in (Kind.REPELLING, Kind.PARABOLIC)]
    arc_pts: list[complex] = []
    levels = max(1, S.depth // 2) if levels is None else levels
    for lv in S.levels[max(1, S.depth - levels + 1):]:
        for a in lv:
            arc_pts.extend(a.sample(per_arc))
    room = max(0, budget - len(pts))
    if arc_pts and room:
        idx = np.linspace(0, len(arc_pts) - 1, min(room, len(arc_pts))).round().astype(int)
        pts.extend(arc_pts[i] for i in sorted(set(idx)))
    return pts[:budget]


class AlphaStatus(Enum):
    EXPANDING = "expanding"
    NOT_EXPANDING = "not_expanding"
    EMPTY_ALPHA = "empty_alpha"


@dataclass
class AlphaExpansion:
    status: AlphaStatus
    N: int | None = None
    witness: complex | None = None
    derivatives: list[float] = field(default_factory=list)
    skipped: int = 0
    samples: int = 0

    @property
    def expanding(self) -> bool:
        return self.status is AlphaStatus.EXPANDING

    def as_dict(self) -> dict:
        return {"status": self.status.value, "N": self.N, "witness": self.witness,
                "min_derivative": min(self.derivatives) if self.derivatives else None,
                "skipped": self.skipped, "samples": self.samples}


def orbit_derivative(F: PMT, z: complex, N: int, tol: float = TOL_B) -> float | None:
    """``|(F^N)'(z)|_s``, or ``None`` when the orbit meets B within ``N`` steps."""
    d = 1.0
    for _ in range(N):
        k = F.partition.locate(z, tol)
        if k == BOUNDARY:
            return None
        d *= spherical_deriv(F.f(k), z)
        z = F.f(k)(z)
    return d


def alpha_expanding_check(F: PMT, samples: Sequence[complex], Nmax: int = 20,
                          margin: float = 1e-9) -> AlphaExpansion:
    if len(samples) == 0:
        return AlphaExpansion(AlphaStatus.EMPTY_ALPHA)
    worst = None
    for N in range(1, Nmax + 1):
        ders, skipped, low = [], 0, None
        for z in samples:
            d = orbit_derivative(F, z, N)
            if d is None:
                skipped += 1
                continue
            ders.append(d)
            if low is None or d < low[0]:
                low = (d, z)
        if not ders:
            break
        worst = (N, low, ders, skipped)
        if low[0] > 1 + margin:
            return AlphaExpansion(AlphaStatus.EXPANDING, N, None, ders, skipped, len(samples))
    if worst is None:
        return AlphaExpansion(AlphaStatus.NOT_EXPANDING, None, None, [], len(samples), len(samples))
    N, low, ders, skipped = worst
    return AlphaExpansion(AlphaStatus.NOT_EXPANDING, N, low[1], ders, skipped, len(samples))


# -- hyperbolicity -------------------------------------------------------------

class Verdict(Enum):
    HYPERBOLIC = "hyperbolic"
    NOT_HYPERBOLIC = "not_hyperbolic"
    INCONCLUSIVE = "inconclusive"


@dataclass
class HyperbolicityResult:
    verdict: Verdict
    reason: str
    periodic: list[PeriodicPoint]
    max_len: int
    seeds: int = 0
    seeds_unresolved: int = 0
    stray_limits: list[complex] = field(default_factory=list)
    unresolved_fraction: float | None = None
    iterations: int = 0

    @property
    def hyperbolic(self) -> bool:
        return self.verdict is Verdict.HYPERBOLIC

    @property
    def wandering_suspected(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def as_dict(self) -> dict:
        return {"verdict": self.verdict.value, "reason": self.reason, "max_len": self.max_len,
                "seeds": self.seeds, "seeds_unresolved": self.seeds_unresolved,
                "stray_limits": self.stray_limits,
                "unresolved_fraction": self.unresolved_fraction,
                "iterations": self.iterations,
                "periodic": [p.as_dict() for p in self.periodic]}


def capture_radius(F: PMT, cycles: Sequence[list[PeriodicPoint]], cap: float = 1e-3) -> float:
    """Chordal radius around the attracting cycle points inside which orbits are certainly caught.

    Bounded by the clearance of each cycle point from B and by ``1 - |m|``,
    so that the return map is still a contraction on the capture disk.
    """
    r = cap
    for cyc in cycles:
        m = abs(cyc[0].multiplier)
        r = min(r, 0.1 * (1 - m))
        for p in cyc:
            r = min(r, F.clearance(p.point) / 4)
    return r


def capture_iterations(cycles: Sequence[list[PeriodicPoint]], radius: float = 1e-6,
                       cap: int = 20_000) -> int:
    """Steps after which orbits in an immediate basin are within ``radius`` of the cycle."""
    n = 60
    for cyc in cycles:
        r = abs(cyc[0].multiplier)
        if r <= 0:
            continue
        n = max(n, int(math.ceil(math.log(radius / 4) / math.log(r))) * len(cyc[0].word) + 60)
    return min(n, cap)


def hyperbolicity_check(F: PMT, max_len: int = 6, seeds: int = 200, seed: int = 0,
                        raster_size: int = 64, periodic: Sequence[PeriodicPoint] | None = None,
                        tol_conv: float = 1e-6, unresolved_max: float = 0.01) -> HyperbolicityResult:
    pts = list(periodic) if periodic is not None else find_periodic(F, max_len)
    res = HyperbolicityResult(Verdict.HYPERBOLIC, "", pts, max_len)
    ghosts = [p for p in pts if p.kind is Kind.GHOST]
    if ghosts:
        res.verdict, res.reason = Verdict.NOT_HYPERBOLIC, f"ghost at {_fmt(ghosts[0].point)}"
        return res
    neutral = [p for p in pts if p.kind.neutral]
    if neutral:
        p = neutral[0]
        res.verdict = Verdict.NOT_HYPERBOLIC
        res.reason = f"neutral point {_fmt(p.point)} ({p.kind.value})"
        return res
    cycles = attracting_cycles(pts)
    if not cycles:
        res.verdict, res.reason = Verdict.NOT_HYPERBOLIC, "no attracting periodic points"
        return res
    atts = attractors_for(pts)
    capture = max(tol_conv, capture_radius(F, cycles))
    n_iter = capture_iterations(cycles, capture)
    res.iterations = n_iter

    rng = np.random.default_rng(seed)
    h = random_sphere_points(seeds, rng)
    labels, _ = classify_points(F, h, n_iter, 0.0, atts, capture)
    res.seeds = seeds
    stuck = np.flatnonzero(labels == Label.UNRESOLVED)
    res.seeds_unresolved = int(stuck.size)
    for i in stuck:
        z = complex(points_from_homogeneous(h[i:i + 1])[0])
        om = omega_limit_approx(F, z, N=2000, max_clusters=max_len)
        if om is not None and len(om) <= max_len:
            res.stray_limits.extend(om)

    R = raster_classify(F, SphereWindow(raster_size), n_iter, attractors=atts, tol_conv=capture)
    regular = R.labels != Label.BOUNDARY
    res.unresolved_fraction = float((R.labels[regular] == Label.UNRESOLVED).mean()) if regular.any() else 0.0

    if res.stray_limits:
        res.verdict = Verdict.INCONCLUSIVE
        res.reason = f"orbit limit {_fmt(res.stray_limits[0])} matches no catalogued cycle"
    elif stuck.size >= unresolved_max * seeds:
        res.verdict = Verdict.INCONCLUSIVE
        res.reason = f"{stuck.size} of {seeds} seeds not captured after {n_iter} steps"
    elif res.unresolved_fraction >= unresolved_max:
        res.verdict = Verdict.INCONCLUSIVE
        res.reason = f"{res.unresolved_fraction:.2%} of regular pixels unresolved (wandering suspected)"
    else:
        res.reason = f"{len(cycles)} attracting cycle(s), no neutral or ghost points up to period {max_len}"
    return res


# -- Schottky-type hypotheses --------------------------------------------------

class Placement(Enum):
    INSIDE = "inside"     # whole preimage circline lies in R_k
    OUTSIDE = "outside"   # misses R_k
    CUT = "cut"


@dataclass
class SchottkyLevel:
    level: int
    passed: bool
    cases: dict = field(default_factory=dict)   # level 1: k -> "3a" / "3b" / "3c" / "fail"
    witness: str | None = None

    def as_dict(self) -> dict:
        return {"level": self.level, "passed": self.passed,
                "cases": {str(k): v for k, v in self.cases.items()}, "witness": self.witness}


@dataclass
class SchottkyResult:
    levels: list[SchottkyLevel]

    @property
    def passed(self) -> bool:
        return all(lv.passed for lv in self.levels)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "levels": [lv.as_dict() for lv in self.levels]}


def schottky_hypothesis_check(F: PMT, S: SpiderwebApprox, depth: int | None = None) -> SchottkyResult:
    depth = S.depth if depth is None else depth
    if depth > S.depth:
        raise BadParameter(f"spiderweb depth {S.depth} < requested {depth}")
    levels: list[SchottkyLevel] = []
    if depth >= 1:
        lv = SchottkyLevel(1, True)
        for k in range(1, F.K + 1):
            place = []
            for j in range(len(F.partition.boundary)):
                arcs = [a for a in S.levels[1] if a.word == (k,) and a.source_component == j]
                if not arcs:
                    place.append(Placement.OUTSIDE)
                elif len(arcs) == 1 and arcs[0].full:
                    place.append(Placement.INSIDE)
                else:
                    place.append(Placement.CUT)
            inside = place.count(Placement.INSIDE)
            if Placement.CUT in place:
                case = "fail"
                j = place.index(Placement.CUT)
                lv.witness = lv.witness or f"f_{k}^-1(B_{j}) is cut by the boundary of R_{k}"
            elif inside == len(place):
                case = "3a"
            elif inside == 1:
                case = "3b"
            elif inside == 0:
                case = "3c"
            else:
                case = "fail"
                lv.witness = lv.witness or f"f_{k}^-1(B) meets R_{k} in {inside} of {len(place)} components"
            lv.cases[k] = case
            lv.passed &= case != "fail"
        levels.append(lv)
    for n in range(2, depth + 1):
        bad = [a for a in S.levels[n] if not a.full]
        w = None
        if bad:
            w = f"arc with word {'.'.join(map(str, bad[0].word))} is clipped"
        levels.append(SchottkyLevel(n, not bad, witness=w))
    return SchottkyResult(levels)


# -- aggregate report ----------------------------------------------------------

@dataclass
class StabilityConfig:
    max_len: int = 6
    depth: int = 5
    alpha_depth: int = 8
    alpha_budget: int = 200
    nmax: int = 20
    seeds: int = 200
    seed: int = 0
    raster_size: int = 64
    min_arc: float = 1e-5

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class StabilityReport:
    config: StabilityConfig
    map_classes: list[MapClass]
    hyperbolicity: HyperbolicityResult
    alpha: AlphaExpansion
    schottky: SchottkyResult
    arc_counts: list[int]

    @property
    def loxodromic_components(self) -> bool:
        return all(c is MapClass.LOXODROMIC for c in self.map_classes)

    @property
    def hyperbolic(self) -> bool:
        return self.hyperbolicity.hyperbolic

    @property
    def alpha_expanding(self) -> bool:
        return self.alpha.expanding

    @property
    def wandering_suspected(self) -> bool:
        return self.hyperbolicity.wandering_suspected

    @property
    def sufficient_conditions_met(self) -> bool:
        return (self.loxodromic_components and self.hyperbolic and self.alpha_expanding
                and self.schottky.passed)

    def as_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "map_classes": [c.value for c in self.map_classes],
            "loxodromic_components": self.loxodromic_components,
            "hyperbolicity": self.hyperbolicity.as_dict(),
            "alpha_expanding": self.alpha.as_dict(),
            "schottky": self.schottky.as_dict(),
            "arc_counts": self.arc_counts,
            "wandering_suspected": self.wandering_suspected,
            "sufficient_conditions_met": self.sufficient_conditions_met,
        }


def stability_report(F: PMT, config: StabilityConfig | None = None) -> StabilityReport:
    cfg = config or StabilityConfig()
    depth = max(cfg.depth, cfg.alpha_depth, 3)
    S = backward_arcs(F, depth, cfg.min_arc)
    periodic = find_periodic(F, cfg.max_len, spiderweb=S)
    hyp = hyperbolicity_check(F, cfg.max_len, cfg.seeds, cfg.seed, cfg.raster_size, periodic)
    samples = alpha_sample(F, S, cfg.alpha_budget, periodic)
    alpha = alpha_expanding_check(F, samples, cfg.nmax)
    sch = schottky_hypothesis_check(F, S, cfg.depth)
    return StabilityReport(cfg, [m.classify() for m in F.maps], hyp, alpha, sch, S.counts)


# -- parameter sweeps ----------------------------------------------------------

@dataclass(frozen=True)
class SignatureConfig:
    max_len: int = 4
    arc_depth: int = 3
    raster_size: int | None = None            # add raster component counts when set
    raster_depth: int = 4
    multiplier_quantum: float | None = None   # add quantised multipliers when set


@dataclass
class SweepGrid:
    re: np.ndarray
    im: np.ndarray
    signatures: list[list[tuple]]     # [row][col], row index follows im
    change: np.ndarray                # bool mask, same shape
    param: str = "lam"
    seconds: float = 0.0

    @property
    def shape(self) -> tuple[int, int]:
        return self.change.shape

    def distinct(self) -> list[tuple]:
        seen: list[tuple] = []
        for row in self.signatures:
            for s in row:
                if s not in seen:
                    seen.append(s)
        return seen

    def ids(self) -> np.ndarray:
        d = self.distinct()
        return np.array([[d.index(s) for s in row] for row in self.signatures])

    def as_dict(self) -> dict:
        return {"param": self.param, "re": self.re.tolist(), "im": self.im.tolist(),
                "signatures": [list(s) for s in self.distinct()],
                "cells": self.ids().tolist(), "change": self.change.astype(int).tolist(),
                "seconds": self.seconds}


def signature(F: PMT, cfg: SignatureConfig = SignatureConfig()) -> tuple:
    """Coarse conjugacy invariant of one PMT.

    ``(attracting periods, attracting cycle count, ghost count, arc counts)``
    where the arc counts are the number of pre-discontinuity arcs on levels
    ``1..arc_depth``.  Optional extras: the number of 4-connected regular
    pixel clusters of a shallow sphere raster, and quantised multipliers.
    """
    pts = find_periodic(F, cfg.max_len)
    cycles = attracting_cycles(pts)
    periods = tuple(sorted(len(c[0].word) for c in cycles))
    ghosts = len({tuple(sorted(p.word)) for p in pts if p.kind is Kind.GHOST})
    arcs = tuple(backward_arcs(F, cfg.arc_depth).counts[1:])
    sig: tuple = (periods, len(cycles), ghosts, arcs)
    if cfg.raster_size:
        R = raster_classify(F, SphereWindow(cfg.raster_size), cfg.raster_depth)
        sig = sig + (int(ndimage.label(R.labels != Label.BOUNDARY)[1]),)
    if cfg.multiplier_quantum:
        q = cfg.multiplier_quantum
        sig = sig + (tuple(sorted((round(c[0].multiplier.real / q) * q,
                                   round(c[0].multiplier.imag / q) * q) for c in cycles)),)
    return sig


def parameter_sweep(family: Callable[[complex], PMT], re_range: tuple[float, float],
                    im_range: tuple[float, float], shape: tuple[int, int],
                    cfg: SignatureConfig = SignatureConfig()) -> SweepGrid:
    """Signatures over a complex parameter rectangle (cell centres) plus the change locus."""
    rows, cols = shape
    re = np.linspace(*re_range, cols) if cols > 1 else np.array([sum(re_range) / 2])
    im = np.linspace(*im_range, rows) if rows > 1 else np.array([sum(im_range) / 2])
    t0 = time.perf_counter()
    sigs = [[signature(family(complex(x, y)), cfg) for x in re] for y in im]
    change = np.zeros((rows, cols), dtype=bool)
    for r in range(rows):
        for c in range(cols):
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols and sigs[rr][cc] != sigs[r][c]:
                    change[r, c] = True
    return SweepGrid(re, im, sigs, change, getattr(family, "param", "lam"),
                     time.perf_counter() - t0)


def _fmt(z: complex) -> str:
    if is_inf(z):
        return "inf"
    return f"{z.real:.9g}{z.imag:+.9g}i"
