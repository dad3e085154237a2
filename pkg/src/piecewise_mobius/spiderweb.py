"""Exact pre-discontinuity arcs by backward iteration with clipping.

Level 0 holds the boundary circlines.  A level ``n + 1`` arc is a piece of
``f_k^{-1}(a)`` for a level ``n`` arc ``a`` that lies in the open region
``R_k``; its word is ``(k,) + a.word`` so that applying ``f_{word[0]}``,
``f_{word[1]}``, ... carries it onto the boundary component it came from.

Arc spans are angle intervals ``[start, start + length]`` (counter-clockwise)
on the circline's own parameterisation ``theta -> P(e^{i theta})`` (see
:meth:`Circline.parameterization`); ``length == 2 pi`` means the full circline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np
from scipy.spatial import cKDTree

from .errors import DepthOverflow
from .pmt import PMT, Word
from .sphere import (
    Circline,
    IntersectionKind,
    MoebiusMap,
    chordal_dist_array,
    circline_intersect,
    homogeneous_array,
    normalize_homogeneous,
    sphere_coords,
)

TWO_PI = 2 * math.pi
UNIT_CIRCLE = Circline.circle(0, 1)
MIN_ARC = 1e-5
ARC_CAP = 1_000_000
_LENGTH_SEGMENTS = 16


@dataclass(frozen=True)
class Arc:
    circline: Circline
    start: float
    length: float
    word: Word
    level: int
    source_component: int
    witness: complex
    chord: float = field(default=math.nan, compare=False, repr=False)  # cached chordal length

    @property
    def full(self) -> bool:
        return self.length >= TWO_PI - 1e-12

    @property
    def end(self) -> float:
        return self.start + self.length

    def angles(self, n: int, endpoints: bool = True) -> np.ndarray:
        if self.full:
            return self.start + TWO_PI * np.arange(n) / n
        if endpoints:
            return self.start + self.length * np.linspace(0.0, 1.0, n)
        return self.start + self.length * (np.arange(n) + 0.5) / n

    def sample_homogeneous(self, n: int, endpoints: bool = True) -> np.ndarray:
        P = self.circline.parameterization()
        w = np.exp(1j * self.angles(n, endpoints))
        return normalize_homogeneous(P.apply_homogeneous(np.stack([w, np.ones_like(w)], axis=1)))

    def sample(self, n: int, endpoints: bool = True) -> list[complex]:
        P = self.circline.parameterization()
        return [P(cmath.exp(1j * t)) for t in self.angles(n, endpoints)]

    def chordal_length(self, segments: int = _LENGTH_SEGMENTS) -> float:
        if segments == _LENGTH_SEGMENTS and not math.isnan(self.chord):
            return self.chord
        return _polyline_length(self.circline.parameterization(), self.start,
                                self.length, segments)


@dataclass
class SpiderwebApprox:
    levels: list[list[Arc]]
    min_arc: float
    truncated_counts: list[int] = field(default_factory=list)
    truncated_lengths: list[float] = field(default_factory=list)
    lengths: list[float] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def counts(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def arcs(self, max_level: int | None = None) -> Iterator[Arc]:
        for n, lv in enumerate(self.levels):
            if max_level is not None and n > max_level:
                break
            yield from lv

    def sample_points(self, per_arc: int = 30, max_level: int | None = None,
                      spacing: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Homogeneous sample points of all arcs plus their levels.

        With ``spacing`` the number of samples per arc adapts to its chordal
        length (at least ``per_arc``).
        """
        hs, lv = [], []
        for a in self.arcs(max_level):
            n = per_arc
            if spacing:
                n = max(per_arc, int(math.ceil(a.chordal_length() / spacing)) + 1)
            hs.append(a.sample_homogeneous(n))
            lv.append(np.full(n, a.level))
        if not hs:
            return np.empty((0, 2), dtype=complex), np.empty(0, dtype=int)
        return np.concatenate(hs), np.concatenate(lv)


def _polyline_length(P: MoebiusMap, start: float, length: float, segments: int) -> float:
    t = start + length * np.linspace(0.0, 1.0, segments + 1)
    w = np.exp(1j * t)
    h = normalize_homogeneous(P.apply_homogeneous(np.stack([w, np.ones_like(w)], axis=1)))
    return float(chordal_dist_array(h[:-1], h[1:]).sum())


def _angle(w: complex) -> float:
    return math.atan2(w.imag, w.real) % TWO_PI


def _cut_angles(Q: MoebiusMap, constraint: Circline) -> list[float] | None:
    """Parameters ``theta`` where ``Q(e^{i theta})`` meets ``constraint``.

    ``None`` when the whole parameter circle lies on the constraint.
    """
    pulled = constraint.image(Q.inverse())
    inter = circline_intersect(UNIT_CIRCLE, pulled)
    if inter.kind is IntersectionKind.COINCIDENT:
        return None
    return [_angle(w) for w in inter.points]


def _intervals(start: float, length: float, full: bool, cuts: list[float]) -> list[tuple[float, float]]:
    if full:
        if not cuts:
            return [(0.0, TWO_PI)]
        cs = sorted(set(cuts))
        out = []
        for i, c in enumerate(cs):
            nxt = cs[(i + 1) % len(cs)]
            ln = (nxt - c) % TWO_PI
            out.append((c, ln if ln > 0 else TWO_PI))
        return out
    offs = sorted({(c - start) % TWO_PI for c in cuts})
    offs = [o for o in offs if 1e-13 < o < length - 1e-13]
    bounds = [0.0] + offs + [length]
    return [(start + bounds[i], bounds[i + 1] - bounds[i]) for i in range(len(bounds) - 1)]


def preimage_pieces(F: PMT, arc: Arc, k: int, min_arc: float = MIN_ARC) -> tuple[list[Arc], int, float]:
    """Pieces of ``f_k^{-1}(arc)`` inside ``R_k``.

    Returns the kept arcs plus the count and total chordal length of pieces
    dropped for being shorter than ``min_arc``.
    """
    g = F.f_inv(k)
    region = F.partition.regions[k - 1]
    Q = g @ arc.circline.parameterization()
    cuts: list[float] = []
    for c, _ in region.constraints:
        cs = _cut_angles(Q, c)
        if cs is None:
            return [], 0, 0.0
        cuts.extend(cs)
    target = arc.circline.image(g)
    Pt = target.parameterization()
    T = Pt.inverse() @ Q
    preserving = abs(T.b) < abs(T.d)
    kept, dropped, dropped_len = [], 0, 0.0
    for s, ln in _intervals(arc.start, arc.length, arc.full, cuts):
        mid = s + ln / 2
        pm = Q(cmath.exp(1j * mid))
        if not region.contains(pm, tol=1e-12):
            continue
        if arc.full and ln >= TWO_PI - 1e-12:
            new_start, new_len = 0.0, TWO_PI
        else:
            a0 = _angle(T(cmath.exp(1j * s)))
            a1 = _angle(T(cmath.exp(1j * (s + ln))))
            if preserving:
                new_start, new_len = a0, (a1 - a0) % TWO_PI
            else:
                new_start, new_len = a1, (a0 - a1) % TWO_PI
            if new_len < 1e-13:
                new_len = TWO_PI if ln > math.pi else new_len
        length = _polyline_length(Pt, new_start, new_len, _LENGTH_SEGMENTS)
        if length < min_arc:
            dropped += 1
            dropped_len += length
            continue
        kept.append(Arc(target, new_start, new_len, (k,) + arc.word, arc.level + 1,
                        arc.source_component, pm, length))
    return kept, dropped, dropped_len


def _sort_key(a: Arc):
    return (a.word, a.source_component, round(a.start, 12))


def backward_arcs(F: PMT, depth: int, min_arc: float = MIN_ARC,
                  cap: int = ARC_CAP) -> SpiderwebApprox:
    """Levels ``0..depth`` of ``∪ F^{-n}(B)`` as clipped circline arcs."""
    level0 = []
    for j, c in enumerate(F.partition.boundary):
        w = c.parameterization()(1j)
        level0.append(Arc(c, 0.0, TWO_PI, (), 0, j, w))
    S = SpiderwebApprox(levels=[level0], min_arc=min_arc, truncated_counts=[0],
                        truncated_lengths=[0.0],
                        lengths=[sum(a.chordal_length() for a in level0)])
    total = len(level0)
    for _ in range(depth):
        nxt: list[Arc] = []
        tc, tl = 0, 0.0
        for arc in S.levels[-1]:
            for k in range(1, F.K + 1):
                kept, dropped, dl = preimage_pieces(F, arc, k, min_arc)
                nxt.extend(kept)
                tc += dropped
                tl += dl
            if total + len(nxt) > cap:
                raise DepthOverflow(f"more than {cap} arcs by level {len(S.levels)}")
        nxt.sort(key=_sort_key)
        total += len(nxt)
        S.levels.append(nxt)
        S.truncated_counts.append(tc)
        S.truncated_lengths.append(tl)
        S.lengths.append(sum(a.chordal_length() for a in nxt))
    return S


def extend(F: PMT, S: SpiderwebApprox, depth: int, cap: int = ARC_CAP) -> SpiderwebApprox:
    """Deepen ``S`` to ``depth`` (recomputing; levels already present are unchanged)."""
    if depth <= S.depth:
        return S
    return backward_arcs(F, depth, S.min_arc, cap)


def distance_to_arcs(S: SpiderwebApprox, z: complex, max_level: int | None = None,
                     per_arc: int = 256) -> float:
    """Chordal distance from ``z`` to the arcs (see :func:`distances_to_arcs`)."""
    return float(distances_to_arcs(S, [z], max_level, per_arc)[0])


def distances_to_arcs(S: SpiderwebApprox, points, max_level: int | None = None,
                      per_arc: int = 8) -> np.ndarray:
    """Chordal distance from each point to the union of arcs up to ``max_level``.

    The nearest sample gives an upper bound; a point whose foot on an arc's
    circline falls inside the arc's span gets the exact circline distance.
    """
    hq = homogeneous_array(points)
    best = np.full(hq.shape[0], math.inf)
    hs, _ = S.sample_points(per_arc=per_arc, max_level=max_level)
    if hs.shape[0] == 0:
        return best
    tree = cKDTree(sphere_coords(hs))
    best, _ = tree.query(sphere_coords(hq))
    for a in S.arcs(max_level):
        d = a.circline.chordal_distances(hq)
        closer = d < best
        if not closer.any():
            continue
        if not a.full:
            closer &= _in_span_array(a, hq)
        best = np.where(closer, d, best)
    return best


def _in_span_array(a: Arc, h: np.ndarray) -> np.ndarray:
    w = a.circline.parameterization().inverse().apply_homogeneous(h)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = w[:, 0] / w[:, 1]
    ok = np.isfinite(w) & (w != 0)
    off = (np.angle(np.where(ok, w, 1)) - a.start) % TWO_PI
    return ok & (off <= a.length)


def _angle_in_span(a: Arc, z: complex) -> bool:
    if a.full:
        return True
    P = a.circline.parameterization()
    # project z onto the circle through the parameter plane
    w = P.inverse()(z)
    if cmath.isinf(w) or w == 0:
        return False
    off = (_angle(w) - a.start) % TWO_PI
    return off <= a.length


# -- text export ---------------------------------------------------------------

ARC_HEADER = ("# piecewise-mobius arcs v1\n"
              "# level word circline(A,B_re,B_im,D) span(theta0,theta1) source\n")


def format_word(word: Iterable[int]) -> str:
    word = tuple(word)
    return ".".join(str(k) for k in word) if word else "-"


def parse_word(s: str) -> Word:
    return () if s == "-" else tuple(int(t) for t in s.split("."))


def write_arcs(S: SpiderwebApprox, fh: TextIO) -> None:
    fh.write(ARC_HEADER)
    for a in S.arcs():
        A, Br, Bi, D = a.circline.coefficients
        fh.write(f"{a.level} {format_word(a.word)} "
                 f"circline({A!r},{Br!r},{Bi!r},{D!r}) "
                 f"span({a.start!r},{a.end!r}) {a.source_component}\n")


def read_arcs(fh: TextIO) -> list[dict]:
    """Parse an arc file into plain records (level, word, circline, span, source)."""
    out = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        level, word, circ, span, src = line.split()
        coeffs = [float(x) for x in circ[len("circline("):-1].split(",")]
        t0, t1 = (float(x) for x in span[len("span("):-1].split(","))
        out.append({
            "level": int(level),
            "word": parse_word(word),
            "circline": Circline(coeffs[0], complex(coeffs[1], coeffs[2]), coeffs[3]),
            "span": (t0, t1),
            "source": int(src),
        })
    return out


def arc_points(S: SpiderwebApprox, level: int, n: int = 4) -> list[complex]:
    pts: list[complex] = []
    for a in S.levels[level] if level < len(S.levels) else []:
        pts.extend(a.sample(n))
    return pts


def homogeneous_points(points) -> np.ndarray:
    return homogeneous_array(points)
