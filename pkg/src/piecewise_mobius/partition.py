"""Partitions of the sphere into regions cut out by circlines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoRegion
from .sphere import (
    Circline,
    MoebiusMap,
    Side,
    homogeneous,
    homogeneous_array,
    points_from_homogeneous,
    random_sphere_points,
)

BOUNDARY = 0
TOL_B = 1e-9


@dataclass(frozen=True)
class Region:
    """Intersection of open half-spheres ``{z : side(C, z) == required}``."""

    constraints: tuple[tuple[Circline, Side], ...]
    index: int
    witness: complex | None = None

    def __post_init__(self):
        for _, s in self.constraints:
            if s is Side.ON:
                raise ValueError("a region constraint must be INSIDE or OUTSIDE")
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def signed_values(self, h: np.ndarray) -> np.ndarray:
        """Per-constraint values, sign-adjusted so that negative means satisfied.

        Shape ``(len(constraints), n)``.
        """
        return np.array([c.values(h) * (1.0 if s is Side.INSIDE else -1.0)
                         for c, s in self.constraints]).reshape(len(self.constraints), -1)

    def contains(self, z: complex, tol: float = TOL_B) -> bool:
        return bool(self.contains_array(np.array([homogeneous(z)]), tol)[0])

    def contains_array(self, h: np.ndarray, tol: float = TOL_B) -> np.ndarray:
        return np.all(self.signed_values(h) < -tol, axis=0)

    def in_closure_array(self, h: np.ndarray, tol: float = TOL_B) -> np.ndarray:
        return np.all(self.signed_values(h) <= tol, axis=0)

    def transported(self, g: MoebiusMap) -> "Region":
        w = None if self.witness is None else g(self.witness)
        return Region(tuple((c.image(g), s) for c, s in self.constraints), self.index, w)


@dataclass
class ValidationReport:
    samples: int
    boundary_hits: int = 0
    overlap_count: int = 0
    gap_count: int = 0
    overlaps: list = field(default_factory=list)  # example points, capped
    gaps: list = field(default_factory=list)
    bad_witnesses: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return self.overlap_count + self.gap_count + len(self.bad_witnesses)

    @property
    def ok(self) -> bool:
        return self.violations == 0


class Partition:
    """``K >= 2`` regions whose closures cover the sphere.

    ``boundary`` lists each constraint circline once (as a point set); since a
    circline is a simple closed curve on the sphere, each entry is one
    connected component of the discontinuity set.
    """

    def __init__(self, regions):
        regions = list(regions)
        if len(regions) < 2:
            raise ValueError("a partition needs at least two regions")
        for k, r in enumerate(regions, start=1):
            if r.index != k:
                raise ValueError(f"region {k} carries index {r.index}")
        self.regions: list[Region] = regions
        boundary: list[Circline] = []
        for r in regions:
            for c, _ in r.constraints:
                if not any(c.same_set(b) for b in boundary):
                    boundary.append(c.canonical())
        self.boundary: list[Circline] = boundary

    @property
    def K(self) -> int:
        return len(self.regions)

    def __repr__(self) -> str:
        return f"Partition(K={self.K}, boundary={len(self.boundary)} circlines)"

    def boundary_components(self) -> list[Circline]:
        return list(self.boundary)

    def boundary_index(self, c: Circline) -> int:
        for j, b in enumerate(self.boundary):
            if b.same_set(c):
                return j
        raise KeyError(c)

    def locate(self, z: complex, tol: float = TOL_B) -> int:
        """Region index ``1..K`` containing ``z``, or :data:`BOUNDARY`."""
        k = int(self.locate_array(np.array([homogeneous(z)]), tol)[0])
        if k < 0:
            raise NoRegion(f"no region contains {z!r}")
        return k

    def locate_array(self, h: np.ndarray, tol: float = TOL_B) -> np.ndarray:
        """Vectorised :meth:`locate`; ``-1`` marks points claimed by no region."""
        out = np.full(h.shape[0], -1, dtype=np.int64)
        near = np.zeros(h.shape[0], dtype=bool)
        for c in self.boundary:
            near |= np.abs(c.values(h)) <= tol
        for r in reversed(self.regions):
            out[r.contains_array(h, tol)] = r.index
        out[near] = BOUNDARY
        return out

    def validate(self, samples: int = 100_000, seed: int = 0,
                 tol: float = TOL_B, max_reported: int = 20) -> ValidationReport:
        """Statistical check of disjointness and covering on uniform samples."""
        rng = np.random.default_rng(seed)
        h = random_sphere_points(samples, rng)
        near = np.zeros(samples, dtype=bool)
        for c in self.boundary:
            near |= np.abs(c.values(h)) <= tol
        claims = np.zeros(samples, dtype=np.int64)
        for r in self.regions:
            claims += r.contains_array(h, tol)
        report = ValidationReport(samples=samples, boundary_hits=int(near.sum()))
        pts = points_from_homogeneous(h)
        over = np.flatnonzero(~near & (claims > 1))
        gap = np.flatnonzero(~near & (claims == 0))
        report.overlap_count, report.gap_count = int(over.size), int(gap.size)
        report.overlaps = [complex(pts[i]) for i in over[:max_reported]]
        report.gaps = [complex(pts[i]) for i in gap[:max_reported]]
        for r in self.regions:
            if r.witness is None or not r.contains(r.witness, tol):
                report.bad_witnesses.append(r.index)
        return report

    def transported(self, g: MoebiusMap) -> "Partition":
        return Partition([r.transported(g) for r in self.regions])


def disk_partition(center: complex, radius: float,
                   witness_in: complex | None = None,
                   witness_out: complex | None = None) -> Partition:
    """Two regions: the open disk (index 1) and the exterior of its closure (index 2)."""
    c = Circline.circle(center, radius)
    center = complex(center)
    w_in = center if witness_in is None else witness_in
    w_out = center + 2 * radius if witness_out is None else witness_out
    return Partition([
        Region(((c, Side.INSIDE),), 1, w_in),
        Region(((c, Side.OUTSIDE),), 2, w_out),
    ])


def locate_points(partition: Partition, points, tol: float = TOL_B) -> np.ndarray:
    return partition.locate_array(homogeneous_array(points), tol)
