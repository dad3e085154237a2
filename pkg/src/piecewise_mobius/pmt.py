"""Piecewise Möbius transformations: evaluation, orbits, itineraries, words."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .partition import BOUNDARY, TOL_B, Partition
from .sphere import (
    MoebiusMap,
    Side,
    chordal_dist,
    compose_all,
    homogeneous,
    normalize_homogeneous,
)

Word = tuple[int, ...]

MINIMALITY_TOL = 1e-9


class Termination(Enum):
    MAX_ITERATIONS = "max_iterations"
    HIT_BOUNDARY = "hit_boundary"
    CONVERGED = "converged"
    NUMERICAL_LOSS = "numerical_loss"


class Consistency(Enum):
    CONSISTENT = "consistent"
    ON_CLOSURE = "consistent_on_closure"
    INCONSISTENT = "inconsistent"


@dataclass
class OrbitRecord:
    points: list[complex]
    itinerary: list[int]
    termination: Termination
    step: int | None = None     # boundary step for HIT_BOUNDARY
    limit: complex | None = None  # last point for CONVERGED

    @property
    def hit_boundary(self) -> bool:
        return self.termination is Termination.HIT_BOUNDARY


@dataclass
class PMT:
    """A partition plus one Möbius map per region (``maps[k-1]`` acts on region ``k``)."""

    partition: Partition
    maps: list[MoebiusMap]
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.maps = list(self.maps)
        if len(self.maps) != self.partition.K:
            raise ValueError(f"{len(self.maps)} maps for {self.partition.K} regions")
        self._inverses = [m.inverse() for m in self.maps]
        bad = self.minimality_violations()
        if bad:
            raise ValueError(f"partition is not minimal for the maps: regions {bad}")

    @property
    def K(self) -> int:
        return self.partition.K

    @property
    def regions(self):
        return self.partition.regions

    @property
    def boundary(self):
        return self.partition.boundary

    def f(self, k: int) -> MoebiusMap:
        return self.maps[k - 1]

    def f_inv(self, k: int) -> MoebiusMap:
        return self._inverses[k - 1]

    def minimality_violations(self) -> list[tuple[int, int]]:
        """Pairs of regions sharing a boundary circline but carrying the same map."""
        out = []
        regs = self.partition.regions
        for i in range(len(regs)):
            for j in range(i + 1, len(regs)):
                shared = any(ci.same_set(cj) for ci, _ in regs[i].constraints
                             for cj, _ in regs[j].constraints)
                if shared and self.maps[i].distance(self.maps[j]) <= MINIMALITY_TOL:
                    out.append((i + 1, j + 1))
        return out

    def locate(self, z: complex, tol: float = TOL_B) -> int:
        return self.partition.locate(z, tol)

    def __call__(self, z: complex, tol: float = TOL_B) -> complex | None:
        """``F(z)``, or ``None`` on the discontinuity set."""
        k = self.partition.locate(z, tol)
        if k == BOUNDARY:
            return None
        return self.maps[k - 1](z)

    apply = __call__

    def step_array(self, h: np.ndarray, tol: float = TOL_B) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised step on homogeneous coordinates.

        Returns the images (normalised) and the located region indices;
        points on the boundary or in no region are left unchanged.
        """
        k = self.partition.locate_array(h, tol)
        out = h.copy()
        for idx, m in enumerate(self.maps, start=1):
            sel = k == idx
            if sel.any():
                out[sel] = m.apply_homogeneous(h[sel])
        return normalize_homogeneous(out), k

    def word_map(self, word: Sequence[int]) -> MoebiusMap:
        """``f_{w_n} ∘ ... ∘ f_{w_1}`` for the word ``w_1 ... w_n``."""
        return compose_all(self.f(k) for k in word)

    def orbit(self, z: complex, n: int = 1000, tol: float = TOL_B,
              tol_conv: float = 1e-6, patience: int = 10) -> OrbitRecord:
        """Iterate up to ``n`` steps.

        Stops on the discontinuity set, or once ``patience`` consecutive
        chordal steps are all below ``tol_conv``.
        """
        points = [z]
        itinerary: list[int] = []
        small = 0
        for i in range(n):
            k = self.partition.locate(z, tol)
            if k == BOUNDARY:
                return OrbitRecord(points, itinerary, Termination.HIT_BOUNDARY, step=i)
            w = self.maps[k - 1](z)
            itinerary.append(k)
            if w != w:  # NaN
                return OrbitRecord(points, itinerary, Termination.NUMERICAL_LOSS, step=i)
            points.append(w)
            small = small + 1 if chordal_dist(z, w) < tol_conv else 0
            z = w
            if small >= patience:
                return OrbitRecord(points, itinerary, Termination.CONVERGED, limit=w)
        return OrbitRecord(points, itinerary, Termination.MAX_ITERATIONS)

    def itinerary_consistent(self, z: complex, word: Sequence[int],
                             tol: float = TOL_B) -> Consistency:
        """Does the orbit of ``z`` under the prescribed maps visit the prescribed regions?"""
        on_closure = False
        for k in word:
            region = self.partition.regions[k - 1]
            for c, s in region.constraints:
                v = c.value(z) * (1.0 if s is Side.INSIDE else -1.0)
                if v > tol:
                    return Consistency.INCONSISTENT
                if v >= -tol:
                    on_closure = True
            z = self.maps[k - 1](z)
        return Consistency.ON_CLOSURE if on_closure else Consistency.CONSISTENT

    def clearance(self, z: complex) -> float:
        """Smallest chordal distance from ``z`` to the discontinuity set."""
        h = np.array([homogeneous(z)])
        return float(min(c.chordal_distances(h)[0] for c in self.partition.boundary))


def word_map(F: PMT, word: Sequence[int]) -> MoebiusMap:
    return F.word_map(word)
