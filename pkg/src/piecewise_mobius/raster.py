"""Pixel classification of the sphere and image export.

Each pixel centre is iterated.  If the orbit comes close to the
discontinuity set at step ``n < N`` the pixel is labelled
``BoundaryDepth(n)``; otherwise if it reaches a catalogued attracting cycle
it is labelled ``Basin(id)``; anything else is ``Unresolved``.

"Close" is measured in chordal units against a band of width ``eps_b``
pulled forward along the orbit: the test at step ``n`` is
``dist(F^n p, B) <= eps_b(p) * |(F^n)'(p)|_s``, so to first order a pixel is
flagged when its centre lies within ``eps_b`` of a level ``n`` preimage arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

import numpy as np
from PIL import Image
from scipy.spatial import cKDTree

from .pmt import PMT
from .sphere import (
    homogeneous_array,
    normalize_homogeneous,
    points_from_homogeneous,
    sphere_coords,
)

EPS_PIXELS = 1.5      # default band, in pixel diagonals
BAND_CAP = 0.25       # never let the pulled-forward band exceed this (chordal)


class Label(IntEnum):
    UNRESOLVED = 0
    BOUNDARY = 1
    BASIN = 2


@dataclass(frozen=True)
class PlaneWindow:
    """Axis-aligned rectangle ``[xmin, xmax] x [ymin, ymax]``, ``width x height`` pixels."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    width: int
    height: int

    @classmethod
    def centered(cls, center: complex, half_width: float, pixels: int) -> "PlaneWindow":
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width,
                   c.imag - half_width, c.imag + half_width, pixels, pixels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def pixel_centers(self) -> np.ndarray:
        """Complex pixel centres, row 0 at the top (largest imaginary part)."""
        dx = (self.xmax - self.xmin) / self.width
        dy = (self.ymax - self.ymin) / self.height
        x = self.xmin + dx * (np.arange(self.width) + 0.5)
        y = self.ymax - dy * (np.arange(self.height) + 0.5)
        return x[None, :] + 1j * y[:, None]

    def homogeneous(self) -> np.ndarray:
        return homogeneous_array(self.pixel_centers().ravel())

    def pixel_diagonals(self) -> np.ndarray:
        """Chordal length of each pixel's diagonal (first order)."""
        dx = (self.xmax - self.xmin) / self.width
        dy = (self.ymax - self.ymin) / self.height
        z = self.pixel_centers().ravel()
        return 2 * math.hypot(dx, dy) / (1 + np.abs(z) ** 2)

    def pixel_of(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Row, column and an in-window mask for points ``z``."""
        with np.errstate(invalid="ignore"):
            col = np.floor((z.real - self.xmin) / (self.xmax - self.xmin) * self.width)
            row = np.floor((self.ymax - z.imag) / (self.ymax - self.ymin) * self.height)
        ok = np.isfinite(z) & (col >= 0) & (col < self.width) & (row >= 0) & (row < self.height)
        return np.where(ok, row, 0).astype(int), np.where(ok, col, 0).astype(int), ok

    def describe(self) -> dict:
        return {"kind": "plane", "xmin": self.xmin, "xmax": self.xmax, "ymin": self.ymin,
                "ymax": self.ymax, "width": self.width, "height": self.height}


@dataclass(frozen=True)
class SphereWindow:
    """Whole sphere as two square charts side by side.

    The left chart shows ``z`` with ``|Re z|, |Im z| <= 1``; the right chart
    shows ``w = 1/z`` on the same square, so together they cover the sphere.
    """

    size: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.size, 2 * self.size

    @property
    def chart(self) -> PlaneWindow:
        return PlaneWindow(-1.0, 1.0, -1.0, 1.0, self.size, self.size)

    def pixel_centers(self) -> np.ndarray:
        w = self.chart.pixel_centers()
        with np.errstate(divide="ignore"):
            right = np.where(w == 0, np.inf, 1 / np.where(w == 0, 1, w))
        return np.concatenate([w, right], axis=1)

    def homogeneous(self) -> np.ndarray:
        w = self.chart.pixel_centers()
        left = np.stack([w.ravel(), np.ones(w.size)], axis=1)
        right = np.stack([np.ones(w.size), w.ravel()], axis=1)
        h = np.concatenate([left.reshape(self.size, self.size, 2),
                            right.reshape(self.size, self.size, 2)], axis=1)
        return normalize_homogeneous(h.reshape(-1, 2).astype(complex))

    def pixel_diagonals(self) -> np.ndarray:
        d = self.chart.pixel_diagonals().reshape(self.size, self.size)
        return np.concatenate([d, d], axis=1).ravel()

    def pixel_of(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        near = np.abs(z) <= 1
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(near, z, 1 / np.where(np.isfinite(z) & (z != 0), z, 1))
        w = np.where(np.isinf(z), 0, w)
        r, c, ok = self.chart.pixel_of(w)
        return r, np.where(near, c, c + self.size), ok

    def describe(self) -> dict:
        return {"kind": "sphere", "size": self.size}


Window = PlaneWindow | SphereWindow


@dataclass(frozen=True)
class Attractor:
    """An attracting cycle used to label basins."""

    id: int
    points: tuple[complex, ...]
    name: str = ""


@dataclass
class RasterImage:
    window: Window
    labels: np.ndarray   # Label per pixel, shape window.shape
    values: np.ndarray   # boundary depth or basin id (-1 when unresolved)
    N: int
    eps_b: float | None
    tol_conv: float
    attractors: list[Attractor] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    def fraction(self, label: Label, value: int | None = None, mask=None) -> float:
        sel = self.labels == label
        if value is not None:
            sel &= self.values == value
        if mask is not None:
            return float(sel[mask].mean()) if mask.any() else 0.0
        return float(sel.mean())

    def counts(self) -> dict[str, int]:
        out = {"unresolved": int((self.labels == Label.UNRESOLVED).sum()),
               "boundary": int((self.labels == Label.BOUNDARY).sum())}
        for a in self.attractors:
            out[f"basin_{a.id}"] = int(((self.labels == Label.BASIN) & (self.values == a.id)).sum())
        return out

    def params(self) -> dict:
        return {"window": self.window.describe(), "N": self.N, "eps_b": self.eps_b,
                "tol_conv": self.tol_conv}


def _step_with_derivative(F: PMT, h: np.ndarray, tol: float):
    """One vectorised step plus the spherical derivative of the applied map."""
    k = F.partition.locate_array(h, tol)
    out = h.copy()
    deriv = np.ones(h.shape[0])
    for idx, m in enumerate(F.maps, start=1):
        sel = k == idx
        if sel.any():
            img = m.apply_homogeneous(h[sel])
            n0 = np.abs(h[sel, 0]) ** 2 + np.abs(h[sel, 1]) ** 2
            n1 = np.abs(img[:, 0]) ** 2 + np.abs(img[:, 1]) ** 2
            deriv[sel] = n0 / n1
            out[sel] = img
    return normalize_homogeneous(out), k, deriv


def classify_points(F: PMT, h: np.ndarray, N: int, eps: np.ndarray | float,
                    attractors: Sequence[Attractor] = (), tol_conv: float = 1e-6,
                    tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Label homogeneous points; returns ``(labels, values)`` arrays."""
    n = h.shape[0]
    labels = np.full(n, Label.UNRESOLVED, dtype=np.int8)
    values = np.full(n, -1, dtype=np.int64)
    eps = np.broadcast_to(np.asarray(eps, dtype=float), (n,)).copy()
    active = np.arange(n)
    cur = h.copy()
    dprod = np.ones(n)
    att_h = [(a.id, homogeneous_array(a.points)) for a in attractors]
    for step in range(N):
        if active.size == 0:
            break
        x = cur[active]
        band = np.minimum(eps[active] * dprod[active], BAND_CAP)
        dist = np.full(active.size, np.inf)
        for c in F.partition.boundary:
            dist = np.minimum(dist, c.chordal_distances(x))
        hit = dist <= band
        labels[active[hit]] = Label.BOUNDARY
        values[active[hit]] = step
        # basin capture
        caught = np.zeros(active.size, dtype=bool)
        if att_h:
            X = sphere_coords(x)
            for aid, ah in att_h:
                d = np.min(np.linalg.norm(X[:, None, :] - sphere_coords(ah)[None, :, :], axis=2), axis=1)
                new = ~hit & ~caught & (d < tol_conv)
                labels[active[new]] = Label.BASIN
                values[active[new]] = aid
                caught |= new
        keep = ~hit & ~caught
        active = active[keep]
        if active.size == 0:
            break
        nxt, k, der = _step_with_derivative(F, cur[active], tol)
        lost = k <= 0
        cur[active] = nxt
        dprod[active] *= der
        active = active[~lost]
    return labels, values


def raster_classify(F: PMT, window: Window, N: int, eps_b: float | None = None,
                    attractors: Sequence[Attractor] = (), tol_conv: float = 1e-6) -> RasterImage:
    """Classify every pixel centre of ``window``.

    ``eps_b`` is the band half-width in chordal units; ``None`` means
    1.5 chordal pixel diagonals measured at each pixel.  Boundary proximity
    is checked at steps ``0..N-1`` and basin capture within ``tol_conv``
    (chordal) of a cycle point, so ``N = 0`` leaves every pixel unresolved.
    """
    h = window.homogeneous()
    eps = EPS_PIXELS * window.pixel_diagonals() if eps_b is None else float(eps_b)
    labels, values = classify_points(F, h, N, eps, attractors, tol_conv)
    shape = window.shape
    return RasterImage(window, labels.reshape(shape), values.reshape(shape), N, eps_b,
                       tol_conv, list(attractors))


def attractors_from_cycles(cycles) -> list[Attractor]:
    """Build :class:`Attractor` entries from ``(name, points)`` pairs."""
    return [Attractor(i, tuple(pts), name) for i, (name, pts) in enumerate(cycles)]


# -- exact vs raster -----------------------------------------------------------

@dataclass
class ConsistencyReport:
    boundary_pixels: int
    boundary_near_arcs: float   # fraction of boundary pixels near an arc of level <= depth
    arc_samples: int
    arcs_on_boundary: float     # fraction of arc samples landing in boundary pixels

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def consistency_check(S, R: RasterImage, radius_diagonals: float = 2.0) -> ConsistencyReport:
    """Cross-check a spiderweb against a raster of the same PMT."""
    diag = R.window.pixel_diagonals().reshape(R.shape)
    levels = min(S.depth, R.N - 1)
    spacing = float(diag.min()) / 2
    trees = []
    for n in range(levels + 1):
        hs, _ = S.sample_points(per_arc=32, max_level=n, spacing=spacing)
        trees.append(cKDTree(sphere_coords(hs)) if hs.shape[0] else None)

    bmask = R.labels == Label.BOUNDARY
    rows, cols = np.nonzero(bmask)
    h = R.window.homogeneous().reshape(R.shape[0], R.shape[1], 2)[rows, cols]
    X = sphere_coords(h) if rows.size else np.empty((0, 3))
    near = np.zeros(rows.size, dtype=bool)
    depth = R.values[rows, cols]
    for n in range(levels + 1):
        sel = depth == n
        if sel.any() and trees[n] is not None:
            d, _ = trees[n].query(X[sel])
            near[sel] = d <= radius_diagonals * diag[rows[sel], cols[sel]]
    # arc samples -> pixels
    hs, _ = S.sample_points(per_arc=32, max_level=levels, spacing=spacing)
    z = points_from_homogeneous(hs)
    r, c, ok = R.window.pixel_of(z)
    hits = bmask[r[ok], c[ok]]
    return ConsistencyReport(
        boundary_pixels=int(rows.size),
        boundary_near_arcs=float(near.mean()) if rows.size else 1.0,
        arc_samples=int(ok.sum()),
        arcs_on_boundary=float(hits.mean()) if hits.size else 1.0,
    )


# -- colours and image files ---------------------------------------------------

BOUNDARY_RGB = (0, 0, 0)
UNRESOLVED_RGB = (255, 255, 255)
BASIN_PALETTE = [
    (230, 85, 60), (70, 130, 200), (90, 175, 90), (240, 190, 60),
    (150, 90, 190), (60, 190, 190), (220, 120, 170), (140, 140, 60),
]


def basin_color(i: int) -> tuple[int, int, int]:
    return BASIN_PALETTE[i % len(BASIN_PALETTE)]


def to_rgb(R: RasterImage, heat: np.ndarray | None = None) -> np.ndarray:
    """``(H, W, 3)`` uint8 image.  ``heat`` (values in [0, 1]) darkens basin pixels."""
    img = np.empty(R.shape + (3,), dtype=np.uint8)
    img[:] = UNRESOLVED_RGB
    for a in R.attractors:
        sel = (R.labels == Label.BASIN) & (R.values == a.id)
        img[sel] = basin_color(a.id)
    if heat is not None:
        shade = 0.35 + 0.65 * np.clip(heat, 0, 1)
        basin = R.labels == Label.BASIN
        img[basin] = (img[basin] * shade[basin][:, None]).astype(np.uint8)
    img[R.labels == Label.BOUNDARY] = BOUNDARY_RGB
    return img


def alpha_heat(R: RasterImage, alpha_points: Sequence[complex]) -> np.ndarray:
    """Chordal distance from each pixel centre to the nearest sampled alpha point, scaled to [0, 1]."""
    if len(alpha_points) == 0:
        return np.ones(R.shape)
    tree = cKDTree(sphere_coords(homogeneous_array(alpha_points)))
    d, _ = tree.query(sphere_coords(R.window.homogeneous()))
    return (d / 2.0).reshape(R.shape)


def legend(R: RasterImage) -> str:
    lines = ["# colour legend", f"boundary {BOUNDARY_RGB} iterate within eps_b of B at step < {R.N}",
             f"unresolved {UNRESOLVED_RGB}"]
    for a in R.attractors:
        pts = ", ".join(_fmt(p) for p in a.points)
        lines.append(f"basin {a.id} {basin_color(a.id)} {a.name} [{pts}]".rstrip())
    return "\n".join(lines) + "\n"


def _fmt(z: complex) -> str:
    if not np.isfinite(z):
        return "inf"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def write_image(path, img: np.ndarray) -> None:
    """Write PNG or binary PPM (P6), chosen by the file extension."""
    fmt = "PPM" if str(path).lower().endswith(".ppm") else "PNG"
    Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8), "RGB").save(path, format=fmt)
