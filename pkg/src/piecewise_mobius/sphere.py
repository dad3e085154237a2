"""Riemann-sphere arithmetic: points, Möbius maps and circlines.

Points of the sphere are plain Python ``complex`` values; the point at
infinity is any complex number with an infinite component (the canonical
one is :data:`INF`).  Vectorised kernels work on homogeneous coordinates
``(u, v)`` with ``z = u / v``, stored as complex arrays of shape ``(n, 2)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DegenerateCircline, DegenerateMap, IdentityMap

INF = complex(math.inf, 0.0)

DET_TOL = 1e-14
IDENTITY_TOL = 1e-10
CLASSIFY_TOL = 1e-9
_SNAP_INF = 1e-15


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.cross is slow for single 3-vectors
    return np.stack([a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
                     a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
                     a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]], axis=-1)


def is_inf(z: complex) -> bool:
    return cmath.isinf(z)


def as_point(z) -> complex:
    """Coerce ``z`` to a sphere point, rejecting NaN."""
    if isinstance(z, str):
        if z.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        z = complex(z)
    z = complex(z)
    if cmath.isnan(z):
        raise ValueError("NaN is not a point of the sphere")
    if cmath.isinf(z):
        return INF
    return z


def homogeneous(z: complex) -> tuple[complex, complex]:
    return (1.0 + 0j, 0j) if cmath.isinf(z) else (complex(z), 1.0 + 0j)


def dehomogenize(u: complex, v: complex) -> complex:
    if abs(v) <= _SNAP_INF * abs(u):
        return INF
    return u / v


def to_sphere(z: complex) -> np.ndarray:
    """Stereographic image of ``z`` on the unit sphere (∞ is the north pole)."""
    if cmath.isinf(z):
        return np.array([0.0, 0.0, 1.0])
    s = 1.0 + abs(z) ** 2
    return np.array([2 * z.real / s, 2 * z.imag / s, (abs(z) ** 2 - 1.0) / s])


def from_sphere(X) -> complex:
    x1, x2, x3 = (float(t) for t in X)
    if x3 <= 0.0:
        return complex(x1, x2) / (1.0 - x3)
    w = complex(x1, -x2)
    if w == 0:
        return INF
    return (1.0 + x3) / w


def chordal_dist(p: complex, q: complex) -> float:
    """Chordal distance on the unit sphere; values lie in ``[0, 2]``."""
    u1, v1 = homogeneous(p)
    u2, v2 = homogeneous(q)
    num = abs(u1 * v2 - u2 * v1)
    den = math.hypot(abs(u1), abs(v1)) * math.hypot(abs(u2), abs(v2))
    return min(2.0, 2.0 * num / den)


# -- vectorised helpers -------------------------------------------------------

def homogeneous_array(points: Iterable[complex]) -> np.ndarray:
    pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                     dtype=complex).ravel()
    h = np.empty((pts.size, 2), dtype=complex)
    inf = ~np.isfinite(pts)
    h[:, 0] = np.where(inf, 1.0, pts)
    h[:, 1] = np.where(inf, 0.0, 1.0)
    return normalize_homogeneous(h)


def normalize_homogeneous(h: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.abs(h[:, 0]) ** 2 + np.abs(h[:, 1]) ** 2)
    return h / norm[:, None]


def points_from_homogeneous(h: np.ndarray) -> np.ndarray:
    u, v = h[:, 0], h[:, 1]
    inf = np.abs(v) <= _SNAP_INF * np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(inf, INF, u / np.where(inf, 1.0, v))
    return z


def sphere_coords(h: np.ndarray) -> np.ndarray:
    u, v = h[:, 0], h[:, 1]
    s = np.abs(u) ** 2 + np.abs(v) ** 2
    w = u * np.conj(v)
    return np.stack([2 * w.real / s, 2 * w.imag / s, (np.abs(u) ** 2 - np.abs(v) ** 2) / s],
                    axis=1)


def chordal_dist_array(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    num = np.abs(h1[:, 0] * h2[:, 1] - h2[:, 0] * h1[:, 1])
    den = np.sqrt((np.abs(h1) ** 2).sum(axis=1) * (np.abs(h2) ** 2).sum(axis=1))
    return np.minimum(2.0, 2.0 * num / den)


def random_sphere_points(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points distributed uniformly on the sphere, as homogeneous coordinates."""
    X = rng.normal(size=(n, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    h = np.empty((n, 2), dtype=complex)
    south = X[:, 2] <= 0
    # z = (x1 + i x2) / (1 - x3) = (1 + x3) / (x1 - i x2)
    h[:, 0] = np.where(south, X[:, 0] + 1j * X[:, 1], 1.0 + X[:, 2])
    h[:, 1] = np.where(south, 1.0 - X[:, 2], X[:, 0] - 1j * X[:, 1])
    return normalize_homogeneous(h)


# -- Möbius maps --------------------------------------------------------------

class MapClass(Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


class FixedPoint(NamedTuple):
    point: complex
    multiplier: complex


class MoebiusMap:
    """``z -> (a z + b) / (c z + d)`` normalised to determinant one.

    The square-root branch is fixed so that the trace has non-negative real
    part (imaginary part non-negative on ties), which makes the coefficient
    quadruple a canonical representative of the PSL(2, C) element.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if not abs(det) > DET_TOL:
            raise DegenerateMap(f"determinant {det!r} is numerically zero")
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
        t = a + d
        if t.real < -1e-14 or (abs(t.real) <= 1e-14 and t.imag < 0):
            a, b, c, d = -a, -b, -c, -d
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def from_three_points(cls, p1: complex, p2: complex, p3: complex) -> "MoebiusMap":
        """The map sending 0, 1, ∞ to ``p1``, ``p2``, ``p3``."""
        P1, P2, P3 = (np.array(homogeneous(p)) for p in (p1, p2, p3))
        alpha, beta = np.linalg.solve(np.column_stack([P3, P1]), P2)
        return cls.from_matrix(np.column_stack([alpha * P3, beta * P1]))

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def __repr__(self) -> str:
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __call__(self, z: complex) -> complex:
        if cmath.isinf(z):
            return INF if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INF
        w = (self.a * z + self.b) / den
        return INF if cmath.isinf(w) else w

    def apply_homogeneous(self, h: np.ndarray) -> np.ndarray:
        out = np.empty_like(h)
        out[:, 0] = self.a * h[:, 0] + self.b * h[:, 1]
        out[:, 1] = self.c * h[:, 0] + self.d * h[:, 1]
        return out

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return self.compose(other)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """``self ∘ other``."""
        a, b, c, d = self.coefficients
        e, f, g, h = other.coefficients
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def distance(self, other: "MoebiusMap") -> float:
        """Max coefficient distance between the two PSL(2, C) representatives."""
        plus = max(abs(x - y) for x, y in zip(self.coefficients, other.coefficients))
        minus = max(abs(x + y) for x, y in zip(self.coefficients, other.coefficients))
        return min(plus, minus)

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return self.distance(_IDENTITY) < tol

    def classify(self, tol: float = CLASSIFY_TOL) -> MapClass:
        if self.is_identity():
            return MapClass.IDENTITY
        sigma = self.trace ** 2
        if abs(sigma - 4) <= tol:
            return MapClass.PARABOLIC
        if abs(sigma.imag) <= tol and -tol <= sigma.real < 4:
            return MapClass.ELLIPTIC
        return MapClass.LOXODROMIC

    def fixed_points(self, tol: float = CLASSIFY_TOL) -> list[FixedPoint]:
        """Fixed points with their multipliers (derivative at the point).

        A fixed point is an eigenvector ``(z, 1)`` of the coefficient matrix;
        for eigenvalue ``mu`` the multiplier is ``1 / mu**2``.
        """
        kind = self.classify(tol)
        if kind is MapClass.IDENTITY:
            raise IdentityMap("every point is fixed by the identity")
        a, b, c, d = self.coefficients
        t = a + d
        if kind is MapClass.PARABOLIC:
            mus = [t / 2]
        else:
            disc = cmath.sqrt(t * t - 4)
            mus = [(t + disc) / 2, (t - disc) / 2]
        out = []
        for mu in mus:
            v1 = (b, mu - a)
            v2 = (mu - d, c)
            u, v = v1 if abs(v1[0]) + abs(v1[1]) >= abs(v2[0]) + abs(v2[1]) else v2
            z = dehomogenize(u, v)
            m = 1.0 if kind is MapClass.PARABOLIC else 1 / mu ** 2
            out.append(FixedPoint(self._polish(z), complex(m)))
        return out

    def _polish(self, z: complex) -> complex:
        # one Newton step on c z^2 + (d - a) z - b = 0 when it helps
        if cmath.isinf(z):
            return z
        a, b, c, d = self.coefficients
        g = c * z * z + (d - a) * z - b
        dg = 2 * c * z + (d - a)
        if dg == 0:
            return z
        z1 = z - g / dg
        return z1 if abs(c * z1 * z1 + (d - a) * z1 - b) < abs(g) else z

    def derivative(self, z: complex) -> complex:
        """Complex derivative at a finite, non-polar point."""
        return 1 / (self.c * z + self.d) ** 2

    def spherical_derivative(self, z: complex) -> float:
        """``|M'(z)| (1 + |z|^2) / (1 + |M(z)|^2)``, valid on the whole sphere."""
        u, v = homogeneous(z)
        num = abs(u) ** 2 + abs(v) ** 2
        den = abs(self.a * u + self.b * v) ** 2 + abs(self.c * u + self.d * v) ** 2
        return num / den


_IDENTITY = MoebiusMap.__new__(MoebiusMap)
_IDENTITY.a, _IDENTITY.b, _IDENTITY.c, _IDENTITY.d = 1 + 0j, 0j, 0j, 1 + 0j


def spherical_deriv(m: MoebiusMap, z: complex) -> float:
    return m.spherical_derivative(z)


def compose_all(maps: Iterable[MoebiusMap]) -> MoebiusMap:
    """Compose maps given in application order: ``[g1, g2, g3] -> g3∘g2∘g1``."""
    out = MoebiusMap.identity()
    for m in maps:
        out = m @ out
    return out


# -- circlines ----------------------------------------------------------------

class Side(Enum):
    INSIDE = -1
    ON = 0
    OUTSIDE = 1


class IntersectionKind(Enum):
    DISJOINT = "disjoint"
    TANGENT = "tangent"
    TWO = "two"
    COINCIDENT = "coincident"


class Intersection(NamedTuple):
    kind: IntersectionKind
    points: tuple


@dataclass(frozen=True)
class Circline:
    """Circle or line ``{z : A|z|^2 + conj(B) z + B conj(z) + D = 0}``.

    The sign of the coefficients is the orientation: the *inside* is where
    the form is negative.  Coefficients are scaled (by a positive factor) to
    unit Frobenius norm of the Hermitian matrix ``[[A, B], [conj(B), D]]``.
    """

    A: float
    B: complex
    D: float

    def __post_init__(self):
        A, B, D = float(self.A), complex(self.B), float(self.D)
        norm = math.sqrt(A * A + 2 * abs(B) ** 2 + D * D)
        if not norm > 0 or not math.isfinite(norm):
            raise DegenerateCircline("zero or non-finite coefficients")
        A, B, D = A / norm, B / norm, D / norm
        if not abs(B) ** 2 - A * D > 1e-14:
            raise DegenerateCircline("form is not a circle (|B|^2 - AD <= 0)")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "D", D)

    # constructors
    @classmethod
    def circle(cls, center: complex, radius: float) -> "Circline":
        """Circle whose inside is the open disk."""
        center = complex(center)
        return cls(1.0, -center, abs(center) ** 2 - radius * radius)

    @classmethod
    def line(cls, p: complex, q: complex) -> "Circline":
        """Line through ``p`` and ``q``; the inside is the half-plane to the left."""
        p, q = complex(p), complex(q)
        u = (q - p) / abs(q - p)
        B = -1j * u
        return cls(0.0, B, -2 * (B.conjugate() * p).real)

    @classmethod
    def from_hermitian(cls, H) -> "Circline":
        H = np.asarray(H, dtype=complex)
        return cls(H[0, 0].real, H[0, 1], H[1, 1].real)

    # geometry
    @property
    def hermitian(self) -> np.ndarray:
        return np.array([[self.A, self.B], [self.B.conjugate(), self.D]], dtype=complex)

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.A, self.B.real, self.B.imag, self.D)

    @property
    def is_line(self) -> bool:
        return abs(self.A) <= 1e-12

    @property
    def center(self) -> complex:
        if self.is_line:
            return INF
        return -self.B / self.A

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        return math.sqrt(abs(self.B) ** 2 - self.A * self.D) / abs(self.A)

    @property
    def _plane_norm(self) -> float:
        return math.sqrt(4 * abs(self.B) ** 2 + (self.A - self.D) ** 2)

    @property
    def plane(self) -> tuple[np.ndarray, float]:
        """Unit normal ``n`` and offset ``h`` of the plane ``n·X = h`` on the sphere.

        The inside of the circline is ``n·X < h``.
        """
        s = self._plane_norm
        n = np.array([2 * self.B.real, 2 * self.B.imag, self.A - self.D]) / s
        return n, -(self.A + self.D) / s

    def flipped(self) -> "Circline":
        return Circline(-self.A, -self.B, -self.D)

    def canonical(self) -> "Circline":
        """Orientation-free representative (used to compare point sets)."""
        for x in (self.A, self.B.real, self.B.imag, self.D):
            if abs(x) > 1e-12:
                return self if x > 0 else self.flipped()
        return self

    def form(self, z: complex) -> float:
        if cmath.isinf(z):
            return math.copysign(math.inf, self.A) if self.A != 0 else 0.0
        return self.A * abs(z) ** 2 + 2 * (z.conjugate() * self.B).real + self.D

    def value(self, z: complex) -> float:
        """Signed, scale-free form value: distance of ``z`` from the circline plane
        on the sphere (negative inside)."""
        u, v = homogeneous(z)
        q = self.A * abs(u) ** 2 + 2 * (u.conjugate() * self.B * v).real + self.D * abs(v) ** 2
        return 2 * q / ((abs(u) ** 2 + abs(v) ** 2) * self._plane_norm)

    def values(self, h: np.ndarray) -> np.ndarray:
        u, v = h[:, 0], h[:, 1]
        q = (self.A * np.abs(u) ** 2 + 2 * (np.conj(u) * self.B * v).real
             + self.D * np.abs(v) ** 2)
        return 2 * q / ((np.abs(u) ** 2 + np.abs(v) ** 2) * self._plane_norm)

    def side(self, z: complex, tol: float = 1e-9) -> Side:
        s = self.value(z)
        if abs(s) <= tol:
            return Side.ON
        return Side.INSIDE if s < 0 else Side.OUTSIDE

    def chordal_distance(self, z: complex) -> float:
        """Chordal distance from ``z`` to the circline."""
        return float(self.chordal_distances(np.array([homogeneous(z)]))[0])

    def chordal_distances(self, h: np.ndarray) -> np.ndarray:
        n, hh = self.plane
        X = sphere_coords(h)
        # angular gap between the point and the circle, seen from the axis n
        t = X @ n
        phi = np.arctan2(np.linalg.norm(_cross(X, n), axis=1), t)
        beta = math.atan2(math.sqrt(max(0.0, 1 - hh * hh)), hh)
        return 2 * np.sin(np.abs(phi - beta) / 2)

    def image(self, m: MoebiusMap) -> "Circline":
        """Image of the circline under ``m``; inside maps to inside."""
        N = m.inverse().matrix
        return Circline.from_hermitian(N.conj().T @ self.hermitian @ N)

    def same_set(self, other: "Circline", tol: float = 1e-9) -> bool:
        a = np.array(self.canonical().coefficients)
        b = np.array(other.canonical().coefficients)
        return bool(np.max(np.abs(a - b)) <= tol)

    # parameterisation
    def parameterization(self) -> MoebiusMap:
        """Möbius map ``P`` with ``P(unit circle) = self``; depends only on the point set.

        Circles use ``w -> c + r w``; lines (and near-lines) send the unit
        circle through three points of the circle on the sphere.
        """
        if not self.is_line and self.radius < 1e8 and abs(self.center) < 1e8:
            return MoebiusMap(self.radius, self.center, 0, 1)
        n, h = self.canonical().plane
        ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e1 = _cross(ref, n)
        e1 /= np.linalg.norm(e1)
        e2 = _cross(n, e1)
        rho = math.sqrt(max(0.0, 1 - h * h))
        pts = [from_sphere(h * n + rho * e) for e in (e1, e2, -e1)]
        # (1, i, -1) -> (0, 1, inf) -> pts
        K = MoebiusMap(-1j, 1j, 1, 1)
        return MoebiusMap.from_three_points(*pts) @ K

    def point_at(self, theta: float) -> complex:
        return self.parameterization()(cmath.exp(1j * theta))

    def angle_of(self, z: complex) -> float:
        w = self.parameterization().inverse()(z)
        return math.atan2(w.imag, w.real) % (2 * math.pi) if not cmath.isinf(w) else 0.0

    def intersect(self, other: "Circline", tol: float = 1e-9) -> Intersection:
        return circline_intersect(self, other, tol)


def circline_intersect(c1: Circline, c2: Circline, tol: float = 1e-9) -> Intersection:
    """Intersection of two circlines, computed as plane sections of the sphere."""
    if c1.same_set(c2, tol):
        return Intersection(IntersectionKind.COINCIDENT, ())
    n1, h1 = c1.plane
    n2, h2 = c2.plane
    cross = _cross(n1, n2)
    s2 = float(cross @ cross)
    if s2 < 1e-24:
        return Intersection(IntersectionKind.DISJOINT, ())
    g = float(n1 @ n2)
    a = (h1 - h2 * g) / s2
    b = (h2 - h1 * g) / s2
    p0 = a * n1 + b * n2
    disc = 1.0 - float(p0 @ p0)
    if disc < -tol:
        return Intersection(IntersectionKind.DISJOINT, ())
    if disc <= tol:
        X = p0 / np.linalg.norm(p0)
        return Intersection(IntersectionKind.TANGENT, (from_sphere(X),))
    t = math.sqrt(disc / s2)
    pts = tuple(from_sphere(p0 + s * t * cross) for s in (1.0, -1.0))
    return Intersection(IntersectionKind.TWO, pts)
