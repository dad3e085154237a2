"""Gallery of the worked examples as ready-made PMTs.

Every factory returns a validated :class:`~piecewise_mobius.pmt.PMT`; the
registry :data:`PRESETS` maps preset names to factories and their default
parameters (used by the CLI and scene files).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import BadParameter
from .partition import disk_partition
from .pmt import PMT
from .sphere import MoebiusMap

OMEGA3 = cmath.exp(2j * math.pi / 3)

# Perturbations of the parabolic pair shown alongside its discussion:
# (f1 coefficients, f2 coefficients)
PARABOLIC_PAIR_PERTURBATIONS = {
    "c102i": ((1 + 1j, 1.02j, -1.02j, 1 - 1j), (1 + 1j, -1.02j, 1.02j, 1 - 1j)),
    "c099": ((1 + 1j, 0.99 + 0.01j, -(0.99 + 0.01j), 1 - 1j),
             (1 + 1j, -(0.99 + 0.01j), 0.99 + 0.01j, 1 - 1j)),
    "f2_08": ((1 + 1j, 1j, -1j, 1 - 1j), (0.8 + 1j, -1j, 1j, 1 - 1j)),
    "f2_11": ((1 + 1j, 1j, -1j, 1 - 1j), (1.1 + 1j, 0.1 - 1j, -0.1 + 1j, 0.9 - 1j)),
}


def _map(a, b, c, d) -> MoebiusMap:
    try:
        return MoebiusMap(a, b, c, d)
    except ValueError as exc:
        raise BadParameter(str(exc)) from exc


def _nonzero(lam: complex, name: str = "lam") -> complex:
    lam = complex(lam)
    if lam == 0 or not cmath.isfinite(lam):
        raise BadParameter(f"{name} must be a finite nonzero complex number")
    return lam


def two_scalings(lam: complex = 0.5) -> PMT:
    """``lam z`` on the unit disk, ``z / lam`` outside (``0 < |lam| < 1``)."""
    lam = _nonzero(lam)
    if not abs(lam) < 1:
        raise BadParameter("two_scalings needs 0 < |lam| < 1")
    return PMT(disk_partition(0, 1), [_map(lam, 0, 0, 1), _map(1, 0, 0, lam)],
               name="two_scalings", params={"lam": lam})


def translation_scaling() -> PMT:
    """``z + 2`` on the unit disk, ``2 z`` outside."""
    return PMT(disk_partition(0, 1), [_map(1, 2, 0, 1), _map(2, 0, 0, 1)],
               name="translation_scaling")


def ghost() -> PMT:
    """``z / 2`` on ``|z - 1| < 1``, ``2 z`` outside; 0 is ghost-periodic."""
    return PMT(disk_partition(1, 1), [_map(1, 0, 0, 2), _map(2, 0, 0, 1)], name="ghost")


def hiper_no_ss(lam: complex = 0.5) -> PMT:
    """``lam z + lam`` on ``|z - 1| < 1`` and ``(6i lam z - 1)/(z + 6i lam)`` outside."""
    lam = _nonzero(lam)
    f1 = _map(lam, lam, 0, 1)
    f2 = _map(6j * lam, -1, 1, 6j * lam)
    return PMT(disk_partition(1, 1), [f1, f2], name="hiper_no_ss", params={"lam": lam})


def expand_no_hyper() -> PMT:
    """Rotation of order three on ``|z| < 1/2``, ``lam (1 - z)`` outside with
    ``lam = (10/9) e^{2 pi i / 3}``."""
    lam = 10 / 9 * OMEGA3
    return PMT(disk_partition(0, 0.5, witness_out=2.0),
               [_map(OMEGA3, 0, 0, 1), _map(-lam, lam, 0, 1)], name="expand_no_hyper")


def irrational_annulus() -> PMT:
    """``2 z`` on the unit disk, ``(2/3) z`` outside."""
    return PMT(disk_partition(0, 1), [_map(2, 0, 0, 1), _map(2, 0, 0, 3)],
               name="irrational_annulus")


def perturbed_pair(c: complex = 1j, radius: float = 0.4, f2: tuple | None = None,
                   variant: str | None = None) -> PMT:
    """``((1+i)z + c)/(-c z + 1 - i)`` on ``|z| < radius`` and
    ``((1+i)z - c)/(c z + 1 - i)`` outside.

    ``c = i`` is the parabolic base pair.  ``f2`` replaces the outer map by an
    explicit coefficient quadruple; ``variant`` selects one of
    :data:`PARABOLIC_PAIR_PERTURBATIONS`.
    """
    if variant is not None:
        try:
            m1, m2 = PARABOLIC_PAIR_PERTURBATIONS[variant]
        except KeyError:
            raise BadParameter(f"unknown variant {variant!r}") from None
        maps = [_map(*m1), _map(*m2)]
    else:
        c = complex(c)
        maps = [_map(1 + 1j, c, -c, 1 - 1j),
                _map(*f2) if f2 is not None else _map(1 + 1j, -c, c, 1 - 1j)]
    if not radius > 0:
        raise BadParameter("radius must be positive")
    params = {"c": complex(c), "radius": radius}
    if variant is not None:
        params = {"variant": variant, "radius": radius}
    return PMT(disk_partition(0, radius), maps, name="perturbed_pair", params=params)


def parabolic_pair() -> PMT:
    return perturbed_pair(1j)


def tent(center: complex = -0.5, radius: float = 1.0, lam: complex = 3.5) -> PMT:
    """Complex tent map: ``lam z`` inside a circle through ``1/2``, ``lam - lam z`` outside."""
    lam = _nonzero(lam)
    center = complex(center)
    if not radius > 0:
        raise BadParameter("radius must be positive")
    if abs(abs(0.5 - center) - radius) > 1e-12:
        raise BadParameter("the tent discontinuity circle must pass through 1/2")
    part = disk_partition(center, radius, witness_out=center + 3 * radius)
    return PMT(part, [_map(lam, 0, 0, 1), _map(-lam, lam, 0, 1)], name="tent",
               params={"center": center, "radius": radius, "lam": lam})


@dataclass(frozen=True)
class PresetInfo:
    factory: Callable[..., PMT]
    defaults: dict
    family_param: str | None  # complex parameter swept by ``sweep``
    summary: str


PRESETS: dict[str, PresetInfo] = {
    "two_scalings": PresetInfo(two_scalings, {"lam": 0.5}, "lam",
                               "lam z on the disk, z/lam outside; hyperbolic, alpha empty"),
    "translation_scaling": PresetInfo(translation_scaling, {}, None,
                                      "z+2 on the disk, 2z outside"),
    "ghost": PresetInfo(ghost, {}, None, "z/2 on |z-1|<1, 2z outside; ghost point 0"),
    "hiper_no_ss": PresetInfo(hiper_no_ss, {"lam": 0.5}, "lam",
                              "hyperbolic but not structurally stable family"),
    "expand_no_hyper": PresetInfo(expand_no_hyper, {}, None,
                                  "alpha-expanding, not hyperbolic (rotation domain)"),
    "irrational_annulus": PresetInfo(irrational_annulus, {}, None,
                                     "2z inside, 2z/3 outside; irrational rotation on radii"),
    "perturbed_pair": PresetInfo(perturbed_pair, {"c": 0.99 + 0.01j, "radius": 0.4}, "c",
                                 "perturbations of the parabolic pair"),
    "parabolic_pair": PresetInfo(parabolic_pair, {}, None,
                                 "parabolic base pair, fixed point 1 parabolic"),
    "tent": PresetInfo(tent, {"center": -0.5, "radius": 1.0, "lam": 3.5}, "lam",
                       "complex tent map lam z / lam - lam z"),
}


def preset(name: str, **params) -> PMT:
    try:
        info = PRESETS[name]
    except KeyError:
        raise BadParameter(f"unknown preset {name!r}") from None
    kwargs = dict(info.defaults)
    unknown = set(params) - set(kwargs) - ({"f2", "variant"} if name == "perturbed_pair" else set())
    if unknown:
        raise BadParameter(f"unknown parameters for {name}: {sorted(unknown)}")
    kwargs.update(params)
    return info.factory(**kwargs)


def family(name: str, **fixed) -> Callable[[complex], PMT]:
    """One-parameter family ``p -> preset(name, **fixed, <param>=p)``."""
    info = PRESETS[name]
    if info.family_param is None:
        raise BadParameter(f"preset {name!r} has no complex parameter")

    def build(p: complex) -> PMT:
        return preset(name, **{**fixed, info.family_param: p})

    build.param = info.family_param
    build.preset = name
    build.fixed = dict(fixed)
    return build
