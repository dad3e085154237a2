"""Scene files: JSON descriptions of a PMT plus render / analysis settings.

A scene names either a preset::

    {"preset": "tent", "params": {"lam": [3.5, 0]}}

or spells out regions and maps::

    {"regions": [{"constraints": [{"circle": {"center": [0, 0], "radius": 1},
                                   "side": "inside"}],
                  "witness": [0, 0]},
                 {"constraints": [{"circle": {"center": [0, 0], "radius": 1},
                                   "side": "outside"}],
                  "witness": [2, 0]}],
     "maps": [[[0.5, 0], [0, 0], [0, 0], [1, 0]],
              [[1, 0], [0, 0], [0, 0], [0.5, 0]]]}

Complex numbers are ``[re, im]`` pairs (a bare number is read as real,
``"inf"`` is the point at infinity).  A constraint circline is given either
as ``circle`` (centre, radius), ``line`` (two points, inside on the left) or
raw Hermitian coefficients ``circline`` (``A``, ``B``, ``D``).  Optional
sections ``render``, ``spiderweb``, ``analysis`` and ``sweep`` hold the
settings of the matching CLI commands.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from .errors import BadParameter, SceneError
from .partition import Partition, Region
from .pmt import PMT
from .presets import PRESETS, preset
from .sphere import INF, Circline, MoebiusMap, Side, is_inf

_COMPLEX = {"oneOf": [
    {"type": "number"},
    {"type": "string", "enum": ["inf"]},
    {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
]}
_NUM = {"type": "number"}
_CIRCLINE = {
    "type": "object", "additionalProperties": False,
    "properties": {
        "circle": {"type": "object", "additionalProperties": False,
                   "required": ["center", "radius"],
                   "properties": {"center": _COMPLEX, "radius": _NUM}},
        "line": {"type": "object", "additionalProperties": False, "required": ["p", "q"],
                 "properties": {"p": _COMPLEX, "q": _COMPLEX}},
        "circline": {"type": "object", "additionalProperties": False,
                     "required": ["A", "B", "D"],
                     "properties": {"A": _NUM, "B": _COMPLEX, "D": _NUM}},
        "side": {"enum": ["inside", "outside"]},
    },
    "required": ["side"],
    "oneOf": [{"required": ["circle"]}, {"required": ["line"]}, {"required": ["circline"]}],
}
VALIDATION_SAMPLES = 20_000

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "preset": {"type": "string"},
        "params": {"type": "object"},
        "regions": {"type": "array", "minItems": 2, "items": {
            "type": "object", "additionalProperties": False, "required": ["constraints"],
            "properties": {"constraints": {"type": "array", "minItems": 1, "items": _CIRCLINE},
                           "witness": _COMPLEX}}},
        "maps": {"type": "array", "minItems": 2, "items": {
            "type": "array", "minItems": 4, "maxItems": 4, "items": _COMPLEX}},
        "render": {"type": "object", "additionalProperties": False, "properties": {
            "center": _COMPLEX, "half_width": _NUM, "sphere": {"type": "boolean"},
            "pixels": {"type": "integer", "minimum": 1}, "N": {"type": "integer", "minimum": 0},
            "eps_b": {"type": ["number", "null"]}, "tol_conv": _NUM,
            "max_len": {"type": "integer", "minimum": 1}, "heat": {"type": "boolean"},
            "heat_depth": {"type": "integer", "minimum": 3}}},
        "spiderweb": {"type": "object", "additionalProperties": False, "properties": {
            "depth": {"type": "integer", "minimum": 0}, "min_arc": _NUM,
            "cap": {"type": "integer", "minimum": 1}}},
        "analysis": {"type": "object", "additionalProperties": False, "properties": {
            "max_len": {"type": "integer", "minimum": 1}, "depth": {"type": "integer", "minimum": 1},
            "alpha_depth": {"type": "integer", "minimum": 3}, "alpha_budget": {"type": "integer"},
            "nmax": {"type": "integer", "minimum": 1}, "seeds": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer"}, "raster_size": {"type": "integer", "minimum": 4},
            "min_arc": _NUM}},
        "sweep": {"type": "object", "additionalProperties": False, "properties": {
            "re": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
            "im": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
            "shape": {"type": "array", "items": {"type": "integer", "minimum": 1},
                      "minItems": 2, "maxItems": 2},
            "max_len": {"type": "integer", "minimum": 1},
            "arc_depth": {"type": "integer", "minimum": 0}}},
    },
    "oneOf": [{"required": ["preset"], "not": {"anyOf": [{"required": ["regions"]},
                                                         {"required": ["maps"]}]}},
              {"required": ["regions", "maps"], "not": {"anyOf": [{"required": ["preset"]},
                                                                  {"required": ["params"]}]}}],
}


def parse_complex(v) -> complex:
    if isinstance(v, str):
        if v.strip().lower() == "inf":
            return INF
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise SceneError(f"bad complex literal {v!r}") from None
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SceneError(f"complex literal needs [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise SceneError(f"bad complex literal {v!r}")


def complex_literal(z: complex):
    z = complex(z)
    if is_inf(z):
        return "inf"
    return [z.real + 0.0, z.imag + 0.0]


@dataclass
class Scene:
    pmt: PMT
    raw: dict
    render: dict = field(default_factory=dict)
    spiderweb: dict = field(default_factory=dict)
    analysis: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)

    @property
    def preset(self) -> str | None:
        return self.raw.get("preset")

    @property
    def params(self) -> dict:
        return {k: _param_value(v) for k, v in self.raw.get("params", {}).items()}


def _param_value(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, list) and len(v) == 4:
        return tuple(parse_complex(x) for x in v)
    return v


def _circline(item: dict) -> Circline:
    if "circle" in item:
        c = item["circle"]
        return Circline.circle(parse_complex(c["center"]), float(c["radius"]))
    if "line" in item:
        return Circline.line(parse_complex(item["line"]["p"]), parse_complex(item["line"]["q"]))
    c = item["circline"]
    return Circline(float(c["A"]), parse_complex(c["B"]), float(c["D"]))


def scene_from_dict(data: dict) -> Scene:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SceneError(f"invalid scene: {exc.message} at {'/'.join(map(str, exc.absolute_path)) or '<root>'}") from None
    try:
        if "preset" in data:
            if data["preset"] not in PRESETS:
                raise SceneError(f"unknown preset {data['preset']!r}; try one of {sorted(PRESETS)}")
            params = {k: _param_value(v) for k, v in data.get("params", {}).items()}
            F = preset(data["preset"], **params)
        else:
            regions = []
            for k, r in enumerate(data["regions"], start=1):
                cons = tuple((_circline(c), Side.INSIDE if c["side"] == "inside" else Side.OUTSIDE)
                             for c in r["constraints"])
                w = parse_complex(r["witness"]) if "witness" in r else None
                regions.append(Region(cons, k, w))
            maps = [MoebiusMap(*(parse_complex(x) for x in m)) for m in data["maps"]]
            F = PMT(Partition(regions), maps, name=data.get("name", "scene"))
            rep = F.partition.validate(samples=VALIDATION_SAMPLES)
            wrong = [k for k in rep.bad_witnesses if regions[k - 1].witness is not None]
            if rep.gap_count or rep.overlap_count or wrong:
                raise SceneError(f"regions do not partition the sphere: {rep.gap_count} gap and "
                                 f"{rep.overlap_count} overlap samples, witnesses outside "
                                 f"their regions {wrong}")
    except (BadParameter, SceneError):
        raise
    except ValueError as exc:
        raise SceneError(str(exc)) from None
    return Scene(F, data, data.get("render", {}), data.get("spiderweb", {}),
                 data.get("analysis", {}), data.get("sweep", {}))


def load_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SceneError(f"cannot read scene {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene {path} is not valid JSON: {exc}") from None
    return scene_from_dict(data)


def export_scene(F: PMT) -> dict:
    """Explicit (preset-free) scene for ``F``; round-trips to the same maps and circlines."""
    regions = []
    for r in F.partition.regions:
        cons = []
        for c, s in r.constraints:
            cons.append({"circline": {"A": c.A, "B": complex_literal(c.B), "D": c.D},
                         "side": "inside" if s is Side.INSIDE else "outside"})
        entry = {"constraints": cons}
        if r.witness is not None:
            entry["witness"] = complex_literal(r.witness)
        regions.append(entry)
    maps = [[complex_literal(x) for x in m.coefficients] for m in F.maps]
    out = {"regions": regions, "maps": maps}
    if F.name:
        out["name"] = F.name
    return out


def describe(F: PMT) -> dict:
    """Configuration echo used in reports."""
    return {"name": F.name, "params": F.params, **export_scene(F)}
