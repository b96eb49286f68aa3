"""Scene files: named loops and surfaces in one JSON document.

Layout::

    {"loops":    [{"name": str, "vertices": [[x, y, z], ...]}],
     "surfaces": [{"name": str, "vertices": [[x, y, z], ...], "triangles": [[i, j, k], ...]}]}

Indices are 0-based.  Floats are written with 17 significant digits so a
round trip is bit-exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import geom
from .errors import GeometryError, SceneError
from .geom import OrientedLoop, TriSurface

BUNDLED = ("hopf", "unlinked", "dome3", "degenerate", "linked2")


@dataclass
class Scene:
    loops: dict[str, OrientedLoop] = field(default_factory=dict)
    surfaces: dict[str, TriSurface] = field(default_factory=dict)

    def surface(self, name: str | None = None) -> TriSurface:
        return _pick(self.surfaces, name, "surface")

    def loop(self, name: str | None = None) -> OrientedLoop:
        return _pick(self.loops, name, "loop")

    def to_dict(self) -> dict:
        return {
            "loops": [{"name": k, "vertices": v.vertices.tolist()} for k, v in self.loops.items()],
            "surfaces": [
                {"name": k, "vertices": s.vertices.tolist(), "triangles": s.triangles.tolist()}
                for k, s in self.surfaces.items()
            ],
        }


def _pick(table: dict, name: str | None, kind: str):
    if not table:
        raise SceneError(f"scene has no {kind}s")
    if name is None:
        return next(iter(table.values()))
    try:
        return table[name]
    except KeyError:
        raise SceneError(f"no {kind} named {name!r}; have {sorted(table)}") from None


def _encode(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        if not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats; non-finite floats become null."""
    return _encode(obj)


def parse_scene(payload: dict) -> Scene:
    if not isinstance(payload, dict):
        raise SceneError("scene must be a JSON object")
    scene = Scene()
    try:
        for item in payload.get("loops", []):
            scene.loops[str(item["name"])] = OrientedLoop(item["vertices"])
        for item in payload.get("surfaces", []):
            scene.surfaces[str(item["name"])] = TriSurface(item["vertices"], item["triangles"])
    except (KeyError, TypeError) as exc:
        raise SceneError(f"malformed scene entry: {exc}") from exc
    except GeometryError as exc:
        raise SceneError(f"invalid geometry: {exc}") from exc
    return scene


def load_scene(path) -> Scene:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"{path}: not valid JSON ({exc})") from exc
    return parse_scene(payload)


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(dumps(scene.to_dict()) + "\n", encoding="utf-8")


def bundled_scene_path(name: str) -> Path:
    if name not in BUNDLED:
        raise SceneError(f"unknown bundled scene {name!r}")
    return Path(str(resources.files("fluxcomm") / "data" / f"{name}.json"))


def load_bundled(name: str) -> Scene:
    return load_scene(bundled_scene_path(name))


def build_bundled_scenes() -> dict[str, Scene]:
    """Regenerate the bundled fixtures from their constructors."""
    hopf_s, hopf_c = geom.hopf_scene(64, 8)
    _, far = geom.unlinked_scene(64, 8)
    dome_s, dome_c = geom.dome_scene(128, 32)
    # a loop vertex exactly on the fan centre of the disk
    touching = geom.circle_loop_xz(64, phase=0.0)
    two_s, two_c = geom.linked_twice_scene(256, 8)
    return {
        "hopf": Scene({"C2": hopf_c}, {"S": hopf_s}),
        "unlinked": Scene({"C2": far}, {"S": hopf_s}),
        "dome3": Scene({"C2": dome_c}, {"S": dome_s}),
        "degenerate": Scene({"C2": touching}, {"S": hopf_s}),
        "linked2": Scene({"C2": two_c}, {"S": two_s}),
    }


def write_bundled_scenes(directory) -> list[Path]:
    out = []
    for name, scene in build_bundled_scenes().items():
        path = Path(directory) / f"{name}.json"
        save_scene(scene, path)
        out.append(path)
    return out
