import json

import numpy as np
import pytest

from fluxcomm.errors import SceneError
from fluxcomm.scenes import (
    BUNDLED,
    Scene,
    build_bundled_scenes,
    bundled_scene_path,
    dumps,
    load_bundled,
    load_scene,
    parse_scene,
    save_scene,
)


def test_bundled_files_match_constructors():
    built = build_bundled_scenes()
    assert tuple(built) == BUNDLED
    for name, scene in built.items():
        assert bundled_scene_path(name).read_text(encoding="utf-8") == dumps(scene.to_dict()) + "\n"


@pytest.mark.parametrize("name", BUNDLED)
def test_round_trip_is_bit_exact(name, tmp_path):
    scene = load_bundled(name)
    path = tmp_path / "scene.json"
    save_scene(scene, path)
    again = load_scene(path)
    for key, loop in scene.loops.items():
        assert np.array_equal(again.loop(key).vertices, loop.vertices)
    for key, surf in scene.surfaces.items():
        assert np.array_equal(again.surface(key).vertices, surf.vertices)
        assert np.array_equal(again.surface(key).triangles, surf.triangles)


def test_dumps_format():
    text = dumps({"a": 0.1, "b": [1, 2.0, float("nan")], "c": True, "d": np.float64(1 / 3)})
    assert text == '{"a": 0.10000000000000001, "b": [1, 2.0, null], "c": true, "d": 0.33333333333333331}'
    assert json.loads(text)["d"] == 1 / 3


def test_scene_defaults_and_names():
    scene = load_bundled("hopf")
    assert scene.surface() is scene.surface("S")
    assert scene.loop() is scene.loop("C2")
    with pytest.raises(SceneError):
        scene.loop("nope")
    with pytest.raises(SceneError):
        Scene().surface()


@pytest.mark.parametrize("payload", [
    [],
    {"loops": [{"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]}]},
    {"loops": [{"name": "a", "vertices": [[0, 0, 0], [1, 0, 0]]}]},
    {"surfaces": [{"name": "s", "vertices": [[0, 0, 0]], "triangles": [[0, 1, 2]]}]},
])
def test_malformed_payloads(payload):
    with pytest.raises(SceneError):
        parse_scene(payload)


def test_load_errors(tmp_path):
    with pytest.raises(SceneError):
        load_scene(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SceneError):
        load_scene(bad)
    with pytest.raises(SceneError):
        bundled_scene_path("nope")
