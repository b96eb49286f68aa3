import numpy as np
import pytest

from fluxcomm.scenes import load_bundled

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> None:
    _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def hopf():
    scene = load_bundled("hopf")
    return scene.surface(), scene.loop()


@pytest.fixture(scope="session")
def unlinked():
    scene = load_bundled("unlinked")
    return scene.surface(), scene.loop()


@pytest.fixture(scope="session")
def dome():
    scene = load_bundled("dome3")
    return scene.surface(), scene.loop()


@pytest.fixture(scope="session")
def linked2():
    scene = load_bundled("linked2")
    return scene.surface(), scene.loop()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def subdivide(vertices, triangles):
    """Split every triangle into four at edge midpoints (midpoints shared)."""
    verts = [np.asarray(v, float) for v in vertices]
    cache = {}

    def mid(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            verts.append(0.5 * (verts[i] + verts[j]))
            cache[key] = len(verts) - 1
        return cache[key]

    out = []
    for a, b, c in np.asarray(triangles):
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        out += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(verts), np.array(out)
