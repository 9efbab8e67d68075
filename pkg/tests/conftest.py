import numpy as np
import pytest

from pasmef.core import write_png

ACCEPTANCE_LINES = []


def synthetic_scene(h, w, seed=0):
    """Scene radiance with smooth shading, hard edges and some texture, roughly in [0, 4]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:h, 0:w] / max(h, w)
    shade = 0.6 + 0.4 * np.sin(6.0 * xx) * np.cos(4.0 * yy)
    window = ((xx > 0.55) & (xx < 0.85) & (yy > 0.2) & (yy < 0.6)) * 3.0
    disk = ((xx - 0.25) ** 2 + (yy - 0.7) ** 2 < 0.02) * 1.5
    lum = 0.15 + shade + window + disk + 0.05 * rng.random((h, w))
    tint = np.array([1.0, 0.85, 0.7]) + 0.1 * rng.random(3)
    return lum[:, :, None] * tint


def synthetic_stack(h=64, w=96, times=(0.15, 0.4, 1.2), seed=0):
    """Gamma-encoded exposures of one scene, darkest first."""
    scene = synthetic_scene(h, w, seed)
    return np.stack([np.clip(scene * t, 0.0, 1.0) ** (1 / 2.2) for t in times])


@pytest.fixture
def stack():
    return synthetic_stack()


@pytest.fixture
def stack_dir(tmp_path):
    d = tmp_path / "scene"
    d.mkdir()
    for i, img in enumerate(synthetic_stack()):
        write_png(d / f"exp_{i}.png", img)
    return d


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
