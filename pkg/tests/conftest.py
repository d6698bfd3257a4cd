from __future__ import annotations

import math

import pytest

from scenekit import GenConfig, Opening, OrientedBox3D, Scene, Wall

# Collected by tests/test_acceptance.py; printed at the end of the run.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def one_wall_scene() -> Scene:
    return Scene(walls=(Wall(0, (0, 0, 0), (4, 0, 0), 2.6, 0.1),))


@pytest.fixture
def full_scene() -> Scene:
    """One wall of each element family, hand-checked valid."""
    return Scene(
        walls=(
            Wall(0, (0, 0, 0), (4, 0, 0), 2.6, 0.1),
            Wall(1, (4, 0, 0), (4, 3, 0), 2.6, 0.1),
        ),
        openings=(
            Opening(0, "door", 0, (2.0, 0.0, 1.0), 1.0, 2.0),
            Opening(0, "window", 1, (4.0, 1.5, 1.5), 0.8, 1.0),
        ),
        boxes=(
            OrientedBox3D(0, "sofa", (1.5, 1.0, 0.4), 0.3, (2.0, 0.9, 0.8)),
            OrientedBox3D(1, "table", (3.0, 2.0, 0.35), -math.pi / 5, (1.2, 0.8, 0.7)),
        ),
    )


@pytest.fixture
def gen_config() -> GenConfig:
    return GenConfig(openings_per_wall=(0, 2), boxes_per_room=(2, 5))
