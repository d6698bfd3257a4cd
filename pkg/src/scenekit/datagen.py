"""Seeded synthetic scenes and point clouds for desk-scale testing.

Rooms are axis-aligned rectangles: four walls in a closed loop, openings
placed fully inside their host walls, and categorized boxes on the floor
with random yaw. Point clouds are uniform surface samples of wall quads and
box faces with per-element base colors and optional Gaussian position noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ._rng import rng_from_seed
from .pointcloud import PointCloud, save_ply
from .scene import Opening, OrientedBox3D, Scene, Wall, normalize_angle, validate_scene
from .script import serialize_scene

DEFAULT_CATEGORIES = (
    "sofa",
    "bed",
    "chair",
    "dining_table",
    "wardrobe",
    "nightstand",
    "desk",
    "cabinet",
)


@dataclass(frozen=True)
class GenConfig:
    """Ranges (inclusive lo, hi) driving the generator."""

    rooms: tuple[int, int] = (1, 1)
    room_width: tuple[float, float] = (3.0, 6.0)
    room_depth: tuple[float, float] = (2.5, 5.0)
    room_height: tuple[float, float] = (2.4, 3.0)
    openings_per_wall: tuple[int, int] = (0, 1)
    boxes_per_room: tuple[int, int] = (2, 5)
    categories: tuple[str, ...] = DEFAULT_CATEGORIES
    density: float = 200.0  # surface samples per square meter
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("rooms", "room_width", "room_depth", "room_height",
                     "openings_per_wall", "boxes_per_room"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name}: empty range ({lo}, {hi})")
        if self.rooms[0] < 1:
            raise ValueError("rooms must be >= 1")
        if self.density <= 0:
            raise ValueError("density must be > 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not self.categories:
            raise ValueError("need at least one category")


def _grid(x: float, cell: float = 0.025) -> float:
    return round(x / cell) * cell


def _grid_floor(x: float, cell: float = 0.025) -> float:
    return math.floor(x / cell) * cell


def gen_scene(config: GenConfig | None = None, seed: int | None = None) -> Scene:
    """Generate a valid scene; identical config+seed gives identical output.

    Wall and opening geometry lands on the default 2.5 cm quantization grid
    (sizes rounded down, positions to nearest), so quantizing or grid-
    snapping a generated scene never pushes an opening out of its wall.
    """
    config = config or GenConfig()
    rng = rng_from_seed(config.seed if seed is None else seed)

    walls: list[Wall] = []
    openings: list[Opening] = []
    boxes: list[OrientedBox3D] = []
    counters = {"door": 0, "window": 0}

    n_rooms = int(rng.integers(config.rooms[0], config.rooms[1] + 1))
    offset_x = 0.0
    for _ in range(n_rooms):
        w = _grid(float(rng.uniform(*config.room_width)))
        d = _grid(float(rng.uniform(*config.room_depth)))
        h = _grid(float(rng.uniform(*config.room_height)))
        x0, y0 = offset_x, 0.0
        x1, y1 = x0 + w, y0 + d
        offset_x = x1 + 1.0  # one-meter gap between rooms

        # Closed CCW loop; every baseline is horizontal at z = 0.
        loop = [
            ((x0, y0, 0.0), (x1, y0, 0.0)),
            ((x1, y0, 0.0), (x1, y1, 0.0)),
            ((x1, y1, 0.0), (x0, y1, 0.0)),
            ((x0, y1, 0.0), (x0, y0, 0.0)),
        ]
        room_walls = []
        for a, b in loop:
            wall = Wall(len(walls), a, b, height=h, thickness=0.1)
            room_walls.append(wall)
            walls.append(wall)

        for wall in room_walls:
            n_open = int(rng.integers(config.openings_per_wall[0], config.openings_per_wall[1] + 1))
            length = wall.baseline_length()
            for _ in range(n_open):
                kind = "door" if rng.random() < 0.5 else "window"
                max_width = min(1.2, length * 0.5)
                if max_width < 0.4:
                    if config.openings_per_wall[0] > 0:
                        raise ValueError(
                            f"infeasible config: wall of length {length:.2f} m cannot host an opening"
                        )
                    continue
                width = _grid_floor(float(rng.uniform(0.4, max_width)))
                if kind == "door":
                    # Height on the 0.05 grid keeps the centerline (oh / 2)
                    # on the 0.025 grid; doors sit on the floor.
                    oh = _grid_floor(float(rng.uniform(1.8, min(2.2, h - 0.1))), 0.05)
                    cz = oh / 2.0
                else:
                    oh = _grid_floor(float(rng.uniform(0.6, min(1.4, h - 1.0))), 0.05)
                    cz = _grid(float(rng.uniform(0.9 + oh / 2.0, h - 0.1 - oh / 2.0)))
                along = _grid(float(rng.uniform(width / 2.0 + 0.05, length - width / 2.0 - 0.05)))
                ax, ay, _ = wall.a
                bx, by, _ = wall.b
                ux, uy = (bx - ax) / length, (by - ay) / length
                center = (ax + along * ux, ay + along * uy, cz)
                openings.append(
                    Opening(counters[kind], kind, wall.id, center, width, oh)
                )
                counters[kind] += 1

        n_boxes = int(rng.integers(config.boxes_per_room[0], config.boxes_per_room[1] + 1))
        for _ in range(n_boxes):
            sx = float(rng.uniform(0.4, 1.8))
            sy = float(rng.uniform(0.4, 1.8))
            sz = float(rng.uniform(0.3, 1.2))
            margin = math.hypot(sx, sy) / 2.0
            if x1 - x0 <= 2 * margin or y1 - y0 <= 2 * margin:
                if config.boxes_per_room[0] > 0:
                    raise ValueError(
                        f"infeasible config: room {x1 - x0:.2f} x {y1 - y0:.2f} m "
                        "cannot fit the requested boxes"
                    )
                continue
            cx = float(rng.uniform(x0 + margin, x1 - margin))
            cy = float(rng.uniform(y0 + margin, y1 - margin))
            angle = normalize_angle(float(rng.uniform(-math.pi, math.pi)))
            category = str(rng.choice(np.array(config.categories)))
            boxes.append(
                OrientedBox3D(len(boxes), category, (cx, cy, sz / 2.0), angle, (sx, sy, sz))
            )

    # Canonical element order (doors before windows) so generated scenes
    # round-trip through serialization unchanged.
    openings.sort(key=lambda o: (o.kind, o.id))
    scene = Scene(tuple(walls), tuple(openings), tuple(boxes))
    assert not validate_scene(scene), "generator produced an invalid scene"
    return scene


def _sample_quad(rng, origin, edge_u, edge_v, count):
    u = rng.random(count)[:, None]
    v = rng.random(count)[:, None]
    return np.asarray(origin) + u * np.asarray(edge_u) + v * np.asarray(edge_v)


def sample_cloud(scene: Scene, config: GenConfig | None = None, seed: int | None = None) -> PointCloud:
    """Uniform surface samples of wall quads and box faces.

    Sample counts are Poisson(area x density) per surface; each element gets
    a constant base color; positions get isotropic Gaussian noise of
    ``noise_sigma``.
    """
    config = config or GenConfig()
    rng = rng_from_seed(config.seed if seed is None else seed, 1)

    chunks: list[np.ndarray] = []

    def add_surface(origin, edge_u, edge_v, color):
        area = float(np.linalg.norm(np.cross(edge_u, edge_v)))
        count = int(rng.poisson(area * config.density))
        if count == 0:
            return
        pts = _sample_quad(rng, origin, edge_u, edge_v, count)
        if config.noise_sigma > 0:
            pts = pts + rng.normal(0.0, config.noise_sigma, size=pts.shape)
        rgb = np.tile(color, (count, 1))
        chunks.append(np.hstack([pts, rgb]))

    def element_color():
        # On the 8-bit grid so PLY save/load round-trips the corpus exactly.
        return rng.integers(26, 230, size=3) / 255.0

    for w in scene.walls:
        a = np.array(w.a)
        b = np.array(w.b)
        add_surface(a, b - a, np.array([0.0, 0.0, w.height]), element_color())

    for box in scene.boxes:
        color = element_color()
        c, s = math.cos(box.angle_z), math.sin(box.angle_z)
        rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        center = np.array(box.center)
        hx, hy, hz = np.array(box.scale) / 2.0
        ex = rot @ np.array([2 * hx, 0.0, 0.0])
        ey = rot @ np.array([0.0, 2 * hy, 0.0])
        ez = np.array([0.0, 0.0, 2 * hz])
        corner = center - (ex + ey + ez) / 2.0
        # six faces: (origin, edge, edge)
        faces = [
            (corner, ex, ey),
            (corner + ez, ex, ey),
            (corner, ex, ez),
            (corner + ey, ex, ez),
            (corner, ey, ez),
            (corner + ex, ey, ez),
        ]
        for origin, eu, ev in faces:
            add_surface(origin, eu, ev, color)

    if not chunks:
        return PointCloud.empty()
    return PointCloud(np.vstack(chunks))


def perturb_scene(
    scene: Scene,
    sigma_pos: float = 0.0,
    sigma_angle: float = 0.0,
    drop_rate: float = 0.0,
    seed: int = 0,
) -> Scene:
    """Degrade a scene: rigid per-element jitter, yaw jitter, random drops.

    Walls move rigidly (both endpoints share one offset) and their openings
    follow, so the output stays valid. Dropping a wall drops its openings;
    ids are re-densified.
    """
    if not 0.0 <= drop_rate <= 1.0:
        raise ValueError("drop_rate must lie in [0, 1]")
    rng = rng_from_seed(seed)

    def offset():
        if sigma_pos == 0.0:
            return np.zeros(3)
        return rng.normal(0.0, sigma_pos, size=3)

    # Walls: jitter xy only, so baselines stay horizontal; openings follow
    # their wall's offset rigidly, which preserves the in-wall fit.
    wall_offsets: dict[int, np.ndarray] = {}
    wall_id_map: dict[int, int] = {}
    kept_walls: list[Wall] = []
    for w in scene.walls:
        if drop_rate > 0.0 and rng.random() < drop_rate:
            continue
        delta = offset()
        delta[2] = 0.0
        wall_offsets[w.id] = delta
        wall_id_map[w.id] = len(kept_walls)
        a = tuple(np.array(w.a) + delta)
        b = tuple(np.array(w.b) + delta)
        kept_walls.append(replace(w, id=len(kept_walls), a=a, b=b))

    kept_openings: list[Opening] = []
    counters = {"door": 0, "window": 0}
    for o in scene.openings:
        if o.wall_id not in wall_id_map:
            continue
        if drop_rate > 0.0 and rng.random() < drop_rate:
            continue
        center = tuple(np.array(o.center) + wall_offsets[o.wall_id])
        kept_openings.append(
            replace(o, id=counters[o.kind], wall_id=wall_id_map[o.wall_id], center=center)
        )
        counters[o.kind] += 1

    kept_boxes: list[OrientedBox3D] = []
    for b in scene.boxes:
        if drop_rate > 0.0 and rng.random() < drop_rate:
            continue
        angle = b.angle_z
        if sigma_angle > 0.0:
            angle = normalize_angle(angle + float(rng.normal(0.0, sigma_angle)))
        center = tuple(np.array(b.center) + offset())
        kept_boxes.append(replace(b, id=len(kept_boxes), center=center, angle_z=angle))

    return Scene(tuple(kept_walls), tuple(kept_openings), tuple(kept_boxes))


def write_corpus(out_dir: str | Path, count: int, config: GenConfig | None = None, seed: int = 0) -> list[Path]:
    """Emit ``count`` scenes as <out>/<scene_id>/{scene.txt, points.ply}."""
    config = config or GenConfig()
    out = Path(out_dir)
    written = []
    for i in range(count):
        scene = gen_scene(config, seed=seed + i)
        cloud = sample_cloud(scene, config, seed=seed + i)
        scene_dir = out / f"scene_{i:04d}"
        scene_dir.mkdir(parents=True, exist_ok=True)
        (scene_dir / "scene.txt").write_text(serialize_scene(scene), encoding="utf-8")
        (scene_dir / "points.ply").write_bytes(save_ply(cloud))
        written.append(scene_dir)
    return written
