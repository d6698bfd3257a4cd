"""Scene data model: walls, openings, oriented boxes, and whole-scene transforms.

All types are immutable value objects. Coordinates are metric, right-handed,
z-up. A scene is an ordered collection of elements whose ids are dense per
element family (wall / door / window / bbox).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Literal, Sequence

Vec3 = tuple[float, float, float]

OpeningKind = Literal["door", "window"]

#: Openings must lie inside their host wall quad, up to this slack (meters).
WALL_FIT_TOLERANCE = 0.01


def _vec3(p: Sequence[float]) -> Vec3:
    x, y, z = p
    return (float(x), float(y), float(z))


def normalize_angle(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    a = math.fmod(angle + math.pi, 2.0 * math.pi)
    if a < 0.0:
        a += 2.0 * math.pi
    return a - math.pi


@dataclass(frozen=True)
class Wall:
    """Vertical wall: horizontal baseline a->b extruded up by ``height``."""

    id: int
    a: Vec3
    b: Vec3
    height: float
    thickness: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _vec3(self.a))
        object.__setattr__(self, "b", _vec3(self.b))

    @property
    def ident(self) -> str:
        return f"wall_{self.id}"

    def baseline_length(self) -> float:
        ax, ay, az = self.a
        bx, by, bz = self.b
        return math.sqrt((bx - ax) ** 2 + (by - ay) ** 2 + (bz - az) ** 2)


@dataclass(frozen=True)
class Opening:
    """Door or window: an axis-aligned rectangle in its host wall's plane.

    ``center`` is a world-space 3D point; the rectangle extends ``width``
    along the wall baseline direction and ``height`` along z.
    """

    id: int
    kind: OpeningKind
    wall_id: int
    center: Vec3
    width: float
    height: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _vec3(self.center))

    @property
    def ident(self) -> str:
        return f"{self.kind}_{self.id}"


@dataclass(frozen=True)
class OrientedBox3D:
    """Cuboid with a z-axis rotation: center, yaw angle, per-axis extents."""

    id: int
    category: str
    center: Vec3
    angle_z: float
    scale: Vec3

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _vec3(self.center))
        object.__setattr__(self, "scale", _vec3(self.scale))

    @property
    def ident(self) -> str:
        return f"bbox_{self.id}"

    def volume(self) -> float:
        sx, sy, sz = self.scale
        return sx * sy * sz


@dataclass(frozen=True)
class Scene:
    """Ordered, immutable scene: walls, openings (doors/windows), boxes."""

    walls: tuple[Wall, ...] = ()
    openings: tuple[Opening, ...] = ()
    boxes: tuple[OrientedBox3D, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "walls", tuple(self.walls))
        object.__setattr__(self, "openings", tuple(self.openings))
        object.__setattr__(self, "boxes", tuple(self.boxes))

    @property
    def doors(self) -> tuple[Opening, ...]:
        return tuple(o for o in self.openings if o.kind == "door")

    @property
    def windows(self) -> tuple[Opening, ...]:
        return tuple(o for o in self.openings if o.kind == "window")

    def wall_by_id(self, wall_id: int) -> Wall | None:
        for w in self.walls:
            if w.id == wall_id:
                return w
        return None

    def is_empty(self) -> bool:
        return not (self.walls or self.openings or self.boxes)

    def __len__(self) -> int:
        return len(self.walls) + len(self.openings) + len(self.boxes)


@dataclass(frozen=True)
class Violation:
    """One broken invariant: which element, which rule, and a description."""

    element: str
    rule: str
    message: str = ""

    def __str__(self) -> str:
        msg = f": {self.message}" if self.message else ""
        return f"{self.element}: {self.rule}{msg}"


class SceneValidationError(ValueError):
    """Raised when an operation requires a valid scene and gets violations."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid scene: {lines}")


def corner_points(scene: Scene) -> list[Vec3]:
    """All element corner points of a scene (wall quads, opening rects, box
    corners); used for bounds and normalization."""
    pts: list[Vec3] = []
    for w in scene.walls:
        ax, ay, az = w.a
        bx, by, bz = w.b
        pts += [w.a, w.b, (ax, ay, az + w.height), (bx, by, bz + w.height)]
    for o in scene.openings:
        wall = scene.wall_by_id(o.wall_id)
        if wall is None:
            pts.append(o.center)
            continue
        ux, uy = _baseline_dir(wall)
        cx, cy, cz = o.center
        hw, hh = o.width / 2.0, o.height / 2.0
        for su in (-1.0, 1.0):
            for sv in (-1.0, 1.0):
                pts.append((cx + su * hw * ux, cy + su * hw * uy, cz + sv * hh))
    for b in scene.boxes:
        c, s = math.cos(b.angle_z), math.sin(b.angle_z)
        cx, cy, cz = b.center
        hx, hy, hz = (b.scale[0] / 2.0, b.scale[1] / 2.0, b.scale[2] / 2.0)
        for sx in (-1.0, 1.0):
            for sy in (-1.0, 1.0):
                x = cx + sx * hx * c - sy * hy * s
                y = cy + sx * hx * s + sy * hy * c
                pts += [(x, y, cz - hz), (x, y, cz + hz)]
    return pts


def _baseline_dir(wall: Wall) -> tuple[float, float]:
    ax, ay, _ = wall.a
    bx, by, _ = wall.b
    dx, dy = bx - ax, by - ay
    n = math.hypot(dx, dy)
    if n == 0.0:
        return (0.0, 0.0)
    return (dx / n, dy / n)


def _check_ids_dense(elements: Iterable, family: str, out: list[Violation]) -> None:
    ids = [e.id for e in elements]
    seen: set[int] = set()
    for e_id in ids:
        if e_id in seen:
            out.append(Violation(f"{family}_{e_id}", "duplicate_id"))
        seen.add(e_id)
    if seen and sorted(seen) != list(range(len(seen))):
        first_bad = min(i for i in seen if i < 0 or i >= len(seen))
        out.append(
            Violation(
                f"{family}_{first_bad}",
                "ids_not_dense",
                f"{family} ids must be 0..{len(seen) - 1}",
            )
        )


def validate_scene(scene: Scene, *, wall_fit_tolerance: float = WALL_FIT_TOLERANCE) -> list[Violation]:
    """Check every type invariant; returns violations (empty when valid).

    Violations are data, not errors: each carries the element ident and the
    broken rule name.
    """
    out: list[Violation] = []

    _check_ids_dense(scene.walls, "wall", out)
    _check_ids_dense(scene.doors, "door", out)
    _check_ids_dense(scene.windows, "window", out)
    _check_ids_dense(scene.boxes, "bbox", out)

    for w in scene.walls:
        if not all(math.isfinite(v) for v in (*w.a, *w.b, w.height, w.thickness)):
            out.append(Violation(w.ident, "nonfinite_value"))
            continue
        if w.height <= 0:
            out.append(Violation(w.ident, "positive_height", f"height={w.height}"))
        if w.thickness < 0:
            out.append(Violation(w.ident, "nonnegative_thickness"))
        if w.baseline_length() == 0.0:
            out.append(Violation(w.ident, "degenerate_baseline", "|b - a| must be > 0"))
        if w.a[2] != w.b[2]:
            out.append(Violation(w.ident, "baseline_not_horizontal", f"a.z={w.a[2]} b.z={w.b[2]}"))

    for o in scene.openings:
        if not all(math.isfinite(v) for v in (*o.center, o.width, o.height)):
            out.append(Violation(o.ident, "nonfinite_value"))
            continue
        if o.width <= 0:
            out.append(Violation(o.ident, "positive_width"))
        if o.height <= 0:
            out.append(Violation(o.ident, "positive_height"))
        wall = scene.wall_by_id(o.wall_id)
        if wall is None:
            out.append(Violation(o.ident, "dangling_wall_ref", f"wall_{o.wall_id} does not exist"))
            continue
        if o.width > 0 and o.height > 0 and wall.baseline_length() > 0:
            rule = _opening_fit_rule(o, wall, wall_fit_tolerance)
            if rule is not None:
                out.append(Violation(o.ident, rule))

    for b in scene.boxes:
        if not all(math.isfinite(v) for v in (*b.center, b.angle_z, *b.scale)):
            out.append(Violation(b.ident, "nonfinite_value"))
            continue
        if min(b.scale) <= 0:
            out.append(Violation(b.ident, "positive_scale", f"scale={b.scale}"))
        if not (-math.pi <= b.angle_z < math.pi):
            out.append(Violation(b.ident, "angle_out_of_range", f"angle_z={b.angle_z}"))

    return out


def _opening_fit_rule(o: Opening, wall: Wall, tol: float) -> str | None:
    """Opening rectangle must lie on the wall plane and inside the wall quad
    (extended by ``tol``)."""
    ax, ay, az = wall.a
    ux, uy = _baseline_dir(wall)
    # Signed off-plane distance: component of center - a along the in-plane
    # horizontal normal of the wall.
    nx, ny = -uy, ux
    dx, dy = o.center[0] - ax, o.center[1] - ay
    if abs(dx * nx + dy * ny) > tol:
        return "off_wall_plane"
    along = dx * ux + dy * uy
    length = wall.baseline_length()
    if along - o.width / 2.0 < -tol or along + o.width / 2.0 > length + tol:
        return "outside_wall_quad"
    z0, z1 = o.center[2] - o.height / 2.0, o.center[2] + o.height / 2.0
    if z0 < az - tol or z1 > az + wall.height + tol:
        return "outside_wall_quad"
    return None


def require_valid(scene: Scene) -> None:
    """Raise SceneValidationError if the scene has violations."""
    violations = validate_scene(scene)
    if violations:
        raise SceneValidationError(violations)


def apply_similarity(
    scene: Scene,
    rotation_z: float = 0.0,
    scale: float = 1.0,
    translation: Sequence[float] = (0.0, 0.0, 0.0),
) -> Scene:
    """Rotate about z, uniformly scale, then translate a whole scene.

    Lengths (wall height/thickness, opening sizes, box extents) are scaled;
    box angles are incremented by ``rotation_z`` and renormalized.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    tx, ty, tz = _vec3(translation)
    c, s = math.cos(rotation_z), math.sin(rotation_z)

    def xf(p: Vec3) -> Vec3:
        x, y, z = p
        return (
            scale * (x * c - y * s) + tx,
            scale * (x * s + y * c) + ty,
            scale * z + tz,
        )

    walls = tuple(
        replace(w, a=xf(w.a), b=xf(w.b), height=w.height * scale, thickness=w.thickness * scale)
        for w in scene.walls
    )
    openings = tuple(
        replace(o, center=xf(o.center), width=o.width * scale, height=o.height * scale)
        for o in scene.openings
    )
    boxes = tuple(
        replace(
            b,
            center=xf(b.center),
            angle_z=normalize_angle(b.angle_z + rotation_z),
            scale=(b.scale[0] * scale, b.scale[1] * scale, b.scale[2] * scale),
        )
        for b in scene.boxes
    )
    return Scene(walls, openings, boxes)
