"""Exact geometric kernels for the layout and detection metrics.

Walls and openings become bounded plane quads; boxes become corner sets with
a 2D footprint. Planar IoU projects the prediction into the ground-truth
element's plane; box IoU combines footprint intersection (convex clipping)
with a z-interval overlap. All polygon math is done with a Sutherland-
Hodgman half-plane clipper and the shoelace formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import Opening, OrientedBox3D, Scene, Wall

#: Point-on-line classification tolerance for half-plane clipping (meters).
CLIP_EPS = 1e-9

#: Geometric consistency tolerance for quad construction (meters).
QUAD_EPS = 1e-6


@dataclass(frozen=True)
class Polygon2D:
    """Planar polygon, CCW cyclic vertex order; may be empty or degenerate."""

    vertices: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "vertices", tuple((float(x), float(y)) for x, y in self.vertices)
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def signed_area(self) -> float:
        return _signed_area(self.vertices)

    def area(self) -> float:
        return abs(self.signed_area())


def _signed_area(vertices) -> float:
    n = len(vertices)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return acc / 2.0


def _is_convex(vertices) -> bool:
    """Cross-product sign test; collinear edges (zero cross) are allowed."""
    n = len(vertices)
    if n < 3:
        return True
    sign = 0
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cx, cy = vertices[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if abs(cross) <= CLIP_EPS:
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def ccw(polygon: Polygon2D) -> Polygon2D:
    """Reorient a polygon counter-clockwise (no-op on degenerate input)."""
    if polygon.signed_area() < 0:
        return Polygon2D(tuple(reversed(polygon.vertices)))
    return polygon


@dataclass(frozen=True)
class PlaneQuad:
    """Four coplanar corners in cyclic order plus the plane's unit normal."""

    corners: tuple[tuple[float, float, float], ...]
    normal: tuple[float, float, float]

    @staticmethod
    def from_corners(corners) -> "PlaneQuad":
        c = np.asarray(corners, dtype=float)
        if c.shape != (4, 3):
            raise ValueError(f"quad needs 4 3D corners, got shape {c.shape}")
        u = c[1] - c[0]
        v = c[3] - c[0]
        n = np.cross(u, v)
        norm = np.linalg.norm(n)
        if norm < QUAD_EPS:
            raise ValueError("degenerate quad: corners are collinear")
        n = n / norm
        if abs(float(np.dot(c[2] - c[0], n))) > QUAD_EPS:
            raise ValueError("quad corners are not coplanar")
        if not _is_convex([(float(np.dot(p - c[0], u)), float(np.dot(p - c[0], v))) for p in c]):
            raise ValueError("quad is not convex")
        return PlaneQuad(
            tuple(tuple(float(x) for x in p) for p in c),
            tuple(float(x) for x in n),
        )

    def frame(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """In-plane frame: origin = corner 0, unit axes along edges 0->1 and
        0->3 (the second axis is orthonormalized so in-frame areas are true
        in-plane areas for any quad shape)."""
        c = np.asarray(self.corners)
        u = c[1] - c[0]
        lu = np.linalg.norm(u)
        if lu < QUAD_EPS:
            raise ValueError("degenerate quad frame")
        u = u / lu
        v = c[3] - c[0]
        v = v - (v @ u) * u
        lv = np.linalg.norm(v)
        if lv < QUAD_EPS:
            raise ValueError("degenerate quad frame")
        return c[0], u, v / lv

    def own_polygon(self) -> Polygon2D:
        """The quad's own corners expressed in its in-plane frame."""
        origin, u, v = self.frame()
        c = np.asarray(self.corners)
        d = c - origin
        return ccw(Polygon2D(tuple((float(p @ u), float(p @ v)) for p in d)))

    def area(self) -> float:
        return self.own_polygon().area()


@dataclass(frozen=True)
class BoxGeometry:
    """Derived box geometry: 8 corners, xy footprint, z interval."""

    corners: tuple[tuple[float, float, float], ...]
    footprint: Polygon2D
    z_range: tuple[float, float]


def element_quad(element: Wall | Opening, scene: Scene) -> PlaneQuad:
    """Bounded plane quad of a layout element.

    Walls extrude their baseline up by their height (thickness is ignored:
    metric geometry treats walls as plane segments). Openings are rectangles
    in their host wall's plane.
    """
    if isinstance(element, Wall):
        ax, ay, az = element.a
        bx, by, bz = element.b
        if element.baseline_length() == 0.0:
            raise ValueError(f"{element.ident}: zero-length baseline")
        h = element.height
        return PlaneQuad.from_corners(
            [(ax, ay, az), (bx, by, bz), (bx, by, bz + h), (ax, ay, az + h)]
        )
    wall = scene.wall_by_id(element.wall_id)
    if wall is None:
        raise ValueError(f"{element.ident}: dangling reference to wall_{element.wall_id}")
    if wall.baseline_length() == 0.0:
        raise ValueError(f"{wall.ident}: zero-length baseline")
    ax, ay, _ = wall.a
    bx, by, _ = wall.b
    n = math.hypot(bx - ax, by - ay)
    ux, uy = (bx - ax) / n, (by - ay) / n
    cx, cy, cz = element.center
    hw, hh = element.width / 2.0, element.height / 2.0
    return PlaneQuad.from_corners(
        [
            (cx - hw * ux, cy - hw * uy, cz - hh),
            (cx + hw * ux, cy + hw * uy, cz - hh),
            (cx + hw * ux, cy + hw * uy, cz + hh),
            (cx - hw * ux, cy - hw * uy, cz + hh),
        ]
    )


def project_quad(pred: PlaneQuad, target: PlaneQuad) -> Polygon2D:
    """Orthogonally project ``pred``'s corners onto ``target``'s plane,
    expressed in the target's in-plane frame.

    The projection of a convex quad is convex; when the quads are
    perpendicular it collapses to a zero-area polygon. Output is CCW.
    """
    origin, u, v = target.frame()
    c = np.asarray(pred.corners)
    d = c - origin
    return ccw(Polygon2D(tuple((float(p @ u), float(p @ v)) for p in d)))


def convex_clip_area(subject: Polygon2D, clip: Polygon2D) -> float:
    """Area of the intersection of two convex polygons (half-plane clipping).

    Degenerate or empty inputs intersect with area 0. Raises on non-convex
    input (cross-product sign test).
    """
    for name, poly in (("subject", subject), ("clip", clip)):
        if not _is_convex(poly.vertices):
            raise ValueError(f"{name} polygon is not convex")
    if len(subject) < 3 or len(clip) < 3:
        return 0.0
    if clip.signed_area() <= 0.0:
        # Degenerate clip region (zero area) or clockwise input; the clipper
        # below assumes CCW half-planes.
        clip = ccw(clip)
        if clip.signed_area() <= 0.0:
            return 0.0
    subject = ccw(subject)

    output = list(subject.vertices)
    clip_verts = clip.vertices
    for i in range(len(clip_verts)):
        if not output:
            return 0.0
        ax, ay = clip_verts[i]
        bx, by = clip_verts[(i + 1) % len(clip_verts)]
        ex, ey = bx - ax, by - ay

        def inside(p) -> bool:
            return ex * (p[1] - ay) - ey * (p[0] - ax) >= -CLIP_EPS

        def intersect(p, q):
            # Line p-q against the infinite edge line a-b.
            dpx, dpy = q[0] - p[0], q[1] - p[1]
            denom = ex * dpy - ey * dpx
            if abs(denom) < CLIP_EPS * CLIP_EPS:
                return q
            t = (ex * (ay - p[1]) - ey * (ax - p[0])) / denom
            return (p[0] + t * dpx, p[1] + t * dpy)

        incoming = output
        output = []
        s = incoming[-1]
        for e in incoming:
            if inside(e):
                if not inside(s):
                    output.append(intersect(s, e))
                output.append(e)
            elif inside(s):
                output.append(intersect(s, e))
            s = e
    return abs(_signed_area(output))


def iou_planar(pred: PlaneQuad, gt: PlaneQuad) -> float:
    """Planar IoU in the ground-truth plane.

    The prediction is projected onto gt's plane; IoU uses the projected
    prediction's area in the union. Not symmetric: the projection direction
    is defined by the ground truth. Degenerate projections give 0.
    """
    projected = project_quad(pred, gt)
    area_pred = projected.area()
    gt_poly = gt.own_polygon()
    area_gt = gt_poly.area()
    if area_pred <= 0.0 or area_gt <= 0.0:
        return 0.0
    inter = convex_clip_area(projected, gt_poly)
    union = area_pred + area_gt - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, inter / union)


def box_geometry(box: OrientedBox3D) -> BoxGeometry:
    """Corners, CCW footprint, and z interval of an oriented box."""
    c, s = math.cos(box.angle_z), math.sin(box.angle_z)
    cx, cy, cz = box.center
    hx, hy, hz = box.scale[0] / 2.0, box.scale[1] / 2.0, box.scale[2] / 2.0
    # CCW in local frame; rotation preserves orientation.
    local = [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)]
    foot = [(cx + x * c - y * s, cy + x * s + y * c) for x, y in local]
    corners = []
    for dz in (-hz, hz):
        corners += [(x, y, cz + dz) for x, y in foot]
    return BoxGeometry(
        corners=tuple(corners),
        footprint=Polygon2D(tuple(foot)),
        z_range=(cz - hz, cz + hz),
    )


def _box_sort_key(box: OrientedBox3D):
    return (*box.center, box.angle_z, *box.scale, box.category)


def iou_box3d(a: OrientedBox3D, b: OrientedBox3D) -> float:
    """Volume IoU of two z-rotated boxes; exact via footprint clipping.

    Arguments are canonically ordered first so the result is exactly
    symmetric despite floating-point clipping.
    """
    if _box_sort_key(b) < _box_sort_key(a):
        a, b = b, a
    ga, gb = box_geometry(a), box_geometry(b)
    z_overlap = min(ga.z_range[1], gb.z_range[1]) - max(ga.z_range[0], gb.z_range[0])
    if z_overlap <= 0.0:
        return 0.0
    inter_area = convex_clip_area(ga.footprint, gb.footprint)
    inter = inter_area * z_overlap
    if inter <= 0.0:
        return 0.0
    union = a.volume() + b.volume() - inter
    return min(1.0, inter / union)
