"""Coordinate quantization: fixed-width bins over a shifted origin.

Continuous coordinates map to integer bin indices (clamped to the bin range)
and back to bin centers. Scene-level helpers quantize positions against the
spec origin, lengths against a zero origin, and box yaw angles against a
dedicated [-pi, pi) grid with the same bin count, so a quantized script is
all-integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .scene import Scene, Vec3, corner_points

DEFAULT_BIN_SIZE = 0.025
DEFAULT_NUM_BINS = 1280


@dataclass(frozen=True)
class QuantizationSpec:
    """Binning parameters: origin shift, bin width (m), and bin count."""

    origin: Vec3 = (0.0, 0.0, 0.0)
    bin_size: float = DEFAULT_BIN_SIZE
    num_bins: int = DEFAULT_NUM_BINS

    def __post_init__(self) -> None:
        if self.bin_size <= 0:
            raise ValueError(f"bin_size must be > 0, got {self.bin_size}")
        if self.num_bins < 1:
            raise ValueError(f"num_bins must be >= 1, got {self.num_bins}")
        ox, oy, oz = self.origin
        object.__setattr__(self, "origin", (float(ox), float(oy), float(oz)))

    def angle_bin_size(self) -> float:
        return 2.0 * math.pi / self.num_bins


def quantize_coord(x: float, spec: QuantizationSpec, axis: int = 0) -> int:
    """Bin index of ``x``: floor((x - origin) / bin_size), clamped in range.

    Out-of-range values clamp to the first/last bin so every coordinate maps
    to a valid token.
    """
    i = math.floor((x - spec.origin[axis]) / spec.bin_size)
    return max(0, min(spec.num_bins - 1, i))


def dequantize_coord(i: int, spec: QuantizationSpec, axis: int = 0) -> float:
    """Bin-center coordinate of index ``i``: origin + (i + 0.5) * bin_size."""
    if not 0 <= i < spec.num_bins:
        raise ValueError(f"bin index {i} out of range [0, {spec.num_bins})")
    return spec.origin[axis] + (i + 0.5) * spec.bin_size


def quantize_length(x: float, spec: QuantizationSpec) -> int:
    """Bin index for a length: like quantize_coord but with zero origin."""
    i = math.floor(x / spec.bin_size)
    return max(0, min(spec.num_bins - 1, i))


def dequantize_length(i: int, spec: QuantizationSpec) -> float:
    if not 0 <= i < spec.num_bins:
        raise ValueError(f"bin index {i} out of range [0, {spec.num_bins})")
    return (i + 0.5) * spec.bin_size


def quantize_angle(a: float, spec: QuantizationSpec) -> int:
    """Bin index of an angle over [-pi, pi), clamped like coordinates."""
    i = math.floor((a + math.pi) / spec.angle_bin_size())
    return max(0, min(spec.num_bins - 1, i))


def dequantize_angle(i: int, spec: QuantizationSpec) -> float:
    if not 0 <= i < spec.num_bins:
        raise ValueError(f"bin index {i} out of range [0, {spec.num_bins})")
    return -math.pi + (i + 0.5) * spec.angle_bin_size()


def _q3(p: Vec3, spec: QuantizationSpec) -> tuple[int, int, int]:
    return (
        quantize_coord(p[0], spec, 0),
        quantize_coord(p[1], spec, 1),
        quantize_coord(p[2], spec, 2),
    )


def _dq3(p: Sequence[float], spec: QuantizationSpec) -> Vec3:
    return (
        dequantize_coord(int(p[0]), spec, 0),
        dequantize_coord(int(p[1]), spec, 1),
        dequantize_coord(int(p[2]), spec, 2),
    )


def quantize_scene(scene: Scene, spec: QuantizationSpec) -> Scene:
    """Map every scene value to its integer bin (stored as floats).

    Positions use the spec origin, lengths a zero origin, box angles the
    angular grid. The result is what a quantized script serializes to.
    """
    walls = tuple(
        replace(
            w,
            a=tuple(float(v) for v in _q3(w.a, spec)),
            b=tuple(float(v) for v in _q3(w.b, spec)),
            height=float(quantize_length(w.height, spec)),
            thickness=float(quantize_length(w.thickness, spec)),
        )
        for w in scene.walls
    )
    openings = tuple(
        replace(
            o,
            center=tuple(float(v) for v in _q3(o.center, spec)),
            width=float(quantize_length(o.width, spec)),
            height=float(quantize_length(o.height, spec)),
        )
        for o in scene.openings
    )
    boxes = tuple(
        replace(
            b,
            center=tuple(float(v) for v in _q3(b.center, spec)),
            angle_z=float(quantize_angle(b.angle_z, spec)),
            scale=tuple(float(quantize_length(s, spec)) for s in b.scale),
        )
        for b in scene.boxes
    )
    return Scene(walls, openings, boxes)


def dequantize_scene(scene: Scene, spec: QuantizationSpec) -> Scene:
    """Inverse of quantize_scene: integer-bin values back to bin centers."""
    walls = tuple(
        replace(
            w,
            a=_dq3(w.a, spec),
            b=_dq3(w.b, spec),
            height=dequantize_length(int(w.height), spec),
            thickness=dequantize_length(int(w.thickness), spec),
        )
        for w in scene.walls
    )
    openings = tuple(
        replace(
            o,
            center=_dq3(o.center, spec),
            width=dequantize_length(int(o.width), spec),
            height=dequantize_length(int(o.height), spec),
        )
        for o in scene.openings
    )
    boxes = tuple(
        replace(
            b,
            center=_dq3(b.center, spec),
            angle_z=dequantize_angle(int(b.angle_z), spec),
            scale=tuple(dequantize_length(int(s), spec) for s in b.scale),
        )
        for b in scene.boxes
    )
    return Scene(walls, openings, boxes)


def snap_scene_to_grid(scene: Scene, spec: QuantizationSpec | None = None) -> Scene:
    """Snap every value to the nearest bin-size multiple, as an exact
    3-decimal float.

    Scenes on this grid survive serialize -> parse byte- and value-exactly
    (the default bin size of 0.025 m needs exactly 3 decimals). Angles snap
    to the plain 3-decimal grid.
    """
    spec = spec or QuantizationSpec()
    b = spec.bin_size

    def snap(x: float) -> float:
        return float(f"{round(x / b) * b:.3f}")

    def snap_angle(a: float) -> float:
        # Clamp so values just below pi (or at -pi) stay inside [-pi, pi)
        # after rounding to 3 decimals.
        return min(3.141, max(-3.141, float(f"{a:.3f}")))

    def snap3(p: Vec3) -> Vec3:
        return (snap(p[0]), snap(p[1]), snap(p[2]))

    walls = tuple(
        replace(w, a=snap3(w.a), b=snap3(w.b), height=snap(w.height), thickness=snap(w.thickness))
        for w in scene.walls
    )
    openings = tuple(
        replace(o, center=snap3(o.center), width=snap(o.width), height=snap(o.height))
        for o in scene.openings
    )
    boxes = tuple(
        replace(b_, center=snap3(b_.center), angle_z=snap_angle(b_.angle_z), scale=snap3(b_.scale))
        for b_ in scene.boxes
    )
    return Scene(walls, openings, boxes)


def normalize_scene(scene: Scene, cloud=None):
    """Translate scene (and cloud) so the joint minimum corner is at 0.

    Returns ``(scene, cloud, spec)`` where the spec's origin is the original
    minimum corner: original = normalized + origin, and quantizing original
    coordinates against the returned spec equals quantizing normalized ones
    against a zero-origin spec.
    """
    from .scene import apply_similarity  # local import keeps module load light

    pts = corner_points(scene)
    cloud_empty = cloud is None or len(cloud) == 0
    if not pts and cloud_empty:
        raise ValueError("normalize_scene: both scene and cloud are empty")

    mins = [math.inf, math.inf, math.inf]
    for p in pts:
        for k in range(3):
            mins[k] = min(mins[k], p[k])
    if not cloud_empty:
        cmins = cloud.xyz.min(axis=0)
        for k in range(3):
            mins[k] = min(mins[k], float(cmins[k]))

    origin = (mins[0], mins[1], mins[2])
    shifted = apply_similarity(scene, translation=(-origin[0], -origin[1], -origin[2]))
    out_cloud = cloud
    if not cloud_empty:
        out_cloud = cloud.translated((-origin[0], -origin[1], -origin[2]))
    return shifted, out_cloud, QuantizationSpec(origin=origin)
