"""Point clouds: the N x 6 (XYZ + RGB) data model, PLY I/O, voxel-grid
downsampling, farthest point sampling, and hierarchy token counts.

Positions are float64 meters; colors live in [0, 1]. Clouds are immutable:
operations return new instances.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from ._rng import rng_from_seed


@dataclass(frozen=True)
class PointCloud:
    """Immutable point set; ``points`` is an (N, 6) float64 array of
    x, y, z, r, g, b with colors in [0, 1]."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 6:
            raise ValueError(f"points must be (N, 6), got {pts.shape}")
        if pts.size and not np.all(np.isfinite(pts[:, :3])):
            raise ValueError("coordinates must be finite")
        if pts.size and (pts[:, 3:].min() < 0.0 or pts[:, 3:].max() > 1.0):
            raise ValueError("colors must lie in [0, 1]")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @staticmethod
    def empty() -> "PointCloud":
        return PointCloud(np.empty((0, 6)))

    @staticmethod
    def from_arrays(xyz, rgb=None) -> "PointCloud":
        xyz = np.asarray(xyz, dtype=np.float64).reshape(-1, 3)
        if rgb is None:
            rgb = np.zeros_like(xyz)
        rgb = np.asarray(rgb, dtype=np.float64).reshape(-1, 3)
        return PointCloud(np.hstack([xyz, rgb]))

    @property
    def xyz(self) -> np.ndarray:
        return self.points[:, :3]

    @property
    def rgb(self) -> np.ndarray:
        return self.points[:, 3:]

    def __len__(self) -> int:
        return self.points.shape[0]

    def aabb(self) -> tuple[np.ndarray, np.ndarray]:
        if len(self) == 0:
            raise ValueError("empty cloud has no bounding box")
        return self.xyz.min(axis=0), self.xyz.max(axis=0)

    def translated(self, offset) -> "PointCloud":
        out = self.points.copy()
        out[:, :3] += np.asarray(offset, dtype=np.float64)
        return PointCloud(out)

    def transformed(self, rotation_z: float = 0.0, scale: float = 1.0, translation=(0, 0, 0)) -> "PointCloud":
        """Rotate about z, scale, translate positions; colors untouched."""
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        c, s = np.cos(rotation_z), np.sin(rotation_z)
        rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        out = self.points.copy()
        out[:, :3] = scale * (self.xyz @ rot.T) + np.asarray(translation, dtype=np.float64)
        return PointCloud(out)


class PlyError(ValueError):
    """Malformed, truncated, or unsupported PLY content."""


_PLY_TYPES = {
    "float": ("<f4", 4),
    "float32": ("<f4", 4),
    "double": ("<f8", 8),
    "float64": ("<f8", 8),
    "uchar": ("u1", 1),
    "uint8": ("u1", 1),
    "char": ("i1", 1),
    "int8": ("i1", 1),
    "short": ("<i2", 2),
    "ushort": ("<u2", 2),
    "int": ("<i4", 4),
    "int32": ("<i4", 4),
    "uint": ("<u4", 4),
    "uint32": ("<u4", 4),
}

_REQUIRED = ("x", "y", "z", "red", "green", "blue")


def load_ply(data: bytes) -> PointCloud:
    """Read a PLY point cloud (ascii or binary_little_endian).

    The vertex element must provide float/double x, y, z and uchar
    red/green/blue; unknown fixed-size properties are skipped. Colors are
    scaled to [0, 1].
    """
    if not data.startswith(b"ply"):
        raise PlyError("not a PLY file (missing 'ply' magic)")
    header_end = data.find(b"end_header")
    if header_end < 0:
        raise PlyError("malformed header: no end_header")
    nl = data.find(b"\n", header_end)
    if nl < 0:
        raise PlyError("malformed header: end_header line not terminated")
    body = data[nl + 1 :]
    header_lines = data[:header_end].decode("ascii", errors="replace").splitlines()

    fmt = None
    elements: list[tuple[str, int, list[tuple[str, str]]]] = []  # (name, count, [(type, prop)])
    for line in header_lines[1:]:
        parts = line.split()
        if not parts or parts[0] == "comment":
            continue
        if parts[0] == "format":
            if len(parts) < 2 or parts[1] not in ("ascii", "binary_little_endian"):
                raise PlyError(f"unsupported format: {line!r}")
            fmt = parts[1]
        elif parts[0] == "element":
            if len(parts) != 3:
                raise PlyError(f"malformed element line: {line!r}")
            try:
                elements.append((parts[1], int(parts[2]), []))
            except ValueError:
                raise PlyError(f"malformed element count: {line!r}") from None
        elif parts[0] == "property":
            if not elements:
                raise PlyError("property before any element")
            if parts[1] == "list":
                raise PlyError("list properties are not supported")
            if len(parts) != 3:
                raise PlyError(f"malformed property line: {line!r}")
            if parts[1] not in _PLY_TYPES:
                raise PlyError(f"unsupported property type {parts[1]!r}")
            elements[-1][2].append((parts[1], parts[2]))
    if fmt is None:
        raise PlyError("malformed header: no format line")

    vertex = next((e for e in elements if e[0] == "vertex"), None)
    if vertex is None:
        raise PlyError("no vertex element")
    if elements.index(vertex) != 0:
        # Leading non-vertex elements could in principle be skipped, but
        # points-first is the only layout we emit or accept.
        raise PlyError("vertex element must come first")
    _, count, props = vertex
    names = [p for _, p in props]
    for req in _REQUIRED:
        if req not in names:
            raise PlyError(f"vertex element missing property {req!r}")
    for typ, name in props:
        if name in ("x", "y", "z") and typ not in ("float", "float32", "double", "float64"):
            raise PlyError(f"unsupported property type {typ!r} for {name!r}")
        if name in ("red", "green", "blue") and typ not in ("uchar", "uint8"):
            raise PlyError(f"unsupported property type {typ!r} for {name!r}")

    if fmt == "ascii":
        rows = body.decode("ascii", errors="replace").split()
        width = len(props)
        if len(rows) < count * width:
            raise PlyError(
                f"truncated payload: expected {count} vertices, got {len(rows) // width}"
            )
        vals = np.array(rows[: count * width], dtype=np.float64).reshape(count, width)
        cols = {name: vals[:, i] for i, (_, name) in enumerate(props)}
    else:
        dtype = np.dtype([(name, _PLY_TYPES[typ][0]) for typ, name in props])
        need = dtype.itemsize * count
        if len(body) < need:
            raise PlyError(
                f"truncated payload: expected {need} bytes, got {len(body)}"
            )
        rec = np.frombuffer(body[:need], dtype=dtype)
        cols = {name: rec[name].astype(np.float64) for _, name in props}

    xyz = np.stack([cols["x"], cols["y"], cols["z"]], axis=1)
    rgb = np.stack([cols["red"], cols["green"], cols["blue"]], axis=1) / 255.0
    return PointCloud.from_arrays(xyz, rgb)


def save_ply(cloud: PointCloud, ascii_format: bool = False) -> bytes:
    """Write a PLY point cloud: double x/y/z, uchar red/green/blue.

    Binary little-endian by default; positions round-trip losslessly, colors
    round to the nearest of 256 levels.
    """
    n = len(cloud)
    fmt = "ascii 1.0" if ascii_format else "binary_little_endian 1.0"
    header = (
        "ply\n"
        f"format {fmt}\n"
        f"element vertex {n}\n"
        "property double x\n"
        "property double y\n"
        "property double z\n"
        "property uchar red\n"
        "property uchar green\n"
        "property uchar blue\n"
        "end_header\n"
    )
    colors = np.rint(cloud.rgb * 255.0).clip(0, 255).astype(np.uint8)
    buf = io.BytesIO()
    buf.write(header.encode("ascii"))
    if ascii_format:
        for i in range(n):
            x, y, z = (float(v) for v in cloud.xyz[i])
            r, g, b = (int(v) for v in colors[i])
            buf.write(f"{x!r} {y!r} {z!r} {r} {g} {b}\n".encode("ascii"))
    else:
        rec = np.empty(
            n,
            dtype=[("x", "<f8"), ("y", "<f8"), ("z", "<f8"),
                   ("red", "u1"), ("green", "u1"), ("blue", "u1")],
        )
        rec["x"], rec["y"], rec["z"] = cloud.xyz[:, 0], cloud.xyz[:, 1], cloud.xyz[:, 2]
        rec["red"], rec["green"], rec["blue"] = colors[:, 0], colors[:, 1], colors[:, 2]
        buf.write(rec.tobytes())
    return buf.getvalue()


def voxel_keys(cloud: PointCloud, cell: float, origin=None) -> np.ndarray:
    """Integer (i, j, k) voxel coordinates per point at the given cell size.

    The grid origin defaults to the cloud's AABB minimum.
    """
    if cell <= 0:
        raise ValueError(f"cell size must be positive, got {cell}")
    if len(cloud) == 0:
        return np.empty((0, 3), dtype=np.int64)
    if origin is None:
        origin = cloud.aabb()[0]
    rel = (cloud.xyz - np.asarray(origin)) / cell
    return np.maximum(np.floor(rel).astype(np.int64), 0)


def voxel_downsample(cloud: PointCloud, cell: float) -> PointCloud:
    """One point per occupied voxel: mean position and mean color of its
    members, ordered by lexicographic voxel key."""
    if cell <= 0:
        raise ValueError(f"cell size must be positive, got {cell}")
    if len(cloud) == 0:
        return cloud
    keys = voxel_keys(cloud, cell)
    # Sort points by (i, j, k), then average each run of equal keys.
    order = np.lexsort((keys[:, 2], keys[:, 1], keys[:, 0]))
    sorted_keys = keys[order]
    sorted_pts = cloud.points[order]
    boundary = np.ones(len(cloud), dtype=bool)
    boundary[1:] = np.any(sorted_keys[1:] != sorted_keys[:-1], axis=1)
    starts = np.flatnonzero(boundary)
    sums = np.add.reduceat(sorted_pts, starts, axis=0)
    counts = np.diff(np.append(starts, len(cloud)))
    means = sums / counts[:, None]
    # Mean of in-range colors can drift out by rounding; clamp.
    means[:, 3:] = means[:, 3:].clip(0.0, 1.0)
    return PointCloud(means)


def count_voxels(cloud: PointCloud, cell: float) -> int:
    """Number of occupied voxels at the given cell size."""
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    keys = voxel_keys(cloud, cell)
    return int(np.unique(keys, axis=0).shape[0])


@dataclass(frozen=True)
class HierarchySpec:
    """Grid-pool hierarchy: finest cell size, level count, 2x per level."""

    finest_cell: float = 0.025
    levels: int = 5
    branching: int = 2

    def __post_init__(self) -> None:
        if self.finest_cell <= 0:
            raise ValueError(f"finest_cell must be positive, got {self.finest_cell}")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.branching < 2:
            raise ValueError(f"branching must be >= 2, got {self.branching}")

    def cell_at(self, level: int) -> float:
        return self.finest_cell * self.branching**level


def count_tokens(cloud: PointCloud, spec: HierarchySpec | None = None) -> list[int]:
    """Occupied-voxel count per hierarchy level, finest first.

    The coarsest level's count is the scene's token count K: the number of
    feature slots a pooled encoder would hand to a language model.
    """
    spec = spec or HierarchySpec()
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    return [count_voxels(cloud, spec.cell_at(level)) for level in range(spec.levels)]


def farthest_point_sampling(cloud: PointCloud, k: int, seed: int = 0) -> list[int]:
    """Greedy max-min subset of ``k`` point indices.

    The first index is drawn uniformly from the seed; each later pick
    maximizes the distance to the already-selected set, ties broken by the
    lowest index.
    """
    n = len(cloud)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = rng_from_seed(seed)
    first = int(rng.integers(n))
    selected = [first]
    # min squared distance to the selected set, per point
    d2 = np.sum((cloud.xyz - cloud.xyz[first]) ** 2, axis=1)
    for _ in range(k - 1):
        nxt = int(np.argmax(d2))  # argmax returns the lowest index on ties
        selected.append(nxt)
        cand = np.sum((cloud.xyz - cloud.xyz[nxt]) ** 2, axis=1)
        d2 = np.minimum(d2, cand)
    return selected
