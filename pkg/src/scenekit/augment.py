"""Point-cloud training augmentations and the full default recipe.

Steps (in pipeline order): cuboid crop, four Gaussian jitter passes of
increasing severity, two-scale elastic distortion, a global z rotation from
{0, 90, 180, 270} degrees, a uniform rescale, and four chromatic transforms.
Geometric steps transform the paired scene labels identically; noise and
chromatic steps touch only the cloud. Every step is a pure function of
(input, seed); a probability or magnitude of zero is a bit-exact identity.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._rng import rng_from_seed
from .pointcloud import PointCloud
from .scene import Scene, apply_similarity


def cuboid_crop(
    cloud: PointCloud,
    min_points: int = 50_000,
    aspect: float = 0.8,
    min_crop: float = 0.75,
    max_crop: float = 1.0,
    p: float = 0.1,
    seed: int = 0,
) -> PointCloud:
    """Keep the points inside a random cuboid centered on a random point.

    Per-axis extents are uniform fractions of the cloud's bounding box in
    [min_crop, max_crop], resampled until their pairwise ratio stays above
    ``aspect``. The crop is skipped outright if fewer than ``min_points``
    would survive.
    """
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p:
        return cloud
    lo, hi = cloud.aabb()
    extent = hi - lo
    center = cloud.xyz[int(rng.integers(len(cloud)))]
    for _ in range(64):
        frac = rng.uniform(min_crop, max_crop, size=3)
        if frac.min() >= aspect * frac.max():
            break
    size = frac * extent
    # Slide the window so it stays inside the bounding box; a crop fraction
    # of 1.0 then keeps the whole cloud regardless of the chosen center.
    box_lo = np.clip(center - size / 2.0, lo, np.maximum(lo, hi - size))
    box_hi = box_lo + size
    inside = np.all((cloud.xyz >= box_lo) & (cloud.xyz <= box_hi), axis=1)
    if int(inside.sum()) < min_points:
        return cloud
    return PointCloud(cloud.points[inside])


def random_jitter(
    cloud: PointCloud,
    sigma: float,
    clip: float,
    ratio: float = 1.0,
    p: float = 1.0,
    seed: int = 0,
) -> PointCloud:
    """Gaussian position noise on a random subset of points.

    With probability ``p``, each point is independently selected with
    probability ``ratio`` and offset per coordinate by N(0, sigma^2)
    truncated to [-clip, clip].
    """
    if sigma < 0 or clip < 0:
        raise ValueError("sigma and clip must be >= 0")
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p or sigma == 0.0:
        return cloud
    selected = rng.random(len(cloud)) < ratio
    if not selected.any():
        return cloud
    noise = rng.normal(0.0, sigma, size=(int(selected.sum()), 3)).clip(-clip, clip)
    out = cloud.points.copy()
    out[selected, :3] += noise
    return PointCloud(out)


def elastic_distort(
    cloud: PointCloud,
    pairs=((0.2, 0.4), (0.8, 1.6)),
    p=(0.8, 0.5),
    seed: int = 0,
) -> PointCloud:
    """Smooth random warps at one or more (granularity, magnitude) scales.

    For each pair, with its own probability, a Gaussian vector field sampled
    on a grid of the given granularity (values clipped to +-3 sigma) is
    trilinearly interpolated at the points and added scaled by magnitude, so
    per-coordinate displacement is bounded by 3 x magnitude.
    """
    if len(cloud) == 0:
        return cloud
    out = None
    for index, (granularity, magnitude) in enumerate(pairs):
        rng = rng_from_seed(seed, index)
        prob = p[index] if isinstance(p, (tuple, list)) else p
        if rng.random() >= prob or magnitude == 0.0:
            continue
        if out is None:
            out = cloud.points.copy()
        xyz = out[:, :3]
        lo = xyz.min(axis=0)
        rel = (xyz - lo) / granularity
        dims = np.floor(rel.max(axis=0)).astype(int) + 2
        noise = rng.normal(0.0, 1.0, size=(*dims, 3)).clip(-3.0, 3.0)
        xyz += _trilinear(noise, rel) * magnitude
    if out is None:
        return cloud
    return PointCloud(out)


def _trilinear(grid: np.ndarray, rel: np.ndarray) -> np.ndarray:
    """Trilinear interpolation of a vector field at fractional coordinates."""
    base = np.floor(rel).astype(int)
    frac = rel - base
    acc = np.zeros((rel.shape[0], grid.shape[-1]))
    for dx in (0, 1):
        for dy in (0, 1):
            for dz in (0, 1):
                w = (
                    (frac[:, 0] if dx else 1.0 - frac[:, 0])
                    * (frac[:, 1] if dy else 1.0 - frac[:, 1])
                    * (frac[:, 2] if dz else 1.0 - frac[:, 2])
                )
                acc += w[:, None] * grid[base[:, 0] + dx, base[:, 1] + dy, base[:, 2] + dz]
    return acc


def chromatic_auto_contrast(cloud: PointCloud, p: float = 0.2, seed: int = 0) -> PointCloud:
    """Stretch each color channel linearly to the full [0, 1] range."""
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p:
        return cloud
    out = cloud.points.copy()
    for ch in range(3, 6):
        lo, hi = out[:, ch].min(), out[:, ch].max()
        if hi > lo:
            out[:, ch] = (out[:, ch] - lo) / (hi - lo)
    return PointCloud(out)


def chromatic_translation(
    cloud: PointCloud, ratio: float = 0.1, p: float = 0.75, seed: int = 0
) -> PointCloud:
    """Shift all colors by one uniform offset in [-ratio, ratio] per channel."""
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p:
        return cloud
    offset = rng.uniform(-ratio, ratio, size=3)
    out = cloud.points.copy()
    out[:, 3:] = (out[:, 3:] + offset).clip(0.0, 1.0)
    return PointCloud(out)


def chromatic_jitter(cloud: PointCloud, std: float = 0.05, p: float = 0.8, seed: int = 0) -> PointCloud:
    """Per-point Gaussian color noise, clamped to [0, 1]."""
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p or std == 0.0:
        return cloud
    out = cloud.points.copy()
    out[:, 3:] = (out[:, 3:] + rng.normal(0.0, std, size=(len(cloud), 3))).clip(0.0, 1.0)
    return PointCloud(out)


def color_drop(cloud: PointCloud, p: float = 0.1, seed: int = 0) -> PointCloud:
    """Zero out all colors (simulates geometry-only input)."""
    rng = rng_from_seed(seed)
    if len(cloud) == 0 or rng.random() >= p:
        return cloud
    out = cloud.points.copy()
    out[:, 3:] = 0.0
    return PointCloud(out)


def chromatic_augment(cloud: PointCloud, kind: str, params: dict | None = None, seed: int = 0) -> PointCloud:
    """Dispatch one chromatic step by name: auto_contrast, translation,
    jitter, or drop."""
    params = dict(params or {})
    if kind == "auto_contrast":
        return chromatic_auto_contrast(cloud, seed=seed, **params)
    if kind == "translation":
        return chromatic_translation(cloud, seed=seed, **params)
    if kind == "jitter":
        return chromatic_jitter(cloud, seed=seed, **params)
    if kind == "drop":
        return color_drop(cloud, seed=seed, **params)
    raise ValueError(f"unknown chromatic augmentation {kind!r}")


@dataclass(frozen=True)
class AugmentStep:
    name: str
    params: dict = field(default_factory=dict)


#: The default recipe; step order is the application order.
DEFAULT_STEPS: tuple[AugmentStep, ...] = (
    AugmentStep("cuboid_crop", {"min_points": 50_000, "aspect": 0.8, "min_crop": 0.75, "max_crop": 1.0, "p": 0.1}),
    AugmentStep("random_jitter", {"sigma": 0.025, "clip": 0.05, "ratio": 0.8, "p": 0.9}),
    AugmentStep("random_jitter", {"sigma": 0.2, "clip": 0.2, "ratio": 0.05, "p": 0.8}),
    AugmentStep("random_jitter", {"sigma": 0.4, "clip": 1.0, "ratio": 0.001, "p": 0.75}),
    AugmentStep("random_jitter", {"sigma": 0.5, "clip": 4.0, "ratio": 0.0005, "p": 0.65}),
    AugmentStep("elastic_distort", {"params": [[0.2, 0.4], [0.8, 1.6]], "p": [0.8, 0.5]}),
    AugmentStep("random_rotate", {"axis": "z", "angle": [0, 90, 180, 270]}),
    AugmentStep("random_scale", {"scale": [0.75, 1.25]}),
    AugmentStep("auto_contrast", {"p": 0.2}),
    AugmentStep("chromatic_translation", {"p": 0.75, "ratio": 0.1}),
    AugmentStep("chromatic_jitter", {"std": 0.05, "p": 0.8}),
    AugmentStep("color_drop", {"p": 0.1}),
)


@dataclass(frozen=True)
class AugmentationConfig:
    """Ordered augmentation steps plus the master seed.

    Each step draws from its own substream spawned off the master seed, so
    reordering or removing one step never changes another's randomness.
    """

    steps: tuple[AugmentStep, ...] = DEFAULT_STEPS
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            prob = step.params.get("p", 0.0)
            for v in prob if isinstance(prob, (list, tuple)) else [prob]:
                if not 0.0 <= float(v) <= 1.0:
                    raise ValueError(f"{step.name}: probability {v} outside [0, 1]")

    def with_seed(self, seed: int) -> "AugmentationConfig":
        return replace(self, seed=seed)


def identity_config(seed: int = 0) -> AugmentationConfig:
    """All probabilities zero, rotation fixed to 0, scale fixed to 1."""
    steps = []
    for step in DEFAULT_STEPS:
        if step.name == "random_rotate":
            steps.append(AugmentStep(step.name, {**step.params, "angle": [0]}))
        elif step.name == "random_scale":
            steps.append(AugmentStep(step.name, {**step.params, "scale": [1.0, 1.0]}))
        elif isinstance(step.params.get("p"), (list, tuple)):
            steps.append(AugmentStep(step.name, {**step.params, "p": [0.0] * len(step.params["p"])}))
        else:
            steps.append(AugmentStep(step.name, {**step.params, "p": 0.0}))
    return AugmentationConfig(tuple(steps), seed=seed)


def augment_pipeline(
    cloud: PointCloud, scene: Scene, config: AugmentationConfig | None = None
) -> tuple[PointCloud, Scene]:
    """Run the configured steps in order on a (cloud, scene) pair.

    Rotation and scaling are applied jointly to the cloud and the scene;
    every other step leaves the scene untouched. Deterministic given the
    master seed.
    """
    config = config or AugmentationConfig()
    out_cloud, out_scene = cloud, scene
    for index, step in enumerate(config.steps):
        sub = _spawned_seed_params(config.seed, index)
        name, params = step.name, step.params
        if name == "cuboid_crop":
            out_cloud = cuboid_crop(out_cloud, **params, **sub)
        elif name == "random_jitter":
            out_cloud = random_jitter(out_cloud, **params, **sub)
        elif name == "elastic_distort":
            out_cloud = elastic_distort(
                out_cloud, pairs=params.get("params", ()), p=params.get("p", 1.0), **sub
            )
        elif name == "random_rotate":
            out_cloud, out_scene = _random_rotate(out_cloud, out_scene, params, **sub)
        elif name == "random_scale":
            out_cloud, out_scene = _random_scale(out_cloud, out_scene, params, **sub)
        elif name == "auto_contrast":
            out_cloud = chromatic_auto_contrast(out_cloud, **params, **sub)
        elif name == "chromatic_translation":
            out_cloud = chromatic_translation(out_cloud, **params, **sub)
        elif name == "chromatic_jitter":
            out_cloud = chromatic_jitter(out_cloud, **params, **sub)
        elif name == "color_drop":
            out_cloud = color_drop(out_cloud, **params, **sub)
        else:
            raise ValueError(f"unknown augmentation step {step.name!r}")
    return out_cloud, out_scene


def _spawned_seed_params(master_seed: int, index: int) -> dict:
    # One child stream per pipeline position; steps receive a plain seed.
    child = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return {"seed": int(child.generate_state(1, dtype=np.uint64)[0])}


def _random_rotate(cloud: PointCloud, scene: Scene, params: dict, seed: int = 0):
    if params.get("axis", "z") != "z":
        raise ValueError("only z-axis rotation is supported")
    angles = params.get("angle", [0, 90, 180, 270])
    rng = rng_from_seed(seed)
    angle_deg = float(angles[int(rng.integers(len(angles)))])
    if angle_deg == 0.0:
        return cloud, scene
    theta = math.radians(angle_deg)
    return (
        cloud.transformed(rotation_z=theta),
        apply_similarity(scene, rotation_z=theta),
    )


def _random_scale(cloud: PointCloud, scene: Scene, params: dict, seed: int = 0):
    lo, hi = params.get("scale", [0.75, 1.25])
    rng = rng_from_seed(seed)
    factor = float(rng.uniform(lo, hi))
    if factor == 1.0:
        return cloud, scene
    return (
        cloud.transformed(scale=factor),
        apply_similarity(scene, scale=factor),
    )


# Config file format: one step per line, `name key=value key=value ...`;
# `#` starts a comment. Values are Python/JSON literals. Names and keys
# mirror the default recipe table.
def parse_augment_config(text: str, seed: int = 0) -> AugmentationConfig:
    steps: list[AugmentStep] = []
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        name = parts[0]
        params: dict = {}
        for chunk in parts[1:]:
            if "=" not in chunk:
                raise ValueError(f"line {line_no}: expected key=value, got {chunk!r}")
            key, value = chunk.split("=", 1)
            try:
                params[key] = ast.literal_eval(value)
            except (ValueError, SyntaxError):
                raise ValueError(f"line {line_no}: bad value for {key!r}: {value!r}") from None
        steps.append(AugmentStep(name, params))
    return AugmentationConfig(tuple(steps), seed=seed)


def format_augment_config(config: AugmentationConfig) -> str:
    lines = []
    for step in config.steps:
        chunks = [step.name]
        for key, value in step.params.items():
            chunks.append(f"{key}={_fmt_value(value)}")
        lines.append(" ".join(chunks))
    return "\n".join(lines) + "\n"


def _fmt_value(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt_value(v) for v in value) + "]"
    return repr(value)
