"""scenekit: structured indoor-scene scripts and their evaluation metrics.

Parse/serialize/validate textual scene descriptions (walls, doors, windows,
oriented boxes), quantize coordinates to integer bins, compute Hungarian-
matched F1 for layouts (planar IoU) and 3D detection (rotated-box IoU), and
run the point-cloud preprocessing and augmentation stack, with a seeded
synthetic generator for desk-scale testing.
"""

from .assignment import solve_assignment
from .augment import (
    AugmentationConfig,
    AugmentStep,
    augment_pipeline,
    chromatic_augment,
    cuboid_crop,
    elastic_distort,
    identity_config,
    parse_augment_config,
    random_jitter,
)
from .datagen import GenConfig, gen_scene, perturb_scene, sample_cloud, write_corpus
from .evaluation import (
    EvalConfig,
    EvalReport,
    MatchReport,
    evaluate_detection,
    evaluate_layout,
    f1_from_counts,
)
from .geometry import (
    BoxGeometry,
    PlaneQuad,
    Polygon2D,
    box_geometry,
    convex_clip_area,
    element_quad,
    iou_box3d,
    iou_planar,
    project_quad,
)
from .pointcloud import (
    HierarchySpec,
    PlyError,
    PointCloud,
    count_tokens,
    farthest_point_sampling,
    load_ply,
    save_ply,
    voxel_downsample,
)
from .quantize import (
    QuantizationSpec,
    dequantize_coord,
    dequantize_scene,
    normalize_scene,
    quantize_coord,
    quantize_scene,
    snap_scene_to_grid,
)
from .scene import (
    Opening,
    OrientedBox3D,
    Scene,
    SceneValidationError,
    Violation,
    Wall,
    apply_similarity,
    validate_scene,
)
from .script import ScriptError, ScriptWarning, parse_script, serialize_scene

__version__ = "0.1.0"

__all__ = [
    "AugmentationConfig",
    "AugmentStep",
    "BoxGeometry",
    "EvalConfig",
    "EvalReport",
    "GenConfig",
    "HierarchySpec",
    "MatchReport",
    "Opening",
    "OrientedBox3D",
    "PlaneQuad",
    "PlyError",
    "PointCloud",
    "Polygon2D",
    "QuantizationSpec",
    "Scene",
    "SceneValidationError",
    "ScriptError",
    "ScriptWarning",
    "Violation",
    "Wall",
    "apply_similarity",
    "augment_pipeline",
    "box_geometry",
    "chromatic_augment",
    "convex_clip_area",
    "count_tokens",
    "cuboid_crop",
    "dequantize_coord",
    "dequantize_scene",
    "elastic_distort",
    "element_quad",
    "evaluate_detection",
    "evaluate_layout",
    "f1_from_counts",
    "farthest_point_sampling",
    "gen_scene",
    "identity_config",
    "iou_box3d",
    "iou_planar",
    "load_ply",
    "normalize_scene",
    "parse_augment_config",
    "parse_script",
    "perturb_scene",
    "project_quad",
    "quantize_coord",
    "quantize_scene",
    "random_jitter",
    "sample_cloud",
    "save_ply",
    "serialize_scene",
    "snap_scene_to_grid",
    "solve_assignment",
    "validate_scene",
    "voxel_downsample",
    "write_corpus",
]
