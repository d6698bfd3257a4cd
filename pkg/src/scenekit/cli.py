"""Command-line interface.

Machine-readable JSON goes to stdout, human diagnostics to stderr. Exit
codes: 0 success, 1 validation/processing failure, 2 usage error (argparse's
native convention). ``SCENEKIT_SEED`` provides the seed when ``--seed`` is
not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path

from .augment import AugmentationConfig, augment_pipeline, parse_augment_config
from .datagen import GenConfig, gen_scene, sample_cloud, write_corpus
from .evaluation import EvalConfig, evaluate_detection, evaluate_layout
from .pointcloud import HierarchySpec, PointCloud, count_tokens, load_ply, save_ply
from .quantize import DEFAULT_BIN_SIZE, DEFAULT_NUM_BINS, QuantizationSpec
from .scene import Scene, validate_scene
from .script import ScriptError, ScriptWarning, parse_script, serialize_scene


def _default_seed() -> int:
    return int(os.environ.get("SCENEKIT_SEED", "0"))


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed", type=int, default=None,
        help="random seed (default: $SCENEKIT_SEED or 0)",
    )


def _load_scene(path: str, lenient: bool = False) -> Scene:
    text = Path(path).read_text(encoding="utf-8")
    return parse_script(text, strict=not lenient)


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return 1


def cmd_validate(args) -> int:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ScriptWarning)
            scene = _load_scene(args.script, lenient=args.lenient)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except (ScriptError, OSError) as exc:
        return _fail(str(exc))
    violations = validate_scene(scene)
    for v in violations:
        print(str(v), file=sys.stderr)
    if violations:
        return 1
    if args.emit_canonical:
        sys.stdout.write(serialize_scene(scene))
    else:
        print(f"ok: {len(scene.walls)} walls, {len(scene.openings)} openings, "
              f"{len(scene.boxes)} boxes", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    try:
        pred = _load_scene(args.pred, lenient=args.lenient)
        gt = _load_scene(args.gt, lenient=args.lenient)
        thresholds = tuple(float(t) for t in args.thresholds.split(","))
        config = EvalConfig(thresholds=thresholds)
        if args.mode == "layout":
            report = evaluate_layout(pred, gt, config)
        else:
            report = evaluate_detection(pred, gt, config)
    except (ScriptError, ValueError, OSError) as exc:
        return _fail(str(exc))
    sys.stdout.write(report.to_json())
    return 0


def cmd_quantize(args) -> int:
    try:
        scene = _load_scene(args.script, lenient=args.lenient)
        spec = QuantizationSpec(
            origin=(args.origin, args.origin, args.origin),
            bin_size=args.bin_size,
            num_bins=args.num_bins,
        )
        sys.stdout.write(serialize_scene(scene, spec))
    except (ScriptError, ValueError, OSError) as exc:
        return _fail(str(exc))
    return 0


def cmd_augment(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        cloud = load_ply(Path(args.ply).read_bytes())
        scene = _load_scene(args.script, lenient=args.lenient)
        if args.config:
            config = parse_augment_config(
                Path(args.config).read_text(encoding="utf-8"), seed=seed
            )
        else:
            config = AugmentationConfig(seed=seed)
        out_cloud, out_scene = augment_pipeline(cloud, scene, config)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "points.ply").write_bytes(save_ply(out_cloud))
        (out_dir / "scene.txt").write_text(serialize_scene(out_scene), encoding="utf-8")
    except (ScriptError, ValueError, OSError) as exc:
        return _fail(str(exc))
    print(f"wrote {out_dir / 'points.ply'} and {out_dir / 'scene.txt'}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        if args.config:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            raw = {k: tuple(v) if isinstance(v, list) else v for k, v in raw.items()}
            config = GenConfig(**raw)
        else:
            config = GenConfig()
        written = write_corpus(args.out, args.count, config, seed=seed)
    except (ValueError, TypeError, OSError) as exc:
        return _fail(str(exc))
    print(f"wrote {len(written)} scenes under {args.out}", file=sys.stderr)
    return 0


def cmd_tokens(args) -> int:
    try:
        cloud = load_ply(Path(args.ply).read_bytes())
        spec = HierarchySpec(finest_cell=args.finest, levels=args.levels)
        counts = count_tokens(cloud, spec)
    except (ValueError, OSError) as exc:
        return _fail(str(exc))
    payload = {
        "finest_cell": spec.finest_cell,
        "levels": [
            {"level": i, "cell": spec.cell_at(i), "count": c}
            for i, c in enumerate(counts)
        ],
        "K": counts[-1],
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenekit",
        description="Structured indoor-scene scripts: validation, metrics, "
                    "quantization, augmentation, and synthetic data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a scene script")
    p.add_argument("script")
    p.add_argument("--lenient", action="store_true", help="skip unknown commands")
    p.add_argument("--emit-canonical", action="store_true",
                   help="print the canonical serialization to stdout on success")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate predictions against ground truth")
    p.add_argument("pred")
    p.add_argument("gt")
    p.add_argument("--mode", choices=["layout", "detect"], default="layout")
    p.add_argument("--thresholds", default="0.25,0.5",
                   help="comma-separated IoU thresholds (default 0.25,0.5)")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("quantize", help="emit a script with integer-bin coordinates")
    p.add_argument("script")
    p.add_argument("--bin-size", type=float, default=DEFAULT_BIN_SIZE)
    p.add_argument("--num-bins", type=int, default=DEFAULT_NUM_BINS)
    p.add_argument("--origin", type=float, default=0.0,
                   help="per-axis origin subtracted before binning")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("augment", help="augment a point cloud + scene pair")
    p.add_argument("ply")
    p.add_argument("script")
    p.add_argument("--config", help="augmentation config file (default: built-in recipe)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--lenient", action="store_true")
    _add_seed(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("gen", help="generate a synthetic corpus")
    p.add_argument("--config", help="generator config JSON")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_seed(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tokens", help="per-level occupied-voxel counts of a cloud")
    p.add_argument("ply")
    p.add_argument("--finest", type=float, default=0.025, help="finest cell size (m)")
    p.add_argument("--levels", type=int, default=5)
    p.set_defaults(func=cmd_tokens)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
