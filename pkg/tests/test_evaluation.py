from __future__ import annotations

import itertools
import json
import math

import numpy as np
import pytest

from scenekit import (
    EvalConfig,
    Opening,
    OrientedBox3D,
    Scene,
    SceneValidationError,
    Wall,
    apply_similarity,
    evaluate_detection,
    evaluate_layout,
    f1_from_counts,
    gen_scene,
    perturb_scene,
)
from scenekit.datagen import GenConfig
from scenekit.evaluation import match_by_iou


class TestF1:
    def test_balanced(self):
        assert f1_from_counts(1, 1, 1) == 0.5

    def test_empty_vs_empty_convention(self):
        assert f1_from_counts(0, 0, 0) == 1.0

    def test_no_hits(self):
        assert f1_from_counts(0, 3, 2) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            f1_from_counts(-1, 0, 0)


class TestEvalConfig:
    def test_default_thresholds(self):
        assert EvalConfig().thresholds == (0.25, 0.5)

    def test_rejects_descending(self):
        with pytest.raises(ValueError):
            EvalConfig(thresholds=(0.5, 0.25))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            EvalConfig(thresholds=(0.0, 0.5))
        with pytest.raises(ValueError):
            EvalConfig(thresholds=(0.5, 1.5))


class TestEvaluateLayout:
    def test_self_evaluation(self, full_scene):
        report = evaluate_layout(full_scene, full_scene)
        for t in (0.25, 0.5):
            assert report.average[t] == 1.0
            for cat in ("wall", "door", "window"):
                assert report.per_category[cat][t] == 1.0

    def test_empty_pred(self, full_scene):
        report = evaluate_layout(Scene(), full_scene)
        assert report.average[0.25] == 0.0
        assert report.average[0.5] == 0.0
        wall_counts = report.counts["wall"][0.25]
        assert (wall_counts.tp, wall_counts.fp, wall_counts.fn) == (0, 0, 2)

    def test_both_empty(self):
        report = evaluate_layout(Scene(), Scene())
        assert report.average[0.25] == 1.0
        assert report.empty_categories == ("door", "wall", "window")

    def test_iou_exactly_04_splits_thresholds(self):
        # Overlap o solves o/(2 - o) = 0.4  =>  o = 4/7 of the length.
        # With length 7 the shifted wall overlaps exactly 4 m.
        gt = Scene(walls=(Wall(0, (0, 0, 0), (7, 0, 0), 2.5, 0.1),))
        pred = Scene(walls=(Wall(0, (3, 0, 0), (10, 0, 0), 2.5, 0.1),))
        report = evaluate_layout(pred, gt)
        assert report.matches["wall"].pairs[0][2] == pytest.approx(0.4)
        assert report.per_category["wall"][0.25] == 1.0
        assert report.per_category["wall"][0.5] == 0.0

    def test_absent_type_flagged_not_averaged(self, one_wall_scene):
        report = evaluate_layout(one_wall_scene, one_wall_scene)
        assert report.average[0.25] == 1.0
        assert set(report.empty_categories) == {"door", "window"}
        assert report.per_category["door"][0.25] == 1.0

    def test_invalid_scene_rejected(self):
        bad = Scene(walls=(Wall(0, (0, 0, 0), (4, 0, 0), -1.0, 0.1),))
        with pytest.raises(SceneValidationError):
            evaluate_layout(bad, bad)

    def test_pooled_mode(self, full_scene):
        report = evaluate_layout(
            full_scene, full_scene, EvalConfig(layout_type_constrained=False)
        )
        assert list(report.per_category) == ["all"]
        assert report.average[0.5] == 1.0

    def test_type_constraint_blocks_cross_matches(self):
        # A door where the gt has a window: geometry identical, types differ.
        wall = Wall(0, (0, 0, 0), (4, 0, 0), 2.6, 0.1)
        pred = Scene(walls=(wall,), openings=(Opening(0, "door", 0, (2, 0, 1.0), 1.0, 2.0),))
        gt = Scene(walls=(wall,), openings=(Opening(0, "window", 0, (2, 0, 1.0), 1.0, 2.0),))
        report = evaluate_layout(pred, gt)
        assert report.per_category["door"][0.25] == 0.0
        assert report.per_category["window"][0.25] == 0.0
        pooled = evaluate_layout(pred, gt, EvalConfig(layout_type_constrained=False))
        assert pooled.per_category["all"][0.25] == 1.0


class TestEvaluateDetection:
    def test_self_evaluation(self, full_scene):
        report = evaluate_detection(full_scene, full_scene)
        assert report.average[0.25] == 1.0
        assert report.average[0.5] == 1.0

    def test_class_constraint(self):
        pred = Scene(boxes=(OrientedBox3D(0, "sofa", (0, 0, 0.5), 0.0, (1, 1, 1)),))
        gt = Scene(boxes=(OrientedBox3D(0, "table", (0, 0, 0.5), 0.0, (1, 1, 1)),))
        report = evaluate_detection(pred, gt)
        for cat in ("sofa", "table"):
            assert report.per_category[cat][0.25] == 0.0
        counts = report.counts["sofa"][0.25]
        assert (counts.tp, counts.fp, counts.fn) == (0, 1, 0)
        counts = report.counts["table"][0.25]
        assert (counts.tp, counts.fp, counts.fn) == (0, 0, 1)

    def test_unconstrained_allows_cross_class(self):
        pred = Scene(boxes=(OrientedBox3D(0, "sofa", (0, 0, 0.5), 0.0, (1, 1, 1)),))
        gt = Scene(boxes=(OrientedBox3D(0, "table", (0, 0, 0.5), 0.0, (1, 1, 1)),))
        report = evaluate_detection(
            pred, gt, EvalConfig(detection_class_constrained=False)
        )
        assert report.per_category["all"][0.5] == 1.0

    def test_copy_plus_disjoint_box(self):
        gt = Scene(
            boxes=(
                OrientedBox3D(0, "sofa", (0, 0, 0.5), 0.0, (1, 1, 1)),
                OrientedBox3D(1, "sofa", (3, 0, 0.5), 0.0, (1, 1, 1)),
            )
        )
        pred = Scene(
            boxes=(
                OrientedBox3D(0, "sofa", (0, 0, 0.5), 0.0, (1, 1, 1)),
                OrientedBox3D(1, "sofa", (9, 9, 0.5), 0.0, (1, 1, 1)),
            )
        )
        report = evaluate_detection(pred, gt)
        counts = report.counts["sofa"][0.25]
        assert (counts.tp, counts.fp, counts.fn) == (1, 1, 1)
        assert report.per_category["sofa"][0.25] == 0.5

    def test_symmetric_counting(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            boxes_a = _random_boxes(rng, 4, "chair")
            boxes_b = _random_boxes(rng, 4, "chair")
            fwd = evaluate_detection(Scene(boxes=boxes_a), Scene(boxes=boxes_b))
            rev = evaluate_detection(Scene(boxes=boxes_b), Scene(boxes=boxes_a))
            for t in (0.25, 0.5):
                ca, cb = fwd.counts["chair"][t], rev.counts["chair"][t]
                assert ca.tp == cb.tp
                assert ca.fp == cb.fn
                assert ca.fn == cb.fp

    def test_threshold_monotonicity(self):
        config = GenConfig(openings_per_wall=(0, 2), boxes_per_room=(2, 5))
        for seed in range(30):
            gt = gen_scene(config, seed=seed)
            pred = perturb_scene(gt, sigma_pos=0.15, sigma_angle=0.15, seed=seed + 1)
            report = evaluate_detection(pred, gt)
            for cat, by_t in report.per_category.items():
                assert by_t[0.5] <= by_t[0.25] + 1e-12

    def test_matching_is_optimal_brute_force(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            n_pred = int(rng.integers(1, 6))
            n_gt = int(rng.integers(1, 6))
            pred = _random_boxes(rng, n_pred, "box")
            gt = _random_boxes(rng, n_gt, "box")
            from scenekit import iou_box3d

            iou = np.array([[iou_box3d(p, g) for g in gt] for p in pred])
            match = match_by_iou([b.id for b in pred], [b.id for b in gt], iou)
            total = sum(pair[2] for pair in match.pairs)
            best = _best_matching_total(iou)
            assert total == pytest.approx(best, abs=1e-9)

    def test_joint_transform_invariance(self):
        config = GenConfig(openings_per_wall=(0, 2), boxes_per_room=(2, 5))
        for seed in range(10):
            gt = gen_scene(config, seed=seed)
            pred = perturb_scene(gt, sigma_pos=0.1, seed=seed + 100)
            base = evaluate_detection(pred, gt)
            moved = evaluate_detection(
                apply_similarity(pred, rotation_z=math.pi / 2, translation=(3, -1, 0.5)),
                apply_similarity(gt, rotation_z=math.pi / 2, translation=(3, -1, 0.5)),
            )
            for cat in base.counts:
                for t in (0.25, 0.5):
                    assert base.counts[cat][t] == moved.counts[cat][t]


class TestReportJson:
    def test_schema_and_key_order(self, full_scene):
        report = evaluate_layout(full_scene, full_scene)
        doc = json.loads(report.to_json())
        assert list(doc) == ["mode", "thresholds", "categories", "average"]
        assert list(doc["categories"]) == ["door", "wall", "window"]
        assert list(doc["categories"]["wall"]) == ["empty", "0.25", "0.5"]
        assert doc["average"] == {"0.25": 1.0, "0.5": 1.0}

    def test_byte_stable(self, full_scene):
        a = evaluate_detection(full_scene, full_scene).to_json()
        b = evaluate_detection(full_scene, full_scene).to_json()
        assert a == b

    def test_golden_file(self, full_scene):
        from pathlib import Path

        pred = perturb_scene(full_scene, sigma_pos=0.6, drop_rate=0.25, seed=11)
        got = evaluate_layout(pred, full_scene).to_json()
        golden = Path(__file__).parent / "data" / "layout_report.json"
        assert got == golden.read_text(encoding="utf-8")


def _random_boxes(rng, count: int, category: str):
    boxes = []
    for i in range(count):
        boxes.append(
            OrientedBox3D(
                i,
                category,
                tuple(rng.uniform(-2, 2, 3)),
                float(rng.uniform(-math.pi, math.pi)),
                tuple(rng.uniform(0.5, 2.0, 3)),
            )
        )
    return tuple(boxes)


def _best_matching_total(iou: np.ndarray) -> float:
    """Brute-force maximum total IoU over all one-to-one matchings."""
    n_pred, n_gt = iou.shape
    k = min(n_pred, n_gt)
    best = 0.0
    for rows in itertools.permutations(range(n_pred), k):
        for cols in itertools.combinations(range(n_gt), k):
            best = max(best, sum(iou[r, c] for r, c in zip(rows, cols)))
    return best
