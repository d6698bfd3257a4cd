"""Benchmark protocol: Hungarian-matched F1 at fixed IoU thresholds.

Layout evaluation matches walls/doors/windows on planar IoU (prediction
projected into the ground-truth plane); detection matches oriented boxes on
volume IoU per category. Matching runs once on raw IoUs (cost 1 - IoU) and
the thresholds are applied post hoc to the same matching.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .assignment import solve_assignment
from .geometry import element_quad, iou_box3d, iou_planar
from .scene import Scene, require_valid

DEFAULT_THRESHOLDS = (0.25, 0.5)

LAYOUT_TYPES = ("wall", "door", "window")


@dataclass(frozen=True)
class EvalConfig:
    """Thresholds and matching constraints for both evaluators."""

    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    layout_type_constrained: bool = True
    detection_class_constrained: bool = True

    def __post_init__(self) -> None:
        ts = tuple(float(t) for t in self.thresholds)
        if not ts:
            raise ValueError("at least one threshold required")
        if any(not 0.0 < t <= 1.0 for t in ts):
            raise ValueError(f"thresholds must lie in (0, 1], got {ts}")
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise ValueError(f"thresholds must be strictly ascending, got {ts}")
        object.__setattr__(self, "thresholds", ts)


@dataclass(frozen=True)
class MatchReport:
    """Hungarian matching outcome for one category."""

    pairs: tuple[tuple[int, int, float], ...]  # (pred_id, gt_id, iou), iou > 0
    unmatched_preds: tuple[int, ...]
    unmatched_gts: tuple[int, ...]


@dataclass(frozen=True)
class Counts:
    tp: int
    fp: int
    fn: int


@dataclass
class EvalReport:
    """Per-category and averaged F1 at each threshold, with match lists."""

    mode: str
    thresholds: tuple[float, ...]
    counts: dict[str, dict[float, Counts]] = field(default_factory=dict)
    per_category: dict[str, dict[float, float]] = field(default_factory=dict)
    average: dict[float, float] = field(default_factory=dict)
    matches: dict[str, MatchReport] = field(default_factory=dict)
    #: Categories absent from both scenes: F1 = 1.0 by convention, flagged.
    empty_categories: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        """Stable, JSON-ready structure (categories sorted, fixed key order)."""
        cats = {}
        for cat in sorted(self.counts):
            per_t = {}
            for t in self.thresholds:
                c = self.counts[cat][t]
                per_t[_tkey(t)] = {
                    "tp": c.tp,
                    "fp": c.fp,
                    "fn": c.fn,
                    "f1": self.per_category[cat][t],
                }
            cats[cat] = {"empty": cat in self.empty_categories, **per_t}
        return {
            "mode": self.mode,
            "thresholds": list(self.thresholds),
            "categories": cats,
            "average": {_tkey(t): self.average[t] for t in self.thresholds},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _tkey(t: float) -> str:
    return format(t, "g")


def f1_from_counts(tp: int, fp: int, fn: int) -> float:
    """2TP / (2TP + FP + FN); the all-zero case counts as a perfect 1.0."""
    if tp < 0 or fp < 0 or fn < 0:
        raise ValueError("counts must be non-negative")
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 1.0
    return 2.0 * tp / denom


def match_by_iou(
    pred_ids: list[int], gt_ids: list[int], iou: np.ndarray
) -> MatchReport:
    """Hungarian matching on cost 1 - IoU; zero-IoU pairs are not matches."""
    if not pred_ids or not gt_ids:
        return MatchReport((), tuple(pred_ids), tuple(gt_ids))
    pairs = solve_assignment(1.0 - iou)
    kept = tuple(
        (pred_ids[r], gt_ids[c], float(iou[r, c])) for r, c in pairs if iou[r, c] > 0.0
    )
    used_preds = {p for p, _, _ in kept}
    used_gts = {g for _, g, _ in kept}
    return MatchReport(
        pairs=kept,
        unmatched_preds=tuple(p for p in pred_ids if p not in used_preds),
        unmatched_gts=tuple(g for g in gt_ids if g not in used_gts),
    )


def _counts_at(match: MatchReport, n_pred: int, n_gt: int, t: float) -> Counts:
    tp = sum(1 for _, _, iou in match.pairs if iou >= t)
    return Counts(tp=tp, fp=n_pred - tp, fn=n_gt - tp)


def _finish_report(
    mode: str,
    config: EvalConfig,
    groups: dict[str, tuple[MatchReport, int, int]],
) -> EvalReport:
    report = EvalReport(mode=mode, thresholds=config.thresholds)
    empty = []
    for cat, (match, n_pred, n_gt) in groups.items():
        report.matches[cat] = match
        report.counts[cat] = {}
        report.per_category[cat] = {}
        if n_pred == 0 and n_gt == 0:
            empty.append(cat)
        for t in config.thresholds:
            c = _counts_at(match, n_pred, n_gt, t)
            report.counts[cat][t] = c
            report.per_category[cat][t] = f1_from_counts(c.tp, c.fp, c.fn)
    report.empty_categories = tuple(sorted(empty))

    # Unweighted mean over categories present in either scene; when nothing
    # is present at all the empty-vs-empty convention (1.0) applies.
    present = [cat for cat in groups if cat not in report.empty_categories]
    for t in config.thresholds:
        if present:
            report.average[t] = float(
                np.mean([report.per_category[cat][t] for cat in present])
            )
        else:
            report.average[t] = 1.0
    return report


def evaluate_layout(pred: Scene, gt: Scene, config: EvalConfig | None = None) -> EvalReport:
    """Match layout elements (walls/doors/windows) via planar IoU and report
    per-type and averaged F1 at each threshold.

    With ``layout_type_constrained`` (default) each element type is matched
    independently; otherwise all elements are pooled into one assignment and
    counts are attributed to the gt element's type (pred's type for FPs).
    """
    config = config or EvalConfig()
    require_valid(pred)
    require_valid(gt)

    def elements(scene: Scene, kind: str):
        if kind == "wall":
            return list(scene.walls)
        return [o for o in scene.openings if o.kind == kind]

    groups: dict[str, tuple[MatchReport, int, int]] = {}
    if config.layout_type_constrained:
        for kind in LAYOUT_TYPES:
            p, g = elements(pred, kind), elements(gt, kind)
            iou = _layout_iou_matrix(p, pred, g, gt)
            match = match_by_iou([e.id for e in p], [e.id for e in g], iou)
            groups[kind] = (match, len(p), len(g))
    else:
        # Pooled mode: one assignment across all element types, reported as a
        # single category (cross-type attribution is ill-defined).
        p_all = [e for kind in LAYOUT_TYPES for e in elements(pred, kind)]
        g_all = [e for kind in LAYOUT_TYPES for e in elements(gt, kind)]
        iou = _layout_iou_matrix(p_all, pred, g_all, gt)
        match = match_by_iou(list(range(len(p_all))), list(range(len(g_all))), iou)
        groups = {"all": (match, len(p_all), len(g_all))}
    return _finish_report("layout", config, groups)


def _layout_iou_matrix(pred_elems, pred_scene, gt_elems, gt_scene) -> np.ndarray:
    iou = np.zeros((len(pred_elems), len(gt_elems)))
    pred_quads = [element_quad(e, pred_scene) for e in pred_elems]
    gt_quads = [element_quad(e, gt_scene) for e in gt_elems]
    for i, pq in enumerate(pred_quads):
        for j, gq in enumerate(gt_quads):
            iou[i, j] = iou_planar(pq, gq)
    return iou


def evaluate_detection(pred: Scene, gt: Scene, config: EvalConfig | None = None) -> EvalReport:
    """Match oriented boxes via volume IoU and report per-category F1.

    With ``detection_class_constrained`` (default) matching runs independently
    per category; otherwise boxes are pooled into one assignment. The average
    runs over categories present in gt or pred.
    """
    config = config or EvalConfig()
    require_valid(pred)
    require_valid(gt)

    categories = sorted({b.category for b in pred.boxes} | {b.category for b in gt.boxes})
    groups: dict[str, tuple[MatchReport, int, int]] = {}
    if config.detection_class_constrained:
        for cat in categories:
            p = [b for b in pred.boxes if b.category == cat]
            g = [b for b in gt.boxes if b.category == cat]
            iou = np.zeros((len(p), len(g)))
            for i, pb in enumerate(p):
                for j, gb in enumerate(g):
                    iou[i, j] = iou_box3d(pb, gb)
            match = match_by_iou([b.id for b in p], [b.id for b in g], iou)
            groups[cat] = (match, len(p), len(g))
    else:
        # Pooled mode: one assignment across all boxes regardless of class.
        p_all = list(pred.boxes)
        g_all = list(gt.boxes)
        iou = np.zeros((len(p_all), len(g_all)))
        for i, pb in enumerate(p_all):
            for j, gb in enumerate(g_all):
                iou[i, j] = iou_box3d(pb, gb)
        match = match_by_iou(list(range(len(p_all))), list(range(len(g_all))), iou)
        groups = {"all": (match, len(p_all), len(g_all))}
    return _finish_report("detection", config, groups)
