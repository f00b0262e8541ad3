"""Detection quality measurement: greedy matching, AP and mean AP.

Convention: single IoU threshold (default 0.5), AP is the area under the
raw precision-recall staircase, i.e. sum over predictions in descending
score order of (recall_i - recall_{i-1}) * precision_i. Classes with no
ground-truth instances are excluded from the mean. Score ties keep input
order (stable sort) so results are reproducible across implementations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boxes import BoundingBox, iou
from .decode import Detection
from .errors import ContractError
from .labels import by_id, by_slug
from .validation import check_ratio

DEFAULT_EVAL_IOU = 0.5


@dataclass
class EvalSample:
    """Ground truth and predictions for one image."""

    ground_truth: list[tuple[int, BoundingBox]]
    predictions: list[Detection]


@dataclass
class EvalReport:
    per_class_ap: dict[str, float]  # keyed by class slug
    mean_ap: float
    counts: dict[str, int]  # ground-truth instances per class slug

    def to_dict(self) -> dict:
        return {
            "mean_ap": self.mean_ap,
            "per_class_ap": {slug: ap for slug, ap in sorted(self.per_class_ap.items())},
            "counts": {slug: n for slug, n in sorted(self.counts.items())},
        }


def match_detections(sample: EvalSample, iou_threshold: float = DEFAULT_EVAL_IOU) -> list[tuple[int, bool]]:
    """Greedy true-positive assignment for one image.

    Predictions are processed in descending score (ties by input order).
    A prediction is a true positive iff some still-unmatched same-class
    ground-truth box overlaps it with IoU >= threshold; the best-IoU
    ground-truth box is consumed. Returns (prediction index, matched)
    pairs in processing order.
    """
    check_ratio(iou_threshold, "iou_threshold")
    order = sorted(range(len(sample.predictions)), key=lambda i: (-sample.predictions[i].score, i))
    taken = [False] * len(sample.ground_truth)

    results: list[tuple[int, bool]] = []
    for pred_idx in order:
        pred = sample.predictions[pred_idx]
        best_iou, best_gt = 0.0, -1
        for gt_idx, (class_id, gt_box) in enumerate(sample.ground_truth):
            if taken[gt_idx] or class_id != pred.label.id:
                continue
            overlap = iou(pred.box, gt_box)
            if overlap > best_iou:
                best_iou, best_gt = overlap, gt_idx
        matched = best_gt >= 0 and best_iou >= iou_threshold
        if matched:
            taken[best_gt] = True
        results.append((pred_idx, matched))
    return results


def average_precision(scored_flags: list[tuple[float, bool]], gt_count: int) -> float:
    """AP for one class from (score, is_true_positive) pairs.

    ``gt_count`` must be >= 1; pairs may come from many images and are
    re-sorted here by descending score, stable in input order.
    """
    if gt_count < 1:
        raise ContractError("average_precision needs at least one ground-truth instance")
    ordered = sorted(range(len(scored_flags)), key=lambda i: (-scored_flags[i][0], i))

    ap = 0.0
    tp = fp = 0
    prev_recall = 0.0
    for i in ordered:
        if scored_flags[i][1]:
            tp += 1
        else:
            fp += 1
        recall = tp / gt_count
        precision = tp / (tp + fp)
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    return ap


def pr_points(scored_flags: list[tuple[float, bool]], gt_count: int) -> list[tuple[float, float, float]]:
    """Raw PR staircase as (recall, precision, score) per prediction."""
    if gt_count < 1:
        raise ContractError("pr_points needs at least one ground-truth instance")
    ordered = sorted(range(len(scored_flags)), key=lambda i: (-scored_flags[i][0], i))
    points = []
    tp = fp = 0
    for i in ordered:
        if scored_flags[i][1]:
            tp += 1
        else:
            fp += 1
        points.append((tp / gt_count, tp / (tp + fp), scored_flags[i][0]))
    return points


def _per_class_flags(
    samples: list[EvalSample], iou_threshold: float
) -> tuple[dict[int, list[tuple[float, bool]]], dict[int, int]]:
    flags: dict[int, list[tuple[float, bool]]] = {}
    counts: dict[int, int] = {}
    for sample in samples:
        for class_id, _ in sample.ground_truth:
            counts[class_id] = counts.get(class_id, 0) + 1
        for pred_idx, matched in match_detections(sample, iou_threshold):
            pred = sample.predictions[pred_idx]
            flags.setdefault(pred.label.id, []).append((pred.score, matched))
    return flags, counts


def mean_average_precision(
    samples: list[EvalSample], iou_threshold: float = DEFAULT_EVAL_IOU
) -> EvalReport:
    """Per-class AP and their mean over classes with ground truth."""
    flags, counts = _per_class_flags(samples, iou_threshold)
    if not counts:
        raise ContractError("mean_average_precision needs at least one ground-truth box")

    per_class_ap = {
        by_id(class_id).slug: average_precision(flags.get(class_id, []), gt_count)
        for class_id, gt_count in counts.items()
    }
    mean_ap = sum(per_class_ap.values()) / len(per_class_ap)
    slug_counts = {by_id(class_id).slug: n for class_id, n in counts.items()}
    return EvalReport(per_class_ap=per_class_ap, mean_ap=mean_ap, counts=slug_counts)


def class_pr_points(
    samples: list[EvalSample], iou_threshold: float = DEFAULT_EVAL_IOU
) -> dict[str, list[tuple[float, float, float]]]:
    """Raw PR staircase per class with ground truth, for external plotting."""
    flags, counts = _per_class_flags(samples, iou_threshold)
    return {
        by_id(class_id).slug: pr_points(flags.get(class_id, []), gt_count)
        for class_id, gt_count in counts.items()
    }


def format_report(report: EvalReport, method_name: str) -> str:
    """Render a method/mean-AP comparison row plus per-class breakdown.

    Values print with 3 decimals (round half to even).
    """
    width = max(len(method_name), len("Methods")) + 2
    lines = [
        f"{'Methods':<{width}}Mean AP",
        f"{'-' * (width - 2):<{width}}{'-' * 7}",
        f"{method_name:<{width}}{report.mean_ap:.3f}",
        "",
        "Per-class AP:",
    ]
    for slug in sorted(report.per_class_ap, key=lambda s: by_slug(s).id):
        label = by_slug(slug)
        lines.append(
            f"  {label.id:>2}  {label.slug:<8} gt={report.counts.get(slug, 0):<6}"
            f" AP={report.per_class_ap[slug]:.3f}"
        )
    return "\n".join(lines)
