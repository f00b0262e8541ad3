"""Operator command line: detect, evaluate, augment, stats, split, kb, serve.

Exit-code contract: 0 success, 1 domain/runtime failure, 2 usage error.
Structured output modes print exactly one JSON document to stdout.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import dataset as ds
from . import kb as kb_mod
from .augment import (
    AnnotatedImage,
    AugmentationConfig,
    affine_augment,
    mixup,
    mosaic,
    pca_color_augment,
    rng_from_seed,
)
from .backend import BackendSpec, load_backend
from .errors import TomatodetError
from .images import draw_overlay, read_image, write_image
from .metrics import (
    DEFAULT_EVAL_IOU,
    EvalSample,
    class_pr_points,
    format_report,
    mean_average_precision,
)
from .pipeline import detect_image

STRUCTURED_FORMATS = ("structured", "json")
_FORMAT_CHOICE = click.Choice(("text",) + STRUCTURED_FORMATS)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _emit_json(document: dict) -> None:
    click.echo(json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True))


@click.group()
def main() -> None:
    """Tomato crop-disease detection and advisory toolkit."""


@main.command("detect")
@click.option("--image", "image_path", required=True, type=click.Path(path_type=Path))
@click.option("--backend", "backend_kind", type=click.Choice(["stub", "external"]), default="stub")
@click.option("--fixture", type=click.Path(path_type=Path), help="Fixture file for the stub backend.")
@click.option("--model", "model_path", type=click.Path(path_type=Path), help="Model file for the external backend.")
@click.option("--conf", type=float, default=None, help="Score threshold (default 0.25).")
@click.option("--iou", type=float, default=None, help="Suppression overlap threshold (default 0.45).")
@click.option("--format", "fmt", type=_FORMAT_CHOICE, default="text")
@click.option("--overlay", type=click.Path(path_type=Path), help="Write an annotated copy of the image here.")
def cmd_detect(image_path, backend_kind, fixture, model_path, conf, iou, fmt, overlay):
    """Run detection on one image and print the findings."""
    from .decode import DEFAULT_CONF_THRESHOLD, DEFAULT_IOU_THRESHOLD

    conf = DEFAULT_CONF_THRESHOLD if conf is None else conf
    iou = DEFAULT_IOU_THRESHOLD if iou is None else iou
    try:
        backend = load_backend(BackendSpec(backend_kind, fixture if backend_kind == "stub" else model_path))
        pixels = read_image(image_path)
        detections = detect_image(backend, pixels, conf, iou)
    except (TomatodetError, OSError) as exc:
        _fail(str(exc))

    if overlay is not None:
        write_image(overlay, draw_overlay(pixels, detections))

    if fmt in STRUCTURED_FORMATS:
        _emit_json(
            {
                "image": str(image_path),
                "model_version": backend.descriptor.model_version,
                "detections": [
                    {
                        "slug": d.label.slug,
                        "score": d.score,
                        "box": {"cx": d.box.cx, "cy": d.box.cy, "w": d.box.w, "h": d.box.h},
                    }
                    for d in detections
                ],
            }
        )
        return
    if not detections:
        click.echo("no detections")
        return
    for d in detections:
        click.echo(f"{d.label.slug} {d.score:.2f} {d.box.cx:.6f} {d.box.cy:.6f} {d.box.w:.6f} {d.box.h:.6f}")


def _load_eval_samples(gt_dir: Path, pred_dir: Path) -> list[EvalSample]:
    gt_files = sorted(Path(gt_dir).glob("*.txt"))
    if not gt_files:
        _fail(f"no ground-truth files under {gt_dir}")
    samples = []
    for gt_file in gt_files:
        pred_file = Path(pred_dir) / gt_file.name
        predictions = ds.parse_predictions(pred_file) if pred_file.exists() else []
        samples.append(EvalSample(ds.parse_annotations(gt_file), predictions))
    return samples


@main.command("evaluate")
@click.option("--gt", "gt_dir", required=True, type=click.Path(path_type=Path, exists=True, file_okay=False))
@click.option("--pred", "pred_dir", required=True, type=click.Path(path_type=Path, exists=True, file_okay=False))
@click.option("--iou", type=float, default=DEFAULT_EVAL_IOU, show_default=True)
@click.option("--method-name", default="tomatodet", show_default=True)
@click.option("--format", "fmt", type=_FORMAT_CHOICE, default="text")
@click.option("--pr-dump", type=click.Path(path_type=Path), help="Write raw per-class PR points as JSON here.")
def cmd_evaluate(gt_dir, pred_dir, iou, method_name, fmt, pr_dump):
    """Score a predictions directory against a ground-truth directory."""
    try:
        samples = _load_eval_samples(gt_dir, pred_dir)
        report = mean_average_precision(samples, iou_threshold=iou)
    except TomatodetError as exc:
        _fail(str(exc))

    if pr_dump is not None:
        staircases = class_pr_points(samples, iou)
        points = {
            slug: [{"recall": r, "precision": p, "score": s} for r, p, s in stairs]
            for slug, stairs in staircases.items()
        }
        Path(pr_dump).write_text(json.dumps(points, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    if fmt in STRUCTURED_FORMATS:
        _emit_json(report.to_dict() | {"method": method_name})
    else:
        click.echo(format_report(report, method_name))


@main.command("augment")
@click.option("--op", required=True, type=click.Choice(["mosaic", "mixup", "affine", "pca"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--in", "inputs", required=True, multiple=True,
              type=click.Path(path_type=Path, exists=True, dir_okay=False),
              help="Input image; repeat for multi-image ops. Labels are read from the sibling .txt file.")
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--size", type=int, default=640, show_default=True, help="Canvas size for the four-image composite.")
def cmd_augment(op, seed, inputs, out_path, size):
    """Apply one augmentation and write image + label files."""
    arity = {"mosaic": 4, "mixup": 2, "affine": 1, "pca": 1}[op]
    if len(inputs) != arity:
        raise click.UsageError(f"--op {op} needs exactly {arity} --in image(s), got {len(inputs)}")

    def load_annotated(p: Path) -> AnnotatedImage:
        label_file = p.with_suffix(".txt")
        boxes = ds.parse_annotations(label_file) if label_file.is_file() else []
        return AnnotatedImage(read_image(p), boxes)

    try:
        annotated = [load_annotated(p) for p in inputs]
        cfg = AugmentationConfig(seed=seed, mosaic_size=size)
        rng = rng_from_seed(seed)
        if op == "mosaic":
            result = mosaic(annotated, cfg, rng)
        elif op == "mixup":
            result = mixup(annotated[0], annotated[1], cfg, rng)
        elif op == "affine":
            result = affine_augment(annotated[0], cfg, rng)
        else:
            result = pca_color_augment(annotated[0], cfg, rng)
        out_path = Path(out_path)
        write_image(out_path, result.pixels)
        out_path.with_suffix(".txt").write_text(
            ds.serialize_annotations(result.boxes), encoding="utf-8"
        )
    except (TomatodetError, OSError) as exc:
        _fail(str(exc))
    click.echo(f"wrote {out_path} ({len(result.boxes)} boxes)")


@main.command("stats")
@click.option("--dataset", "root", required=True, type=click.Path(path_type=Path, exists=True, file_okay=False))
@click.option("--format", "fmt", type=_FORMAT_CHOICE, default="text")
def cmd_stats(root, fmt):
    """Summarize per-class object counts for a dataset tree."""
    try:
        stats = ds.compute_stats(root)
    except TomatodetError as exc:
        _fail(str(exc))
    if fmt in STRUCTURED_FORMATS:
        _emit_json(stats.to_dict())
        return
    click.echo(f"images: {stats.image_count}  objects: {stats.object_count}")
    for row in stats.to_dict()["per_class"]:
        click.echo(f"  {row['class_id']:>2}  {row['slug']:<8} {row['count']}")
    click.echo(f"imbalance ratio: {stats.imbalance_ratio:.1f}")
    for warning in stats.warnings:
        click.echo(f"warning: {warning}", err=True)


@main.command("split")
@click.option("--dataset", "root", required=True, type=click.Path(path_type=Path, exists=True, file_okay=False))
@click.option("--ratios", default="0.8,0.1,0.1", show_default=True, help="train,val,test fractions summing to 1.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
def cmd_split(root, ratios, seed, out_dir):
    """Write train/val/test manifest files for a dataset tree."""
    try:
        parts = tuple(float(x) for x in ratios.split(","))
    except ValueError:
        raise click.UsageError(f"--ratios must be three comma-separated numbers, got {ratios!r}")
    if len(parts) != 3:
        raise click.UsageError(f"--ratios must have exactly three parts, got {len(parts)}")
    try:
        manifests = ds.split_dataset(root, parts, seed)
        ds.write_manifests(manifests, Path(out_dir))
    except TomatodetError as exc:
        _fail(str(exc))
    click.echo(" ".join(f"{name}={len(files)}" for name, files in manifests.items()))


@main.group("kb")
def cmd_kb() -> None:
    """Inspect and validate the remedy knowledge base."""


@cmd_kb.command("validate")
@click.argument("kb_file", type=click.Path(path_type=Path, exists=True, dir_okay=False))
@click.option("--strict", is_flag=True, help="Reject draft entries and require all disease classes.")
def kb_validate(kb_file, strict):
    violations = kb_mod.validate_kb(kb_file, mode="strict" if strict else "draft")
    if not violations:
        click.echo("OK")
        return
    for v in violations:
        click.echo(f"{v.path}: [{v.code}] {v.message}", err=True)
    sys.exit(1)


@cmd_kb.command("show")
@click.argument("slug")
@click.option("--lang", type=click.Choice(["ne", "en"]), default="ne", show_default=True)
@click.option("--kb", "kb_file", type=click.Path(path_type=Path), help="KB file (defaults to the packaged seed).")
@click.option("--format", "fmt", type=_FORMAT_CHOICE, default="text")
def kb_show(slug, lang, kb_file, fmt):
    try:
        kb = kb_mod.load_kb(Path(kb_file)) if kb_file else kb_mod.load_seed_kb()
        doc = kb_mod.lookup(kb, slug, lang)
    except TomatodetError as exc:
        _fail(str(exc))
    if fmt in STRUCTURED_FORMATS:
        _emit_json(doc)
        return
    click.echo(doc["name"])
    for heading, field in (("लक्षणहरू", "symptoms"), ("रोकथाम", "prevention"), ("उपचार", "remedy")):
        click.echo(f"\n{heading}:")
        for paragraph in doc[field]:
            click.echo(f"  - {paragraph}")


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="JSON server config file.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def cmd_serve(config_path, host, port):
    """Run the advisory HTTP service."""
    from .server import load_config, run_server

    try:
        cfg = load_config(config_path)
    except (TomatodetError, OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot load config: {exc}")
    if host is not None:
        cfg.host = host
    if port is not None:
        cfg.port = port
    run_server(cfg)


if __name__ == "__main__":
    main()
