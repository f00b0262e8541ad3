"""HTTP advisory service: detection, remedies, KB sync and feedback.

All endpoints live under ``/api/v1`` and speak JSON; errors use one
envelope ``{"error": {"code", "message"}}`` with machine-readable codes.
Knowledge-base snapshots are immutable and swapped atomically, so one
response never mixes two KB versions. The feedback log is the single
serialized write point.
"""

from __future__ import annotations

import hashlib
import json
import os
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from . import kb as kb_mod
from .backend import BackendSpec, image_content_hash, load_backend
from .boxes import BoundingBox
from .errors import (
    BackendLoadError,
    BackendRuntimeError,
    ImageDecodeError,
    TomatodetError,
)
from .feedback import FeedbackLog
from .labels import is_known_slug
from .pipeline import detect_image

DEFAULT_MAX_UPLOAD = 10 * 1024 * 1024  # 10 MiB


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    kb_path: Path | None = None  # None: packaged seed KB
    backend_kind: str = "stub"
    backend_path: Path | None = None
    feedback_log_path: Path = Path("feedback.log")
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    export_token: str = "change-me"
    conf_threshold: float = 0.25
    iou_threshold: float = 0.45
    default_lang: str = "ne"
    latency_budget_ms: int = 2000
    retain_images: bool = False
    retained_dir: Path = Path("retained_uploads")


_ENV_PREFIX = "TOMATODET_"


def load_config(path: Path | None = None, env: dict | None = None) -> ServerConfig:
    """Read a JSON config file, then apply TOMATODET_* env overrides."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(raw) - set(ServerConfig.__dataclass_fields__)
        if unknown:
            raise TomatodetError(f"unknown config keys: {sorted(unknown)}")
        values.update(raw)

    for name, f in ServerConfig.__dataclass_fields__.items():
        env_key = _ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = env[env_key]

    cfg = ServerConfig()
    for name, value in values.items():
        current = getattr(cfg, name)
        if isinstance(current, bool):
            value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            value = int(value)
        elif isinstance(current, float):
            value = float(value)
        elif name.endswith(("_path", "_dir")) and value is not None:
            value = Path(value)
        setattr(cfg, name, value)
    return cfg


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class AdvisoryState:
    """Shared immutable snapshots plus the serialized feedback writer."""

    def __init__(self, config: ServerConfig):
        self.config = config
        self.backend = load_backend(BackendSpec(config.backend_kind, config.backend_path))
        kb_path = config.kb_path or kb_mod.seed_kb_path()
        self._kb = kb_mod.load_kb(Path(kb_path))
        self.feedback = FeedbackLog(config.feedback_log_path)

    @property
    def kb(self) -> kb_mod.KnowledgeBase:
        return self._kb

    def swap_kb(self, new_kb: kb_mod.KnowledgeBase) -> None:
        """Atomic snapshot replacement; in-flight requests keep their copy."""
        self._kb = new_kb

    def reload_kb(self, path: Path | None = None) -> None:
        self.swap_kb(kb_mod.load_kb(Path(path or self.config.kb_path or kb_mod.seed_kb_path())))


def _remedy_document(kb, slug: str, lang: str) -> dict:
    try:
        return kb_mod.lookup(kb, slug, lang)
    except kb_mod.NoRemedyDefinedError:
        return {"slug": slug, "no_remedy_defined": True}
    except kb_mod.UnknownSlugError:
        return {"slug": slug, "no_remedy_defined": True, "missing_entry": True}


def _parse_since_timestamp(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise ApiError(400, "invalid-parameter", f"cannot parse timestamp {raw!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _validate_corrections(corrected) -> list | str | None:
    if corrected is None or corrected == "no disease":
        return corrected
    if not isinstance(corrected, list):
        raise ApiError(400, "invalid-correction", "corrected_labels must be a list or 'no disease'")
    out = []
    for item in corrected:
        if not isinstance(item, dict) or "slug" not in item:
            raise ApiError(400, "invalid-correction", "each correction needs a slug")
        slug = item["slug"]
        if not is_known_slug(slug):
            raise ApiError(400, "unknown-slug", f"unknown class slug {slug!r}")
        box = item.get("box")
        if box is not None:
            try:
                parsed = BoundingBox(box["cx"], box["cy"], box["w"], box["h"])
            except (KeyError, TypeError):
                raise ApiError(400, "invalid-box", "box must carry cx, cy, w, h") from None
            if not parsed.is_valid():
                raise ApiError(400, "invalid-box", f"box values out of range: {box}")
        out.append({"slug": slug, "box": box})
    return out


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    state = AdvisoryState(config)

    app = FastAPI(title="tomatodet advisory service")
    app.state.advisory = state
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "invalid-request", "message": str(exc.errors())}},
        )

    @app.post("/api/v1/detect")
    async def handle_detect(request: Request, conf_threshold: float | None = None, lang: str | None = None):
        content_type = request.headers.get("content-type", "")
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit() and int(declared) > config.max_upload_bytes:
            raise ApiError(
                413, "payload-too-large",
                f"declared size {declared} exceeds limit {config.max_upload_bytes}",
            )

        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("image")
            if upload is None or isinstance(upload, str):
                raise ApiError(400, "missing-image", "multipart field 'image' is required")
            data = await upload.read()
        else:
            data = await request.body()
        if len(data) > config.max_upload_bytes:
            raise ApiError(
                413, "payload-too-large",
                f"upload of {len(data)} bytes exceeds limit {config.max_upload_bytes}",
            )
        if not data:
            raise ApiError(400, "missing-image", "request carried no image bytes")

        lang = lang or config.default_lang
        if lang not in ("ne", "en"):
            raise ApiError(400, "invalid-parameter", f"lang must be 'ne' or 'en', got {lang!r}")
        conf = config.conf_threshold if conf_threshold is None else conf_threshold
        if not 0.0 <= conf < 1.0:
            raise ApiError(400, "invalid-parameter", f"conf_threshold must be in [0, 1), got {conf}")

        try:
            pixels = decode_image(data)
        except ImageDecodeError as exc:
            raise ApiError(400, "bad-image", str(exc)) from None

        if config.retain_images:
            retained = Path(config.retained_dir)
            retained.mkdir(parents=True, exist_ok=True)
            digest = hashlib.sha256(data).hexdigest()
            (retained / f"{digest}.bin").write_bytes(data)

        kb = state.kb  # one snapshot for the whole response
        try:
            detections = detect_image(state.backend, pixels, conf, config.iou_threshold)
        except (BackendRuntimeError, BackendLoadError) as exc:
            raise ApiError(503, "backend-error", str(exc)) from None

        seen: list[str] = []
        for det in detections:
            if det.label.slug not in seen:
                seen.append(det.label.slug)
        return {
            "request_id": uuid.uuid4().hex,
            "model_version": state.backend.descriptor.model_version,
            "kb_version": kb.version,
            "detections": [
                {
                    "slug": det.label.slug,
                    "name_ne": det.label.name_ne,
                    "name_en": det.label.name_en,
                    "score": det.score,
                    "box": {"cx": det.box.cx, "cy": det.box.cy, "w": det.box.w, "h": det.box.h},
                }
                for det in detections
            ],
            "remedies": [_remedy_document(kb, slug, lang) for slug in seen],
        }

    @app.get("/api/v1/remedies/{slug}")
    def handle_remedy(slug: str, response: Response, lang: str | None = None):
        kb = state.kb
        lang = lang or config.default_lang
        if lang not in ("ne", "en"):
            raise ApiError(400, "invalid-parameter", f"lang must be 'ne' or 'en', got {lang!r}")
        try:
            doc = kb_mod.lookup(kb, slug, lang)
        except kb_mod.NoRemedyDefinedError:
            raise ApiError(404, "no-remedy-defined", "the background class has no remedy") from None
        except kb_mod.UnknownSlugError as exc:
            raise ApiError(404, "unknown-slug", str(exc)) from None
        doc["kb_version"] = kb.version
        response.headers["Cache-Control"] = "public, must-revalidate"
        response.headers["ETag"] = f'"kb-{kb.version}"'
        return doc

    @app.get("/api/v1/kb/version")
    def handle_kb_version():
        return {"version": state.kb.version}

    @app.get("/api/v1/kb/delta")
    def handle_kb_delta(since: str = "0"):
        try:
            since_version = int(since)
        except ValueError:
            raise ApiError(400, "invalid-parameter", f"since must be an integer, got {since!r}") from None
        if since_version < 0:
            raise ApiError(400, "invalid-parameter", "since must be >= 0")
        return kb_mod.kb_delta(state.kb, since_version)

    @app.post("/api/v1/feedback")
    async def handle_feedback(request: Request):
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError:
            raise ApiError(400, "invalid-request", "body must be JSON") from None
        if not isinstance(payload, dict):
            raise ApiError(400, "invalid-request", "body must be a JSON object")

        request_id = payload.get("request_id")
        image_hash = payload.get("image_hash")
        if not request_id and not image_hash:
            raise ApiError(400, "missing-reference", "request_id or image_hash is required")
        corrected = _validate_corrections(payload.get("corrected_labels"))
        original = payload.get("original_detections") or []
        if not isinstance(original, list):
            raise ApiError(400, "invalid-request", "original_detections must be a list")

        try:
            record = state.feedback.append(
                request_id=request_id,
                image_hash=image_hash,
                original_detections=original,
                corrected_labels=corrected,
                comment=payload.get("comment"),
                locale=payload.get("locale"),
            )
        except OSError as exc:
            raise ApiError(503, "storage-error", f"could not persist feedback: {exc}") from None
        return {"id": record.id}

    @app.get("/api/v1/feedback/export")
    def export_feedback(request: Request, since: str = "0"):
        auth = request.headers.get("authorization", "")
        if not auth.startswith("Bearer ") or auth[len("Bearer "):] != config.export_token:
            raise ApiError(401, "unauthorized", "a valid export token is required")
        records = state.feedback.since(_parse_since_timestamp(since))
        body = "".join(json.dumps(r.to_document(), ensure_ascii=False) + "\n" for r in records)
        return PlainTextResponse(body, media_type="application/x-ndjson")

    return app


# imported late to keep cv2 out of module import for config-only callers
def decode_image(data: bytes):
    from .images import decode_image_bytes

    return decode_image_bytes(data)


def run_server(config: ServerConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
