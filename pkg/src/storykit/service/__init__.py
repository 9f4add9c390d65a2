"""HTTP facade for the studio UI: catalog, previews, styles, storyboards.

All error responses are structured JSON bodies {code, message, details};
the preview and page endpoints return PNG bytes produced by the same code
paths as the CLI, so outputs are byte-identical between the two.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from fastapi import FastAPI, Query, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import ValidationError

from .. import pipeline
from ..filters import catalog_document
from ..imaging import InvalidArgumentError, encode_png, fit_within
from ..selection import DEFAULT_DUPLICATE_THRESHOLD, select
from ..storyboard import generate_pages
from .models import (
    ErrorBody,
    ImageUploadResponse,
    PreviewRequest,
    StoryboardPage,
    StoryboardRequest,
    StoryboardResponse,
    StyleInfo,
    StyleListResponse,
    StyleSaveRequest,
    StyleSaveResponse,
)
from .store import SessionStore, UnknownImageError

DEFAULT_DATA_DIR = "./storykit-data"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: list[str] | None = None):
        super().__init__(message)
        self.status = status
        self.body = ErrorBody(code=code, message=message, details=details or [])


def _session_param(session: str = Query(default="default", pattern=r"^[A-Za-z0-9._-]{1,64}$")):
    return session


def create_app(data_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="storykit studio service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(data_dir or os.environ.get("STORYKIT_DATA_DIR", DEFAULT_DATA_DIR))
    app.state.store = store
    catalog_bytes = (json.dumps(catalog_document(), indent=2) + "\n").encode()

    from .. import kernels

    kernels.warm_up()  # absorb JIT compilation before the first preview

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def _req_error(_req: Request, exc: RequestValidationError):
        details = [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()]
        return JSONResponse(
            status_code=422,
            content=ErrorBody(code="validation_error", message="invalid request",
                              details=details).model_dump())

    @app.exception_handler(404)
    async def _not_found(_req: Request, exc):
        return JSONResponse(
            status_code=404,
            content=ErrorBody(code="not_found", message="no such endpoint or resource").model_dump())

    @app.get("/api/filters")
    def get_filters() -> Response:
        # pre-serialized so responses are byte-identical across calls
        return Response(content=catalog_bytes, media_type="application/json")

    @app.post("/api/images", response_model=ImageUploadResponse)
    async def upload_image(file: UploadFile, session: str = _session_param()):
        raw = await file.read()
        try:
            image_id, img = store.add_image(session, raw)
        except Exception as exc:
            raise ApiError(400, "bad_image", "could not decode image", [str(exc)]) from exc
        return ImageUploadResponse(image_id=image_id, width=img.width, height=img.height)

    def _parse_style(doc: dict) -> pipeline.StylePipeline:
        try:
            style = pipeline.from_document(doc)
        except pipeline.StyleParseError as exc:
            raise ApiError(422, "invalid_style", "style document rejected", [str(exc)]) from exc
        errors = pipeline.validate(style)
        if errors:
            raise ApiError(422, "invalid_style", "style failed validation", errors)
        return style

    @app.post("/api/preview")
    async def preview(request: Request, session: str = _session_param()):
        raw = await request.body()
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, "bad_json", "request body is not valid JSON",
                           [str(exc)]) from exc
        try:
            req = PreviewRequest.model_validate(payload)
        except ValidationError as exc:
            details = [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()]
            raise ApiError(422, "validation_error", "invalid preview request", details) from exc
        try:
            img = store.get_image(session, req.image_id)
        except UnknownImageError:
            raise ApiError(404, "unknown_image", f"no image {req.image_id!r} in session")
        style = _parse_style(req.style)
        out = pipeline.execute(style, fit_within(img, req.max_dim))
        return Response(content=encode_png(out), media_type="image/png")

    @app.post("/api/styles", response_model=StyleSaveResponse)
    def save_style(req: StyleSaveRequest, session: str = _session_param()):
        style = _parse_style(req.style)
        name = req.name or style.name
        if not name or name == "untitled":
            raise ApiError(422, "invalid_style", "style needs a name to be saved")
        style.name = name
        version = store.save_style(session, name, style)
        return StyleSaveResponse(name=name, version=version)

    @app.post("/api/styles/randomize")
    def randomize_styles(body: dict | None = None):
        from ..procedural import ProcGenConfig, generate

        body = body or {}
        try:
            cfg = ProcGenConfig(seed=int(body.get("seed", 0)),
                                count=min(int(body.get("count", 1)), 64))
            styles = generate(cfg)
        except (InvalidArgumentError, ValueError, TypeError) as exc:
            raise ApiError(422, "invalid_request", "bad randomize parameters",
                           [str(exc)]) from exc
        return JSONResponse({"styles": [pipeline.to_document(s) for s in styles]})

    @app.get("/api/styles", response_model=StyleListResponse)
    def list_styles(session: str = _session_param()):
        bundled = [StyleInfo(name=n, version=0) for n in pipeline.bundled_style_names()]
        saved = [StyleInfo(name=n, version=v) for n, v in store.list_styles(session)]
        return StyleListResponse(styles=bundled + saved)

    @app.get("/api/styles/{name}")
    def get_style(name: str, session: str = _session_param()):
        found = store.get_style(session, name)
        if found is not None:
            return JSONResponse(pipeline.to_document(found[0]))
        if name in pipeline.bundled_style_names():
            return JSONResponse(pipeline.to_document(pipeline.load_bundled_style(name)))
        raise ApiError(404, "unknown_style", f"no style named {name!r}")

    @app.post("/api/storyboards", response_model=StoryboardResponse)
    def make_storyboards(req: StoryboardRequest, session: str = _session_param()):
        missing = [i for i in req.image_ids if _missing(store, session, i)]
        if missing:
            raise ApiError(404, "unknown_image", "unknown image ids", missing)
        images = [(i, store.get_image(session, i)) for i in req.image_ids]
        if images:
            report = select(images, DEFAULT_DUPLICATE_THRESHOLD)
            order = {image_id: k for k, (image_id, _) in enumerate(images)}
            keep = sorted(report.representatives, key=lambda i: order[i])
            usable = [(i, store.get_image(session, i)) for i in keep]
        else:
            usable = []
        if not usable:
            raise ApiError(409, "no_usable_images",
                           "no usable images remain after duplicate selection")
        styles = {n: pipeline.load_bundled_style(n) for n in pipeline.bundled_style_names()}
        for n, _v in store.list_styles(session):
            styles[n] = store.get_style(session, n)[0]
        try:
            generated = generate_pages(usable, styles, req.count, req.seed, req.page_width)
        except InvalidArgumentError as exc:
            raise ApiError(409, "too_few_images", str(exc)) from exc
        pages = []
        for i, (layout_id, style_name, page) in enumerate(generated):
            ref = f"{req.seed}-{i:03d}-{layout_id}-{style_name}.png"
            store.save_page(session, ref, encode_png(page))
            pages.append(StoryboardPage(layout_id=layout_id, style_name=style_name,
                                        page_ref=ref))
        return StoryboardResponse(pages=pages)

    @app.get("/api/storyboards/pages/{ref}")
    def get_page(ref: str, session: str = _session_param()):
        png = store.get_page(session, ref)
        if png is None:
            raise ApiError(404, "unknown_page", f"no rendered page {ref!r}")
        return Response(content=png, media_type="image/png")

    return app


def _missing(store: SessionStore, session: str, image_id: str) -> bool:
    try:
        store.get_image(session, image_id)
        return False
    except UnknownImageError:
        return True
