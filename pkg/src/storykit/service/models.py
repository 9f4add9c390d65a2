"""Request/response bodies for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    code: str
    message: str
    details: list[str] = Field(default_factory=list)


class ImageUploadResponse(BaseModel):
    image_id: str
    width: int
    height: int


class PreviewRequest(BaseModel):
    image_id: str
    style: dict
    max_dim: int = Field(default=720, ge=16, le=4096)


class StyleSaveRequest(BaseModel):
    style: dict
    name: str | None = Field(default=None, pattern=r"^[A-Za-z0-9._-]{1,64}$")


class StyleInfo(BaseModel):
    name: str
    version: int


class StyleListResponse(BaseModel):
    styles: list[StyleInfo]


class StyleSaveResponse(BaseModel):
    name: str
    version: int


class StoryboardRequest(BaseModel):
    image_ids: list[str]
    count: int = Field(ge=0, le=200)
    seed: int = Field(default=0, ge=0, lt=2 ** 63)
    page_width: int = Field(default=1024, ge=320, le=4096)


class StoryboardPage(BaseModel):
    layout_id: str
    style_name: str
    page_ref: str


class StoryboardResponse(BaseModel):
    pages: list[StoryboardPage]
