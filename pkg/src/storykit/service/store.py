"""On-disk session store: uploaded images, saved styles, rendered pages.

One directory per session, plain files inside, no database; restarting the
service over the same data directory reproduces identical bytes. Style
writes are serialized behind a lock and carry a version counter
(last write wins).
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from pathlib import Path

from ..imaging import ImageBuffer, decode_image
from ..pipeline import StylePipeline, from_document, to_document

_NAME_RE = re.compile(r"^[A-Za-z0-9._-]{1,64}$")


class UnknownImageError(KeyError):
    pass


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._decoded: dict[tuple[str, str], ImageBuffer] = {}

    def _session_dir(self, session: str) -> Path:
        if not _NAME_RE.match(session):
            raise ValueError("session id must match [A-Za-z0-9._-]{1,64}")
        return self.root / "sessions" / session

    # -- images ---------------------------------------------------------

    def add_image(self, session: str, raw: bytes) -> tuple[str, ImageBuffer]:
        image_id = hashlib.sha256(raw).hexdigest()[:16]
        img = decode_image(raw)
        path = self._session_dir(session) / "images"
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{image_id}.bin").write_bytes(raw)
        self._decoded[(session, image_id)] = img
        return image_id, img

    def get_image(self, session: str, image_id: str) -> ImageBuffer:
        key = (session, image_id)
        if key in self._decoded:
            return self._decoded[key]
        if not _NAME_RE.match(image_id):
            raise UnknownImageError(image_id)
        path = self._session_dir(session) / "images" / f"{image_id}.bin"
        if not path.is_file():
            raise UnknownImageError(image_id)
        img = decode_image(path.read_bytes())
        self._decoded[key] = img
        return img

    def list_images(self, session: str) -> list[str]:
        path = self._session_dir(session) / "images"
        if not path.is_dir():
            return []
        return sorted(p.stem for p in path.glob("*.bin"))

    # -- styles ---------------------------------------------------------

    def save_style(self, session: str, name: str, style: StylePipeline) -> int:
        with self._lock:
            path = self._session_dir(session) / "styles"
            path.mkdir(parents=True, exist_ok=True)
            file = path / f"{name}.json"
            version = 1
            if file.is_file():
                version = json.loads(file.read_text()).get("version", 0) + 1
            payload = {"version": version, "style": to_document(style)}
            file.write_text(json.dumps(payload, indent=2) + "\n")
            return version

    def get_style(self, session: str, name: str) -> tuple[StylePipeline, int] | None:
        if not _NAME_RE.match(name):
            return None
        file = self._session_dir(session) / "styles" / f"{name}.json"
        if not file.is_file():
            return None
        payload = json.loads(file.read_text())
        return from_document(payload["style"]), int(payload.get("version", 1))

    def list_styles(self, session: str) -> list[tuple[str, int]]:
        path = self._session_dir(session) / "styles"
        if not path.is_dir():
            return []
        out = []
        for file in sorted(path.glob("*.json")):
            payload = json.loads(file.read_text())
            out.append((file.stem, int(payload.get("version", 1))))
        return out

    # -- rendered pages --------------------------------------------------

    def save_page(self, session: str, ref: str, png: bytes) -> None:
        path = self._session_dir(session) / "pages"
        path.mkdir(parents=True, exist_ok=True)
        (path / ref).write_bytes(png)

    def get_page(self, session: str, ref: str) -> bytes | None:
        if not re.match(r"^[A-Za-z0-9._-]{1,128}\.png$", ref):
            return None
        path = self._session_dir(session) / "pages" / ref
        if not path.is_file():
            return None
        return path.read_bytes()
