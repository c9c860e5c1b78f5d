"""Run manifests: config echo, library versions, seed, timings and output checksums."""

from __future__ import annotations

import hashlib
import platform
from importlib import metadata
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

MANIFEST_NAME = "manifest.json"
TRACKED_PACKAGES = ("scatterlab", "numpy", "scipy", "pandas", "pydantic", "click")


class ManifestError(ValueError):
    """Raised when a result directory has no readable manifest."""


class FileEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    path: str
    sha256: str
    bytes: int


class Manifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    config: dict[str, Any]
    config_hash: str
    seed: int
    versions: dict[str, str]
    started_at: str
    wall_time_seconds: float
    timings: dict[str, float] = Field(default_factory=dict)
    truncated: bool = False
    truncation_reason: str | None = None
    rows: int = 0
    failed_rows: int = 0
    warnings: list[str] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    files: list[FileEntry] = Field(default_factory=list)

    def file_paths(self) -> list[str]:
        return [entry.path for entry in self.files]


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def library_versions() -> dict[str, str]:
    versions = {"python": platform.python_version()}
    for package in TRACKED_PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def collect_files(out_dir: Path) -> list[FileEntry]:
    """Checksum every file under out_dir except the manifest itself, sorted by relative path."""
    entries = []
    for path in sorted(p for p in out_dir.rglob("*") if p.is_file()):
        relative = path.relative_to(out_dir).as_posix()
        if relative == MANIFEST_NAME:
            continue
        entries.append(FileEntry(path=relative, sha256=sha256_file(path), bytes=path.stat().st_size))
    return entries


def write_manifest(out_dir: Path, manifest: Manifest) -> Path:
    path = out_dir / MANIFEST_NAME
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    return path


def load_manifest(result_dir: str | Path) -> Manifest:
    """Read and validate the manifest of a result directory.

    Raises:
        ManifestError: If the manifest is missing or invalid
    """
    path = Path(result_dir) / MANIFEST_NAME
    if not path.is_file():
        msg = f"no {MANIFEST_NAME} in {result_dir}"
        raise ManifestError(msg)
    try:
        return Manifest.model_validate_json(path.read_text())
    except ValidationError as e:
        msg = f"invalid manifest {path}: {e}"
        raise ManifestError(msg) from e


def verify_checksums(result_dir: str | Path) -> list[str]:
    """Paths whose current checksum differs from the manifest, or that are missing."""
    root = Path(result_dir)
    manifest = load_manifest(root)
    mismatched = []
    for entry in manifest.files:
        path = root / entry.path
        if not path.is_file() or sha256_file(path) != entry.sha256:
            mismatched.append(entry.path)
    return mismatched
