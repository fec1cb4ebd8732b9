"""The shipped example corpus (``*.cnil`` files next to this module)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..dsl import Document, parse_document


def names(directory: str | Path | None = None) -> list:
    if directory is not None:
        return sorted(p.stem for p in Path(directory).glob("*.cnil"))
    return sorted(Path(r.name).stem for r in resources.files(__name__).iterdir() if r.name.endswith(".cnil"))


def source(name: str, directory: str | Path | None = None) -> str:
    stem = name[:-5] if name.endswith(".cnil") else name
    if directory is not None:
        return (Path(directory) / f"{stem}.cnil").read_text(encoding="utf-8")
    ref = resources.files(__name__).joinpath(f"{stem}.cnil")
    if not ref.is_file():
        raise FileNotFoundError(f"no corpus entry named {stem!r}")
    return ref.read_text(encoding="utf-8")


def load(name: str, directory: str | Path | None = None) -> Document:
    return parse_document(source(name, directory))
