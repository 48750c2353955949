"""Access to the bundled corpus files (algebras, ray sets, matrix seeds)."""

from __future__ import annotations

from importlib import resources

from .errors import DomainError


def corpus_path(name: str) -> str:
    """Filesystem path of a bundled corpus file, e.g. 'mo2.pba' or
    'cabello18.rays'."""
    ref = resources.files("pbalg").joinpath("data", name)
    if not ref.is_file():
        raise DomainError(f"no bundled corpus file named {name!r}")
    return str(ref)


def corpus_names() -> list[str]:
    base = resources.files("pbalg").joinpath("data")
    return sorted(p.name for p in base.iterdir() if p.is_file())
