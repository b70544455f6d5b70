"""Bundled example depth layouts, loadable by name.

These ship with the package so a session can start from a known-good
authored experience instead of an empty file.  Each preset is a regular
layout document; loading goes through the normal deserializer.
"""

from __future__ import annotations

from importlib import resources

from .errors import LayoutFormatError
from .layout import DepthLayout, deserialize_layout


def _root():
    return resources.files(__package__) / "presets"


def list_presets() -> list[str]:
    """Names of the bundled layouts, sorted."""
    return sorted(p.name.removesuffix(".json")
                  for p in _root().iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> DepthLayout:
    """Load a bundled layout by name; unknown names raise LayoutFormatError."""
    entry = _root() / f"{name}.json"
    try:
        data = entry.read_bytes()
    except (FileNotFoundError, NotADirectoryError):
        raise LayoutFormatError(
            "", f"unknown preset {name!r}; available: {', '.join(list_presets())}") from None
    return deserialize_layout(data)


def preset_bytes(name: str) -> bytes:
    """Raw canonical bytes of a bundled layout file."""
    entry = _root() / f"{name}.json"
    try:
        return entry.read_bytes()
    except (FileNotFoundError, NotADirectoryError):
        raise LayoutFormatError(
            "", f"unknown preset {name!r}; available: {', '.join(list_presets())}") from None
