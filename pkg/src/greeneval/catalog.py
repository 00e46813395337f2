"""Accelerator specification catalog: name -> maximum power draw.

The catalog file format is JSON Lines: one JSON object per line with the
fields ``name`` (required), ``max_power_watts`` (required, > 0),
``aliases`` (optional list of alternate spellings) and ``provenance``
(optional free text saying where the power figure comes from). Unknown
fields are rejected. Blank lines and ``#``-prefixed comment lines are
permitted.

Lookups are case-insensitive over names and aliases; there is no fuzzy
matching, so behavior stays deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .core import DuplicateError, ParseError

_REQUIRED_FIELDS = {"name", "max_power_watts"}
_ALLOWED_FIELDS = {"name", "max_power_watts", "aliases", "provenance"}

SEED_CATALOG_RESOURCE = "catalog.jsonl"


@dataclass(frozen=True)
class CatalogEntry:
    """One accelerator model and its per-device maximum power draw."""

    name: str
    max_power_watts: float
    aliases: tuple[str, ...] = ()
    provenance: str = ""

    def keys(self) -> tuple[str, ...]:
        return (self.name, *self.aliases)


class Catalog:
    """An immutable, case-insensitively indexed set of catalog entries."""

    def __init__(self, entries: tuple[CatalogEntry, ...] | list[CatalogEntry]):
        self._entries = tuple(entries)
        index: dict[str, CatalogEntry] = {}
        owner: dict[str, str] = {}
        for entry in self._entries:
            if entry.max_power_watts <= 0:
                raise ParseError(
                    f"entry {entry.name!r}: max_power_watts must be > 0, "
                    f"got {entry.max_power_watts!r}")
            for key in entry.keys():
                folded = key.strip().casefold()
                if not folded:
                    raise ParseError(f"entry {entry.name!r} has an empty name or alias")
                if folded in index:
                    raise DuplicateError(
                        f"name {key!r} is claimed by both entry "
                        f"{owner[folded]!r} and entry {entry.name!r}")
                index[folded] = entry
                owner[folded] = entry.name
        self._index = index

    @property
    def entries(self) -> tuple[CatalogEntry, ...]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return self._entries == other._entries

    def lookup(self, name: str) -> CatalogEntry | None:
        """Case-insensitive match on name or alias; None when not found."""
        return self._index.get(str(name).strip().casefold())

    def known_names(self) -> list[str]:
        """All names and aliases, in catalog order."""
        names: list[str] = []
        for entry in self._entries:
            names.extend(entry.keys())
        return names


def load_catalog(text: str, *, source: str = "<catalog>") -> Catalog:
    """Parse a JSON Lines catalog document.

    Raises:
        ParseError: on malformed JSON (with line and column), wrong field
            types, or unknown fields.
        DuplicateError: when two entries claim the same name or alias.
    """
    entries: list[CatalogEntry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}",
                             source=source, line=lineno, column=exc.colno) from exc
        if not isinstance(obj, dict):
            raise ParseError("each entry must be a JSON object",
                             source=source, line=lineno)
        unknown = set(obj) - _ALLOWED_FIELDS
        if unknown:
            raise ParseError(
                f"unknown field(s) {sorted(unknown)}; allowed fields are "
                f"{sorted(_ALLOWED_FIELDS)}", source=source, line=lineno)
        missing = _REQUIRED_FIELDS - set(obj)
        if missing:
            raise ParseError(f"missing required field(s) {sorted(missing)}",
                             source=source, line=lineno)
        name = obj["name"]
        if not isinstance(name, str) or not name.strip():
            raise ParseError("name must be a non-empty string",
                             source=source, line=lineno)
        watts = obj["max_power_watts"]
        if isinstance(watts, bool) or not isinstance(watts, (int, float)) or watts <= 0:
            raise ParseError(f"max_power_watts must be a number > 0, got {watts!r}",
                             source=source, line=lineno)
        aliases = obj.get("aliases", [])
        if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
            raise ParseError("aliases must be a list of strings",
                             source=source, line=lineno)
        provenance = obj.get("provenance", "")
        if not isinstance(provenance, str):
            raise ParseError("provenance must be a string",
                             source=source, line=lineno)
        entries.append(CatalogEntry(name=name, max_power_watts=float(watts),
                                    aliases=tuple(aliases), provenance=provenance))
    return Catalog(entries)


def serialize_catalog(catalog: Catalog) -> str:
    """Render a catalog back to its JSON Lines form (round-trips exactly)."""
    lines = []
    for entry in catalog.entries:
        obj = {
            "name": entry.name,
            "max_power_watts": entry.max_power_watts,
            "aliases": list(entry.aliases),
            "provenance": entry.provenance,
        }
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def load_catalog_file(path: str | Path) -> Catalog:
    path = Path(path)
    return load_catalog(path.read_text(encoding="utf-8"), source=str(path))


def seed_catalog() -> Catalog:
    """The catalog bundled with the package (see data/catalog.jsonl)."""
    text = resources.files("greeneval.data").joinpath(
        SEED_CATALOG_RESOURCE).read_text(encoding="utf-8")
    return load_catalog(text, source=f"builtin:{SEED_CATALOG_RESOURCE}")
