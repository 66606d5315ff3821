"""Expert-editable preprocessing rules loaded from a JSON file.

Rules are data, not code: abbreviation expansions, ordered symbol-pattern
actions, strip patterns for machine-generated boilerplate, and the stopword
set. Patterns are regular expressions searched within a token (anchor with
``^``/``$`` for whole-token semantics); split patterns must not use capturing
groups.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import ManifestMalformed
from .stopwords import DEFAULT_STOPWORDS


class SymbolAction(str, Enum):
    PRESERVE_AS_SYMBOL = "preserve_as_symbol"
    SPLIT = "split"
    DELETE = "delete"


@dataclass(frozen=True)
class SymbolPattern:
    pattern: str
    action: SymbolAction

    @property
    def regex(self) -> re.Pattern:
        return _compile(self.pattern)


_COMPILED: dict[str, re.Pattern] = {}


def _compile(pattern: str) -> re.Pattern:
    rx = _COMPILED.get(pattern)
    if rx is None:
        rx = _COMPILED[pattern] = re.compile(pattern)
    return rx


@dataclass(frozen=True)
class DomainRules:
    abbreviations: dict[str, str] = field(default_factory=dict)
    symbol_patterns: tuple[SymbolPattern, ...] = ()
    autogen_patterns: tuple[str, ...] = ()
    stopwords: frozenset[str] = DEFAULT_STOPWORDS

    def __post_init__(self):
        for key, expansion in self.abbreviations.items():
            if not key or key != key.lower():
                raise ManifestMalformed(f"abbreviation key must be lowercase and non-empty: {key!r}")
            if not expansion:
                raise ManifestMalformed(f"abbreviation {key!r} has an empty expansion")
        for word in self.stopwords:
            if "_" in word or any(ch.isdigit() for ch in word):
                raise ManifestMalformed(
                    f"stopword {word!r} contains an underscore or digit; "
                    "symbolic identifiers are never stopwords"
                )
        for pattern in list(self.autogen_patterns) + [sp.pattern for sp in self.symbol_patterns]:
            try:
                _compile(pattern)
            except re.error as exc:
                raise ManifestMalformed(f"invalid pattern {pattern!r}: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "abbreviations": dict(sorted(self.abbreviations.items())),
            "symbol_patterns": [
                {"pattern": sp.pattern, "action": sp.action.value} for sp in self.symbol_patterns
            ],
            "autogen_patterns": list(self.autogen_patterns),
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DomainRules":
        if not isinstance(data, dict):
            raise ManifestMalformed("rules must be a JSON object")
        abbreviations = data.get("abbreviations", {})
        if not isinstance(abbreviations, dict):
            raise ManifestMalformed("abbreviations must be an object")
        raw_patterns = data.get("symbol_patterns", [])
        patterns = []
        for entry in raw_patterns:
            if not isinstance(entry, dict) or "pattern" not in entry or "action" not in entry:
                raise ManifestMalformed(f"symbol pattern entries need pattern and action: {entry!r}")
            try:
                action = SymbolAction(entry["action"])
            except ValueError as exc:
                raise ManifestMalformed(f"unknown symbol action {entry['action']!r}") from exc
            patterns.append(SymbolPattern(entry["pattern"], action))
        stopwords = data.get("stopwords")
        return cls(
            abbreviations=dict(abbreviations),
            symbol_patterns=tuple(patterns),
            autogen_patterns=tuple(data.get("autogen_patterns", [])),
            stopwords=DEFAULT_STOPWORDS if stopwords is None else frozenset(stopwords),
        )


def load_rules(path: str | Path) -> DomainRules:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ManifestMalformed(f"rules file not found: {path}") from exc
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ManifestMalformed(f"cannot parse rules file {path}: {exc}") from exc
    return DomainRules.from_dict(data)


def default_rules() -> DomainRules:
    return DomainRules()
