"""Any-to-Latin transliteration with script-dispatched rule sets.

Schemes are rule files under ``data/schemes`` (``iso9.rules`` and friends),
compiled on first use. ``registry.tsv`` maps a script name to the scheme used
for it in ``AUTO`` mode.
"""

from __future__ import annotations

import threading
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .rules import (
    RuleSet,
    apply_raw,
    apply_ruleset,
    compile_ruleset,
    invert_ruleset,
    resolve_soft_spaces,
)
from .ucd import (
    COMMON,
    INHERITED,
    LATIN,
    CharacterDatabase,
    default_database,
    normalize,
    script_runs,
)

__all__ = [
    "AUTO",
    "SCHEMES",
    "SchemeRegistry",
    "UnknownSchemeError",
    "UconvDiagnostics",
    "default_registry",
    "uconv",
    "uconv_with_diagnostics",
    "invert_iso9",
]

AUTO = "AUTO"
SCHEMES = ("ISO9", "ISO15919", "PINYIN", "HEPBURN", "ADEGN")
_SCHEME_DIR = Path(__file__).parent / "data" / "schemes"
_PASSTHROUGH_SCRIPTS = frozenset({LATIN, COMMON, INHERITED})


class UnknownSchemeError(KeyError):
    def __str__(self) -> str:
        return f"unknown scheme {self.args[0]!r}; expected one of {', '.join(SCHEMES)} or {AUTO}"


@dataclass
class UconvDiagnostics:
    """Runs left untouched because no scheme is registered for their script."""

    unregistered: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.unregistered)

    def scripts(self) -> set[str]:
        return {script for _, _, script in self.unregistered}


class SchemeRegistry:
    """Script -> scheme table plus a lazy cache of compiled rule sets."""

    def __init__(self, directory: Path | str = _SCHEME_DIR):
        self.directory = Path(directory)
        self.by_script: dict[str, str] = {}
        for line in (self.directory / "registry.tsv").read_text(encoding="utf-8").splitlines():
            if line.strip() and not line.startswith("#"):
                script, scheme = line.split("\t")[:2]
                self.by_script[script.strip()] = scheme.strip()
        self._compiled: dict[str, RuleSet] = {}
        self._lock = threading.Lock()

    def ruleset(self, scheme_id: str) -> RuleSet:
        scheme_id = scheme_id.upper()
        rs = self._compiled.get(scheme_id)
        if rs is not None:
            return rs
        path = self.directory / f"{scheme_id.lower()}.rules"
        if scheme_id not in SCHEMES and not path.exists():
            raise UnknownSchemeError(scheme_id)
        with self._lock:
            rs = self._compiled.get(scheme_id)
            if rs is None:
                rs = compile_ruleset(path.read_text(encoding="utf-8"), scheme_id)
                self._compiled[scheme_id] = rs
        return rs

    def for_script(self, script: str) -> RuleSet | None:
        scheme = self.by_script.get(script)
        return None if scheme is None else self.ruleset(scheme)


_default_registry: SchemeRegistry | None = None


def default_registry() -> SchemeRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = SchemeRegistry()
    return _default_registry


def uconv_with_diagnostics(
    text: str,
    scheme: str = AUTO,
    *,
    registry: SchemeRegistry | None = None,
    db: CharacterDatabase | None = None,
) -> tuple[str, UconvDiagnostics]:
    """Transliterate ``text``; also report runs that had no scheme."""
    registry = registry or default_registry()
    diagnostics = UconvDiagnostics()
    text = normalize(text, "NFKC")
    if scheme.upper() != AUTO:
        return apply_ruleset(registry.ruleset(scheme), text), diagnostics
    pieces = []
    for run in script_runs(text, db or default_database()):
        segment = text[run.start : run.end]
        if run.script in _PASSTHROUGH_SCRIPTS:
            pieces.append(segment)
            continue
        rs = registry.for_script(run.script)
        if rs is None:
            diagnostics.unregistered.append((run.start, run.end, run.script))
            pieces.append(segment)
        else:
            pieces.append(apply_raw(rs, segment))
    return unicodedata.normalize("NFC", resolve_soft_spaces("".join(pieces))), diagnostics


def uconv(text: str, scheme: str = AUTO, *, registry: SchemeRegistry | None = None) -> str:
    """Transliterate ``text`` with ``scheme`` (``AUTO`` picks one per script run).

    >>> uconv("Чайковский")
    'Čajkovskij'
    """
    return uconv_with_diagnostics(text, scheme, registry=registry)[0]


def invert_iso9(text: str, *, registry: SchemeRegistry | None = None) -> str:
    """Undo ISO 9: ``"Čajkovskij"`` -> ``"Чайковский"``.

    Raises :class:`~romanlab.rules.InversionError` on Latin text that ISO 9
    cannot have produced.
    """
    return invert_ruleset((registry or default_registry()).ruleset("ISO9"), text)
