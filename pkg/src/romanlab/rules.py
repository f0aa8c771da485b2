"""Context-sensitive rewrite rules: compile rule files, apply them, invert them.

Rule file grammar (UTF-8, one rule per line, ``#`` starts a comment)::

    $vowel = [aeiou]                      # named character class
    match -> replacement                  # context-free rule
    [pre] | match | [post] -> replacement @priority

``pre`` and ``post`` are optional single-character contexts written as a
bracketed class or a ``$name`` reference; an absent neighbour satisfies only
negated classes. ``@priority`` defaults to 0. Escapes usable in the match and
replacement: ``\\uXXXX``, ``\\s`` (space), ``\\|``, ``\\#``, ``\\\\`` and
``\\b``, a *soft space* that survives only between two non-space outputs and
never before closing punctuation.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

__all__ = [
    "RewriteRule",
    "RuleSet",
    "RuleSyntaxError",
    "InversionError",
    "SOFT_SPACE",
    "compile_ruleset",
    "apply_ruleset",
    "apply_raw",
    "resolve_soft_spaces",
    "invert_ruleset",
    "graphemes",
]

# A Unicode noncharacter marks soft spaces inside intermediate output.
SOFT_SPACE = "﷐"
_CLOSING = set(".,;:!?)]}»”’、。，．！？")


class RuleSyntaxError(ValueError):
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class InversionError(ValueError):
    """Input contains text outside the image of an invertible rule set."""

    def __init__(self, start: int, end: int, span: str):
        self.start, self.end, self.span = start, end, span
        super().__init__(f"{span!r} at {start}..{end} is not produced by this scheme")


@dataclass(frozen=True, slots=True)
class RewriteRule:
    match: str
    replacement: str
    pre_context: str = ""
    post_context: str = ""
    priority: int = 0
    order: int = 0
    _pre: re.Pattern | None = field(default=None, repr=False, compare=False)
    _post: re.Pattern | None = field(default=None, repr=False, compare=False)

    def fits(self, text: str, pos: int) -> bool:
        if not text.startswith(self.match, pos):
            return False
        if self._pre is not None and not _context_ok(self._pre, self.pre_context, text, pos - 1):
            return False
        end = pos + len(self.match)
        if self._post is not None and not _context_ok(self._post, self.post_context, text, end):
            return False
        return True


def _context_ok(pattern: re.Pattern, source: str, text: str, index: int) -> bool:
    if 0 <= index < len(text):
        return pattern.fullmatch(text[index]) is not None
    return source.startswith("[^")


@dataclass(frozen=True, eq=False)
class RuleSet:
    scheme_id: str
    rules: tuple[RewriteRule, ...]
    invertible: bool
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for rule in self.rules:
            self._index.setdefault(rule.match[0], []).append(rule)

    def __len__(self) -> int:
        return len(self.rules)

    def candidates(self, ch: str) -> list[RewriteRule]:
        return self._index.get(ch, [])


_ESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)")
_SIMPLE_ESCAPES = {"s": " ", "b": SOFT_SPACE, "|": "|", "#": "#", "\\": "\\", "@": "@", "-": "-", ">": ">"}
_RULE = re.compile(r"^(?P<lhs>.*?)\s*->(?P<rhs>.*?)(?:\s+@(?P<prio>[-+]?\d+))?\s*$")
_VARIABLE = re.compile(r"^\$(?P<name>\w+)\s*=\s*(?P<cls>\[.*\])\s*$")


def _unescape(token: str, line_number: int) -> str:
    if "\\" not in token:
        return token

    def sub(m: re.Match) -> str:
        esc = m.group(1)
        if len(esc) > 1:
            return chr(int(esc[1:], 16))
        if esc in _SIMPLE_ESCAPES:
            return _SIMPLE_ESCAPES[esc]
        raise RuleSyntaxError(line_number, f"unknown escape \\{esc}")

    return _ESCAPE.sub(sub, token)


def _strip_comment(line: str) -> str:
    if "#" not in line:
        return line.strip()
    out = []
    i = 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and i + 1 < len(line):
            out.append(line[i : i + 2])
            i += 2
            continue
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            break
        out.append(ch)
        i += 1
    return "".join(out).strip()


def _split_fields(lhs: str) -> list[str]:
    if "|" not in lhs:
        return [lhs.strip()]
    parts, buf, i = [], [], 0
    while i < len(lhs):
        if lhs[i] == "\\" and i + 1 < len(lhs):
            buf.append(lhs[i : i + 2])
            i += 2
            continue
        if lhs[i] == "|":
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(lhs[i])
        i += 1
    parts.append("".join(buf).strip())
    return parts


def _context(token: str, variables: dict[str, str], line_number: int) -> tuple[str, re.Pattern | None]:
    if not token:
        return "", None
    if token.startswith("$"):
        if token[1:] not in variables:
            raise RuleSyntaxError(line_number, f"undefined class {token}")
        token = variables[token[1:]]
    if not (token.startswith("[") and token.endswith("]")):
        raise RuleSyntaxError(line_number, f"context must be a [class] or $name, got {token!r}")
    try:
        return token, re.compile(_unescape(token, line_number))
    except re.error as exc:
        raise RuleSyntaxError(line_number, f"bad character class {token!r}: {exc}") from None


def compile_ruleset(source: str, scheme_id: str = "CUSTOM") -> RuleSet:
    """Parse rule-file text into a :class:`RuleSet`.

    Rules are ordered by priority (high first), then match length (long
    first), then file order. ``invertible`` is set when the replacements are
    pairwise distinct and prefix-free at grapheme level.
    """
    variables: dict[str, str] = {}
    rules: list[RewriteRule] = []
    seen: dict[tuple, int] = {}
    for line_number, raw in enumerate(source.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if m := _VARIABLE.match(line):
            variables[m.group("name")] = m.group("cls")
            continue
        m = _RULE.match(line)
        if m is None:
            raise RuleSyntaxError(line_number, f"expected 'match -> replacement', got {raw.strip()!r}")
        fields = _split_fields(m.group("lhs"))
        if len(fields) == 1:
            pre_tok, match_tok, post_tok = "", fields[0], ""
        elif len(fields) == 3:
            pre_tok, match_tok, post_tok = fields
        else:
            raise RuleSyntaxError(line_number, "expected 'pre | match | post' on the left-hand side")
        match = unicodedata.normalize("NFC", _unescape(match_tok, line_number))
        if not match:
            raise RuleSyntaxError(line_number, "empty match")
        replacement = _unescape(m.group("rhs").strip(), line_number)
        priority = int(m.group("prio")) if m.group("prio") else 0
        pre, pre_re = _context(pre_tok, variables, line_number)
        post, post_re = _context(post_tok, variables, line_number)
        key = (pre, match, post, priority)
        if key in seen:
            raise RuleSyntaxError(
                line_number, f"duplicate rule for {match!r} at priority {priority} (first on line {seen[key]})"
            )
        seen[key] = line_number
        rules.append(RewriteRule(match, replacement, pre, post, priority, len(rules), pre_re, post_re))
    if not rules:
        raise RuleSyntaxError(0, "empty ruleset")
    rules.sort(key=lambda r: (-r.priority, -len(r.match), r.order))
    return RuleSet(scheme_id, tuple(rules), _is_invertible(rules))


def graphemes(text: str) -> list[str]:
    """Split into base characters with their trailing combining marks."""
    out: list[str] = []
    for ch in text:
        if out and unicodedata.combining(ch) and out[-1] != SOFT_SPACE:
            out[-1] += ch
        else:
            out.append(ch)
    return out


def _is_invertible(rules: list[RewriteRule]) -> bool:
    images = set()
    for rule in rules:
        image = tuple(graphemes(unicodedata.normalize("NFC", rule.replacement)))
        if not image or image in images:
            return False
        images.add(image)
    for image in images:
        for k in range(1, len(image)):
            if image[:k] in images:
                return False
    return True


def apply_raw(rs: RuleSet, text: str) -> str:
    """One left-to-right pass; soft spaces are left unresolved."""
    out: list[str] = []
    pos = 0
    n = len(text)
    while pos < n:
        for rule in rs.candidates(text[pos]):
            if rule.fits(text, pos):
                out.append(rule.replacement)
                pos += len(rule.match)
                break
        else:
            out.append(text[pos])
            pos += 1
    return "".join(out)


def resolve_soft_spaces(text: str) -> str:
    if SOFT_SPACE not in text:
        return text
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch != SOFT_SPACE:
            out.append(ch)
            i += 1
            continue
        while i < n and text[i] == SOFT_SPACE:
            i += 1
        prev = out[-1] if out else ""
        nxt = text[i] if i < n else ""
        if prev and nxt and not prev.isspace() and not nxt.isspace() and nxt not in _CLOSING:
            out.append(" ")
    return "".join(out)


def apply_ruleset(rs: RuleSet, text: str) -> str:
    """Rewrite ``text`` (expected NFKC) with ``rs``; the result is NFC."""
    return unicodedata.normalize("NFC", resolve_soft_spaces(apply_raw(rs, text)))


def invert_ruleset(rs: RuleSet, text: str) -> str:
    """Map text produced by an invertible, context-free rule set back to its source.

    Latin-looking letters outside the rule set's image raise
    :class:`InversionError`; everything else passes through.
    """
    if not rs.invertible:
        raise ValueError(f"rule set {rs.scheme_id} is not invertible")
    inverse: dict[tuple[str, ...], str] = {}
    for rule in rs.rules:
        if rule.pre_context or rule.post_context:
            raise ValueError(f"rule set {rs.scheme_id} has contextual rules and cannot be inverted")
        inverse[tuple(graphemes(unicodedata.normalize("NFC", rule.replacement)))] = rule.match
    longest = max(len(k) for k in inverse)
    units = graphemes(unicodedata.normalize("NFC", text))
    out: list[str] = []
    i = offset = 0
    while i < len(units):
        for k in range(min(longest, len(units) - i), 0, -1):
            source = inverse.get(tuple(units[i : i + k]))
            if source is not None:
                out.append(source)
                width = sum(len(u) for u in units[i : i + k])
                i += k
                offset += width
                break
        else:
            unit = units[i]
            if _is_latin_letter(unit[0]):
                raise InversionError(offset, offset + len(unit), unit)
            out.append(unit)
            offset += len(unit)
            i += 1
    return "".join(out)


def _is_latin_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L") and ("LATIN" in unicodedata.name(ch, "") or ch.isascii())
