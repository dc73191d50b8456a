"""Declarative splitting/cleaning rules for phrase extraction.

A :class:`RuleSet` is pure data: which characters separate phrases, which
boilerplate phrases get deleted, which tokens are stripped from phrase
edges, and a handful of flags. The shipped defaults live in
``data/default.rules`` and are a reconstruction, not a canon; edit the file
or load your own to change extraction behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cache, cached_property
from importlib import resources
from pathlib import Path

__all__ = ["RuleSet", "load_rules", "default_rules", "EMOJI_PATTERN"]

# Pictographic blocks treated as emoji: misc symbols, dingbats, supplemental
# arrows/symbols, the U+1Fxxx planes, plus ZWJ, keycap and variation selectors.
EMOJI_PATTERN = (
    "[‍⃣☀-➿⬀-⯿︎️"
    "\U0001f000-\U0001faff]"
)

# Characters that survive punctuation stripping when they sit inside a token
# ("she/her", "ny-14", "c#"); leading "#" is dropped with the token retained,
# and tokens starting with "@" are kept verbatim.
KEEP_PUNCT = frozenset("/-@#")

_ESCAPES = {
    "\\n": "\n",
    "\\r": "\r",
    "\\t": "\t",
    "\\\\": "\\",
    "\\#": "#",
}


def _unescape(token: str) -> str:
    """Decode the small escape language used by rules files."""
    out = []
    i = 0
    while i < len(token):
        ch = token[i]
        if ch == "\\" and i + 1 < len(token):
            pair = token[i : i + 2]
            if pair in _ESCAPES:
                out.append(_ESCAPES[pair])
                i += 2
                continue
            if pair == "\\u" and i + 6 <= len(token):
                out.append(chr(int(token[i + 2 : i + 6], 16)))
                i += 6
                continue
            if pair == "\\x" and i + 4 <= len(token):
                out.append(chr(int(token[i + 2 : i + 4], 16)))
                i += 4
                continue
        out.append(ch)
        i += 1
    return "".join(out)


@dataclass
class RuleSet:
    """Data-driven extraction rules.

    delimiters: tokens (single characters or short sequences) that split a
        bio into phrases.
    removals: phrases deleted where they occur at a phrase boundary.
    stopwords: tokens stripped from phrase edges.
    replacements: (regex pattern, substitute) pairs applied to each phrase.
    strip_punctuation: drop punctuation/symbol characters inside phrases.
    strip_emoji: treat emoji as delimiters and scrub any that remain.

    Treat instances as immutable once built; compiled patterns are cached.
    """

    delimiters: list[str] = field(default_factory=list)
    removals: list[str] = field(default_factory=list)
    stopwords: list[str] = field(default_factory=list)
    replacements: list[tuple[str, str]] = field(default_factory=list)
    strip_punctuation: bool = True
    strip_emoji: bool = True

    def __post_init__(self) -> None:
        if not self.delimiters:
            raise ValueError("rule set needs at least one delimiter")
        if any(d == "" for d in self.delimiters):
            raise ValueError("empty delimiter token")
        if any(r == "" for r in self.removals):
            raise ValueError("empty removal phrase")

    @cached_property
    def split_pattern(self) -> re.Pattern[str]:
        """Alternation over delimiters (longest first) plus emoji if enabled."""
        parts = [re.escape(d) for d in sorted(self.delimiters, key=len, reverse=True)]
        if self.strip_emoji:
            parts.append(EMOJI_PATTERN)
        return re.compile("|".join(parts))

    @cached_property
    def compiled_replacements(self) -> list[tuple[re.Pattern[str], str]]:
        return [(re.compile(pat), sub) for pat, sub in self.replacements]

    @cached_property
    def stopword_set(self) -> frozenset[str]:
        return frozenset(self.stopwords)

    @cached_property
    def removals_by_length(self) -> list[str]:
        return sorted(self.removals, key=len, reverse=True)

    @cached_property
    def delimiter_chars(self) -> frozenset[str]:
        return frozenset("".join(self.delimiters))


_SECTIONS = ("delimiters", "removals", "stopwords", "replacements", "flags")
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


def parse_rules(text: str, source: str = "<rules>") -> RuleSet:
    """Parse the rules file format (see README for the byte-level contract).

    Sections are introduced by ``[name]`` lines. Body lines are one token
    each; ``[replacements]`` lines are ``pattern => substitute``; ``[flags]``
    lines are ``key = value``. Blank lines and lines starting with ``#`` are
    ignored; write ``\\#`` for a literal leading hash.
    """
    sections: dict[str, list[str]] = {name: [] for name in _SECTIONS}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in sections:
                raise ValueError(f"{source}:{lineno}: unknown section [{name}]")
            current = name
            continue
        if current is None:
            raise ValueError(f"{source}:{lineno}: content before any section")
        sections[current].append(line)

    replacements: list[tuple[str, str]] = []
    for line in sections["replacements"]:
        if "=>" not in line:
            raise ValueError(f"{source}: replacement line needs ' => ': {line!r}")
        pat, _, sub = line.partition("=>")
        replacements.append((_unescape(pat.strip()), _unescape(sub.strip())))

    flags = {"strip_punctuation": True, "strip_emoji": True}
    for line in sections["flags"]:
        if "=" not in line:
            raise ValueError(f"{source}: flag line needs 'key = value': {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip().lower()
        if key not in flags:
            raise ValueError(f"{source}: unknown flag {key!r}")
        if value in _TRUE:
            flags[key] = True
        elif value in _FALSE:
            flags[key] = False
        else:
            raise ValueError(f"{source}: flag {key!r} has non-boolean value {value!r}")

    return RuleSet(
        delimiters=[_unescape(t) for t in sections["delimiters"]],
        removals=[_unescape(t).lower() for t in sections["removals"]],
        stopwords=[_unescape(t).lower() for t in sections["stopwords"]],
        replacements=replacements,
        **flags,
    )


def load_rules(path: str | Path) -> RuleSet:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), source=str(path))


@cache
def default_rules() -> RuleSet:
    """The shipped default rule set (parsed once from package data).

    The instance is shared; treat it as read-only and build your own
    RuleSet to customize.
    """
    text = resources.files("bioident").joinpath("data/default.rules").read_text("utf-8")
    return parse_rules(text, source="data/default.rules")
