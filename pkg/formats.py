"""
formats.py — Text formats for elements.

Portrait files list the root image and the stored (parent-relative) local
permutations, one vertex per line:

    # rotation at x0, then a correction below 1
    root: -
    degree: 3
    -: (1 2 3)
    1: (2 3)

Line-element files describe a periodic translation:

    degree: 4
    line: 1213
    base: -
    shift: 2
    perm[0]: (2 4 3)
    ...

`#` starts a comment; blank lines are ignored. Every error is a ParseError
carrying the line and column of the offending token.
"""

import logging
import re
from typing import Optional, Union

from config import MIN_TREE_DEGREE
from element import LineElement, Portrait
from errors import ArboruError, ParseError
from permgroup import Perm
from tree import ROOT, Word, format_word, parse_word

logger = logging.getLogger(__name__)

_PERM_KEY = re.compile(r"perm\[(\d+)\]$")


# ─── Tokenizing ──────────────────────────────────────────────────────────────

def _entries(text: str) -> list[tuple[int, str, str, int]]:
    """
    Split into (line number, key, value, value column) entries; the key is
    everything before the first ":", unstripped so vertex columns stay exact.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        if ":" not in body:
            col = len(raw) - len(raw.lstrip()) + 1
            raise ParseError("expected '<key>: <value>'", lineno, col)
        key, _, value = body.partition(":")
        out.append((lineno, key, value, len(key) + 2))
    return out


def _value_offset(value: str) -> int:
    return len(value) - len(value.lstrip())


def _parse_int(value: str, lineno: int, col: int, what: str) -> int:
    token = value.strip()
    if not token.lstrip("-").isdigit():
        raise ParseError(f"bad {what} {token!r}", lineno, col + _value_offset(value))
    return int(token)


def _parse_perm(value: str, degree: int, lineno: int, col: int) -> Perm:
    try:
        return Perm.parse(value, degree)
    except ParseError as e:
        raise e.shifted(lineno, col - 1)


def _parse_vertex(text: str, degree: int, lineno: int, col: int) -> Word:
    try:
        return parse_word(text, degree)
    except ParseError as e:
        raise e.shifted(lineno, col - 1)


def _word_colors(text: str) -> list[int]:
    if "," in text:
        return [int(tok) for tok in re.findall(r"\d+", text)]
    return [int(ch) for ch in text if ch.isdigit()]


def _infer_degree(entries: list[tuple[int, str, str, int]]) -> int:
    """Largest color or point mentioned, at least 3."""
    seen = [MIN_TREE_DEGREE]
    for _, key, value, _ in entries:
        key = key.strip()
        if key in ("root", "line", "base"):
            seen.extend(_word_colors(value))
        elif _PERM_KEY.match(key):
            seen.extend(int(tok) for tok in re.findall(r"\d+", value))
        elif key != "shift":
            seen.extend(_word_colors(key))
            seen.extend(int(tok) for tok in re.findall(r"\d+", value))
    return max(seen)


def _degree(entries: list[tuple[int, str, str, int]], degree: Optional[int]) -> int:
    for lineno, key, value, col in entries:
        if key.strip() == "degree":
            declared = _parse_int(value, lineno, col, "degree")
            if degree is not None and declared != degree:
                raise ParseError(f"degree {declared} conflicts with expected {degree}", lineno, col)
            return declared
    if degree is not None:
        return degree
    inferred = _infer_degree(entries)
    logger.debug(f"no degree line; inferred degree {inferred}")
    return inferred


# ─── Portraits ───────────────────────────────────────────────────────────────

def parse_portrait(text: str, degree: Optional[int] = None, source: Optional[str] = None) -> Portrait:
    """
    Parse the portrait format. `degree` is used when the text has no
    `degree:` line; without either, the largest color mentioned (at least 3).

    Raises:
        ParseError: bad words, bad cycles, a repeated vertex, or locals that
            do not fix the incoming color.
    """
    try:
        entries = _entries(text)
        d = _degree(entries, degree)
        root: Word = ROOT
        root_line: Optional[int] = None
        locals_: dict[Word, Perm] = {}
        first_line: dict[Word, int] = {}
        for lineno, raw_key, value, col in entries:
            key = raw_key.strip()
            if key == "degree":
                continue
            if key == "root":
                if root_line is not None:
                    raise ParseError(f"root given twice (first on line {root_line})", lineno, 1)
                root = _parse_vertex(value, d, lineno, col)
                root_line = lineno
                continue
            if key in ("line", "shift", "base") or _PERM_KEY.match(key):
                raise ParseError(f"line-element key {key!r} in a portrait", lineno, 1)
            v = _parse_vertex(raw_key, d, lineno, 1)
            if v in locals_:
                raise ParseError(f"vertex {format_word(v)} repeated (first on line {first_line[v]})", lineno, 1)
            sigma = _parse_perm(value, d, lineno, col)
            if v and sigma(v[-1]) != v[-1]:
                raise ParseError(
                    f"local {sigma} at {format_word(v)} must fix the incoming color {v[-1]}",
                    lineno,
                    col + _value_offset(value),
                )
            locals_[v] = sigma
            first_line[v] = lineno
        return Portrait(d, root, locals_)
    except ParseError as e:
        if source and not e.source:
            e = ParseError(e.message, e.line, e.column, source)
        raise e
    except ArboruError as e:
        raise ParseError(str(e), 1, 1, source) from e


def print_portrait(g: Portrait) -> str:
    """Canonical text: root, degree, then stored locals in shortlex order."""
    lines = [f"root: {format_word(g.root_image)}", f"degree: {g.degree}"]
    for v in g.support:
        lines.append(f"{format_word(v)}: {g.locals[v].cycles()}")
    return "\n".join(lines) + "\n"


# ─── Line Elements ───────────────────────────────────────────────────────────

def parse_line_element(text: str, degree: Optional[int] = None, source: Optional[str] = None) -> LineElement:
    """
    Parse the line-element format. `line`, `shift` and one `perm[i]` for
    every index of the period are required; `base` defaults to x0.
    """
    try:
        entries = _entries(text)
        d = _degree(entries, degree)
        colors: Optional[Word] = None
        shift: Optional[int] = None
        base: Word = ROOT
        perms: dict[int, Perm] = {}
        last_line = 1
        for lineno, raw_key, value, col in entries:
            key = raw_key.strip()
            last_line = lineno
            if key == "degree":
                continue
            if key == "line":
                colors = _parse_vertex(value, d, lineno, col)
            elif key == "shift":
                shift = _parse_int(value, lineno, col, "shift")
            elif key == "base":
                base = _parse_vertex(value, d, lineno, col)
            elif (m := _PERM_KEY.match(key)) is not None:
                index = int(m.group(1))
                if index in perms:
                    raise ParseError(f"perm[{index}] given twice", lineno, 1)
                perms[index] = _parse_perm(value, d, lineno, col)
            else:
                raise ParseError(f"unknown key {key!r}", lineno, 1)
        if colors is None:
            raise ParseError("missing 'line:' entry", last_line, 1)
        if shift is None:
            raise ParseError("missing 'shift:' entry", last_line, 1)
        missing = [i for i in range(len(colors)) if i not in perms]
        if missing or len(perms) != len(colors):
            raise ParseError(
                f"need perm[0]..perm[{len(colors) - 1}], got {sorted(perms)}", last_line, 1
            )
        return LineElement(d, colors, tuple(perms[i] for i in range(len(colors))), shift, base)
    except ParseError as e:
        if source and not e.source:
            e = ParseError(e.message, e.line, e.column, source)
        raise e
    except ArboruError as e:
        raise ParseError(str(e), 1, 1, source) from e


def print_line_element(h: LineElement) -> str:
    lines = [
        f"degree: {h.degree}",
        f"line: {format_word(h.period_colors)}",
        f"base: {format_word(h.base)}",
        f"shift: {h.shift}",
    ]
    lines.extend(f"perm[{i}]: {sigma.cycles()}" for i, sigma in enumerate(h.period_perms))
    return "\n".join(lines) + "\n"


# ─── Dispatch ────────────────────────────────────────────────────────────────

def is_line_element_text(text: str) -> bool:
    return any(
        line.split("#", 1)[0].strip().startswith("line:") for line in text.splitlines()
    )


def parse_element(
    text: str, degree: Optional[int] = None, source: Optional[str] = None
) -> Union[Portrait, LineElement]:
    if is_line_element_text(text):
        return parse_line_element(text, degree, source)
    return parse_portrait(text, degree, source)


def print_element(g: Union[Portrait, LineElement]) -> str:
    if isinstance(g, LineElement):
        return print_line_element(g)
    return print_portrait(g)


def read_element(path: str, degree: Optional[int] = None) -> Union[Portrait, LineElement]:
    with open(path, "r") as f:
        return parse_element(f.read(), degree, source=path)
