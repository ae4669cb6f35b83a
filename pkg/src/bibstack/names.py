"""Author-list splitting, name decomposition, and format-template rendering.

A name list separates individual names with the word "and" at brace depth
zero.  A single name takes one of three forms selected by its depth-zero
comma count:

    First von Last
    von Last, First
    von Last, Suffix, First

The von part is the span from the first to the last lowercase-initial
word strictly before the final word; a brace-group token counts as
uppercase-initial.  Templates are sequences of pieces such as {ff} or
{l.}: a doubled letter renders the full part, a single letter abbreviates
each token to its first character, and any trailing characters in the
piece are a literal suffix appended when the part is non-empty.
"""

from __future__ import annotations

from dataclasses import dataclass


class NameParseError(ValueError):
    pass


class TemplateError(ValueError):
    pass


@dataclass
class NameParts:
    first: list[str]
    von: list[str]
    last: list[str]
    jr: list[str]


@dataclass
class TemplatePiece:
    part: str  # one of f, v, l, j
    full: bool
    suffix: str


def split_names(author: str) -> list[str]:
    """Split a name list on the word "and" at brace depth zero."""
    words = _words(author)
    if not words:
        return []
    names: list[str] = []
    current: list[str] = []
    for w in words:
        if w == "and":
            names.append(" ".join(current))
            current = []
        else:
            current.append(w)
    names.append(" ".join(current))
    return names


def count_names(author: str) -> int:
    """Number of names in a list; the empty list counts zero."""
    return len(split_names(author))


def parse_name(name: str) -> NameParts:
    sections = _split_commas(name)
    if len(sections) > 3:
        raise NameParseError(f"too many commas in name {name!r}")
    word_sections = [_words(s) for s in sections]
    if not any(word_sections):
        raise NameParseError(f"name {name!r} is empty")

    if len(word_sections) == 1:
        before, von, last = _von_split(word_sections[0])
        return NameParts(first=before, von=von, last=last, jr=[])

    pre = word_sections[0]
    if not pre:
        raise NameParseError(f"missing last name before the comma in {name!r}")
    before, von, last = _von_split(pre)
    # words ahead of the von span have nowhere else to go in comma forms
    last = before + last
    first = word_sections[-1]
    jr = word_sections[1] if len(word_sections) == 3 else []
    return NameParts(first=first, von=von, last=last, jr=jr)


def format_name(name: str, template: str) -> str:
    parts = parse_name(name)
    by_letter = {"f": parts.first, "v": parts.von, "l": parts.last, "j": parts.jr}
    out = []
    for piece in parse_template(template):
        tokens = by_letter[piece.part]
        if not tokens:
            continue
        if piece.full:
            text = " ".join(tokens)
        else:
            text = ". ".join(_initial(t) for t in tokens)
        out.append(text + piece.suffix)
    return "".join(out)


def parse_template(template: str) -> list[TemplatePiece]:
    pieces = []
    i, n = 0, len(template)
    while i < n:
        if template[i] != "{":
            raise TemplateError(f"unexpected text outside a {{}} piece: {template[i:]!r}")
        j = template.find("}", i + 1)
        if j < 0:
            raise TemplateError(f"unclosed {{ in template {template!r}")
        body = template[i + 1 : j]
        if "{" in body:
            raise TemplateError(f"nested braces are not allowed in a piece: {{{body}}}")
        if not body or body[0] not in "fvlj":
            raise TemplateError(f"piece must start with one of f, v, l, j: {{{body}}}")
        letter = body[0]
        k = 1
        full = False
        if k < len(body) and body[k] == letter:
            full = True
            k += 1
        if k < len(body) and body[k] == letter:
            raise TemplateError(f"tripled piece letter: {{{body}}}")
        pieces.append(TemplatePiece(letter, full, body[k:]))
        i = j + 1
    return pieces


def _initial(token: str) -> str:
    # for a brace group, the first character after the brace
    if token.startswith("{"):
        return token[1:2]
    return token[0]


def _is_von_word(token: str) -> bool:
    return not token.startswith("{") and token[0].islower()


def _von_split(words: list[str]) -> tuple[list[str], list[str], list[str]]:
    """Split into (words-before-von, von, last); last holds at least the final word."""
    if not words:
        return [], [], []
    candidates = [i for i, w in enumerate(words[:-1]) if _is_von_word(w)]
    if not candidates:
        return words[:-1], [], words[-1:]
    v0, v1 = candidates[0], candidates[-1]
    return words[:v0], words[v0 : v1 + 1], words[v1 + 1 :]


def _words(s: str) -> list[str]:
    words: list[str] = []
    buf: list[str] = []
    depth = 0
    for ch in s:
        if ch == "{":
            depth += 1
            buf.append(ch)
        elif ch == "}":
            depth = max(0, depth - 1)
            buf.append(ch)
        elif ch.isspace() and depth == 0:
            if buf:
                words.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        words.append("".join(buf))
    return words


def _split_commas(s: str) -> list[str]:
    sections: list[str] = []
    buf: list[str] = []
    depth = 0
    for ch in s:
        if ch == "{":
            depth += 1
            buf.append(ch)
        elif ch == "}":
            depth = max(0, depth - 1)
            buf.append(ch)
        elif ch == "," and depth == 0:
            sections.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    sections.append("".join(buf))
    return sections
