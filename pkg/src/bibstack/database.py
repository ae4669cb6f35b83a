"""Parsing of .bib database files into an ordered, key-indexed collection.

Entry types and field names are case-insensitive and stored lowercase;
citation keys are matched verbatim.  Field values accept both "..." and
{...} delimiters, may span lines, and are whitespace-normalized.  The
@string/@preamble/@comment constructs and `#` concatenation are rejected
with a warning diagnostic and the offending block is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import ERROR, WARNING, Diagnostic

_KEY_FORBIDDEN = set(" \t\n,{}")


def normalize_value(raw: str) -> str:
    """Trim and collapse whitespace runs (line breaks included) to single spaces."""
    return " ".join(raw.split())


@dataclass
class Entry:
    key: str
    entry_type: str
    fields: dict[str, str] = field(default_factory=dict)


@dataclass
class Database:
    entries: list[Entry] = field(default_factory=list)
    index: dict[str, int] = field(default_factory=dict)

    def add(self, entry: Entry) -> bool:
        """Append an entry; returns False (and stores nothing) on a duplicate key."""
        if entry.key in self.index:
            return False
        self.index[entry.key] = len(self.entries)
        self.entries.append(entry)
        return True


def lookup(db: Database, key: str) -> Entry | None:
    """Exact, case-sensitive key lookup; absence is a value, not an error."""
    pos = db.index.get(key)
    return db.entries[pos] if pos is not None else None


def get_field(entry: Entry, name: str) -> str | None:
    """Field value, or None when the field does not appear in the entry."""
    return entry.fields.get(name.lower())


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos]

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
        return ch

    def skip_ws(self) -> None:
        while not self.eof() and self.text[self.pos].isspace():
            self.advance()


class _EntryError(Exception):
    """Internal: abandon the current entry and resync at the next `@`."""

    def __init__(self, severity: str, message: str):
        self.severity = severity
        self.message = message


def parse_bib(text: str, source_name: str = "<bib>") -> tuple[Database, list[Diagnostic]]:
    """Parse .bib source text.

    Every syntactically valid entry becomes an Entry; text outside entries
    is ignored.  Broken entries are skipped with a diagnostic and parsing
    resumes at the next `@`.
    """
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    cur = _Cursor(text)
    db = Database()
    diags: list[Diagnostic] = []

    def diag(severity: str, message: str, line: int | None = None) -> None:
        diags.append(Diagnostic(severity, message, line if line is not None else cur.line, source_name))

    while True:
        while not cur.eof() and cur.peek() != "@":
            cur.advance()
        if cur.eof():
            break
        cur.advance()  # @
        try:
            _parse_entry(cur, db, diag)
        except _EntryError as err:
            diag(err.severity, err.message)
            _resync(cur)
    return db, diags


def _resync(cur: _Cursor) -> None:
    while not cur.eof() and cur.peek() != "@":
        cur.advance()


def _parse_entry(cur: _Cursor, db: Database, diag) -> None:
    cur.skip_ws()
    etype = _read_word(cur, stop="{(, \t\n")
    if not etype:
        raise _EntryError(ERROR, "expected an entry type after `@'")
    etype = etype.lower()
    if etype in ("string", "preamble", "comment"):
        _skip_block(cur)
        raise _EntryError(WARNING, f"`@{etype}' is not supported; block skipped")
    cur.skip_ws()
    if cur.eof() or cur.peek() != "{":
        raise _EntryError(ERROR, f"expected `{{' after `@{etype}'")
    cur.advance()

    cur.skip_ws()
    key = _read_word(cur, stop=",}")
    key = key.strip()
    if not key or any(c in _KEY_FORBIDDEN for c in key):
        raise _EntryError(ERROR, f"invalid entry key {key!r}")
    entry = Entry(key=key, entry_type=etype)

    while True:
        cur.skip_ws()
        if cur.eof():
            raise _EntryError(ERROR, f"unexpected end of file inside entry `{key}'")
        ch = cur.peek()
        if ch == "}":
            cur.advance()
            break
        if ch == ",":
            cur.advance()
            continue
        name = _read_word(cur, stop="=,{}\"").strip().lower()
        if not name:
            raise _EntryError(ERROR, f"expected a field name in entry `{key}'")
        cur.skip_ws()
        if cur.eof() or cur.peek() != "=":
            raise _EntryError(ERROR, f"expected `=' after field `{name}' in entry `{key}'")
        cur.advance()
        cur.skip_ws()
        value = _read_value(cur, name, key)
        cur.skip_ws()
        if not cur.eof() and cur.peek() == "#":
            raise _EntryError(WARNING, f"string concatenation with `#' is not supported; entry `{key}' skipped")
        if name in entry.fields:
            diag(WARNING, f"duplicate field `{name}' in entry `{key}'; first value kept")
        else:
            entry.fields[name] = normalize_value(value)

    if not db.add(entry):
        diag(WARNING, f"duplicate entry key `{key}'; later entry dropped")


def _read_word(cur: _Cursor, stop: str) -> str:
    out = []
    while not cur.eof():
        ch = cur.peek()
        if ch in stop or ch.isspace():
            break
        out.append(cur.advance())
    return "".join(out)


def _read_value(cur: _Cursor, field_name: str, key: str) -> str:
    if cur.eof():
        raise _EntryError(ERROR, f"missing value for field `{field_name}' in entry `{key}'")
    ch = cur.peek()
    if ch == '"':
        cur.advance()
        out = []
        depth = 0
        while not cur.eof():
            c = cur.advance()
            if c == "{":
                depth += 1
            elif c == "}":
                if depth == 0:
                    raise _EntryError(ERROR, f"unbalanced braces in value of `{field_name}'; entry `{key}' skipped")
                depth -= 1
            elif c == '"' and depth == 0:
                return "".join(out)
            out.append(c)
        raise _EntryError(ERROR, f"unterminated value of `{field_name}'; entry `{key}' skipped")
    if ch == "{":
        cur.advance()
        out = []
        depth = 1
        while not cur.eof():
            c = cur.advance()
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    return "".join(out)
            out.append(c)
        raise _EntryError(ERROR, f"unterminated value of `{field_name}'; entry `{key}' skipped")
    if ch.isdigit():
        # bare digit runs need no delimiter
        return _read_word(cur, stop=",}#")
    word = _read_word(cur, stop=",}#") or ch
    raise _EntryError(WARNING, f"unquoted value `{word}' (macros are not supported); entry `{key}' skipped")


def _skip_block(cur: _Cursor) -> None:
    """Skip a balanced {...} group if one follows; used for @string and friends."""
    cur.skip_ws()
    if cur.eof() or cur.peek() != "{":
        return
    depth = 0
    while not cur.eof():
        c = cur.advance()
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return
