"""Reading and writing the .aux handoff file.

Recognized commands are \\relax, \\citation, \\bibstyle, \\bibdata and
\\bibcite; anything else passes through untouched so the tool coexists
with other packages writing to the same file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class AuxError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class AuxFile:
    citations: list[str] = field(default_factory=list)
    style: str | None = None
    data: list[str] = field(default_factory=list)
    bibcites: dict[str, str] = field(default_factory=dict)
    raw_lines: list[str] = field(default_factory=list)


_RECOGNIZED = re.compile(r"\\(citation|bibstyle|bibdata|bibcite)(?![a-zA-Z])")
_CITATION = re.compile(r"\\citation\{([^{}]*)\}$")
_BIBSTYLE = re.compile(r"\\bibstyle\{([^{}]*)\}$")
_BIBDATA = re.compile(r"\\bibdata\{([^{}]*)\}$")
_BIBCITE = re.compile(r"\\bibcite\{([^{}]*)\}\{([^{}]*)\}$")


def parse_aux(text: str) -> AuxFile:
    """Parse .aux text; malformed recognized commands raise AuxError."""
    aux = AuxFile()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line == "\\relax":
            continue
        head = _RECOGNIZED.match(line)
        if head is None:
            aux.raw_lines.append(raw.rstrip("\r"))
            continue
        cmd = head.group(1)
        if cmd == "citation":
            m = _CITATION.match(line)
            if m is None:
                raise AuxError("malformed \\citation command", lineno)
            for key in m.group(1).split(","):
                key = key.strip()
                if not key:
                    raise AuxError("empty citation key", lineno)
                aux.citations.append(key)
        elif cmd == "bibstyle":
            m = _BIBSTYLE.match(line)
            if m is None:
                raise AuxError("malformed \\bibstyle command", lineno)
            aux.style = m.group(1).strip()
        elif cmd == "bibdata":
            m = _BIBDATA.match(line)
            if m is None:
                raise AuxError("malformed \\bibdata command", lineno)
            aux.data.extend(d.strip() for d in m.group(1).split(","))
        else:
            m = _BIBCITE.match(line)
            if m is None:
                raise AuxError("malformed \\bibcite command", lineno)
            key, label = m.group(1).strip(), m.group(2)
            if not label:
                raise AuxError("empty label in \\bibcite", lineno)
            aux.bibcites[key] = label
    return aux


def unique_citation_order(aux: AuxFile) -> list[str]:
    """Citation keys in first-occurrence order, duplicates removed."""
    return list(dict.fromkeys(aux.citations))


def write_aux(aux: AuxFile) -> str:
    """Serialize: \\relax, citations in order, style/data, bibcites, then pass-through lines."""
    lines = ["\\relax"]
    lines.extend(f"\\citation{{{key}}}" for key in aux.citations)
    if aux.style is not None:
        lines.append(f"\\bibstyle{{{aux.style}}}")
    if aux.data:
        lines.append(f"\\bibdata{{{','.join(aux.data)}}}")
    lines.extend(f"\\bibcite{{{key}}}{{{label}}}" for key, label in aux.bibcites.items())
    lines.extend(aux.raw_lines)
    return "\n".join(lines) + "\n"
