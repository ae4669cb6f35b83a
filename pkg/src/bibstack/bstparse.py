"""Tokenizer and top-level command parser for .bst style programs.

A program is a sequence of commands (ENTRY, FUNCTION, READ, EXECUTE,
ITERATE, SORT, STRINGS, INTEGERS) whose order is the execution order.
Function bodies are kept as token lists and interpreted by the vm module.
Identifiers are case-insensitive and normalized to lowercase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import ERROR, Diagnostic

IDENT_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.$-_:=<>+*"
)

KNOWN_BUILTINS = frozenset({
    "write$", "newline$", "cite$", "empty$", "skip$", "if$", "while$",
    "num.names$", "format.name$", "call.type$",
    "*", ":=", "=", "<", ">", "+", "-",
})

# Recognized names from full BibTeX that this interpreter deliberately
# does not provide; naming one is reported as such instead of "unknown".
UNSUPPORTED_BUILTINS = frozenset({
    "substring$", "change.case$", "purify$", "text.length$", "text.prefix$",
    "add.period$", "preamble$", "type$", "duplicate$", "pop$", "swap$",
    "stack$", "top$", "chr.to.int$", "int.to.str$", "width$", "warning$",
    "quote$", "global.max$", "entry.max$", "missing$",
})

_COMMAND_KEYWORDS = frozenset({
    "entry", "function", "read", "execute", "iterate", "sort",
    "strings", "integers",
})


@dataclass
class Token:
    kind: str  # string | int | id | quoted | block
    value: object  # str payload, int value, or nested token list
    line: int = 0


@dataclass
class BstCommand:
    kind: str
    operand: object = None
    line: int = 0


@dataclass
class BstProgram:
    commands: list[BstCommand] = field(default_factory=list)
    functions: dict[str, list[Token]] = field(default_factory=dict)
    source: str = "<bst>"


def parse_bst(text: str, source_name: str = "<bst>") -> tuple[BstProgram, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    tokens = _tokenize(text, source_name, diags)
    program = BstProgram(source=source_name)
    _parse_commands(tokens, program, source_name, diags)
    return program, diags


# ---------------------------------------------------------------------------
# tokenizer

def _tokenize(text: str, source: str, diags: list[Diagnostic]) -> list[Token]:
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    state = {"pos": 0, "line": 1}
    n = len(text)

    def err(message: str, fatal: bool = False) -> None:
        diags.append(Diagnostic(ERROR, message, state["line"], source, fatal=fatal))

    def scan(stop_at_close: bool) -> list[Token]:
        out: list[Token] = []
        while state["pos"] < n:
            ch = text[state["pos"]]
            if ch == "\n":
                state["line"] += 1
                state["pos"] += 1
            elif ch.isspace():
                state["pos"] += 1
            elif ch == "%":
                j = text.find("\n", state["pos"])
                state["pos"] = n if j < 0 else j
            elif ch == '"':
                out.append(_scan_string(text, state, err))
            elif ch == "#":
                tok = _scan_int(text, state, err)
                if tok is not None:
                    out.append(tok)
            elif ch == "'":
                line = state["line"]
                state["pos"] += 1
                name = _scan_ident(text, state)
                if name:
                    out.append(Token("quoted", name.lower(), line))
                else:
                    err("`'' must be followed by an identifier")
            elif ch == "{":
                line = state["line"]
                state["pos"] += 1
                body = scan(stop_at_close=True)
                out.append(Token("block", body, line))
            elif ch == "}":
                if stop_at_close:
                    state["pos"] += 1
                    return out
                err("unexpected `}'")
                state["pos"] += 1
            elif ch in IDENT_CHARS:
                line = state["line"]
                out.append(Token("id", _scan_ident(text, state).lower(), line))
            else:
                err(f"unexpected character {ch!r}")
                state["pos"] += 1
        if stop_at_close:
            err("unclosed `{' at end of file", fatal=True)
        return out

    return scan(stop_at_close=False)


def _scan_ident(text: str, state: dict) -> str:
    start = state["pos"]
    while state["pos"] < len(text) and text[state["pos"]] in IDENT_CHARS:
        state["pos"] += 1
    return text[start:state["pos"]]


def _scan_string(text: str, state: dict, err) -> Token:
    line = state["line"]
    state["pos"] += 1
    start = state["pos"]
    while state["pos"] < len(text):
        ch = text[state["pos"]]
        if ch == '"':
            value = text[start:state["pos"]]
            state["pos"] += 1
            return Token("string", value, line)
        if ch == "\n":
            err("string literal does not close before end of line")
            return Token("string", text[start:state["pos"]], line)
        state["pos"] += 1
    err("string literal does not close before end of file")
    return Token("string", text[start:], line)


def _scan_int(text: str, state: dict, err) -> Token | None:
    line = state["line"]
    state["pos"] += 1
    start = state["pos"]
    if state["pos"] < len(text) and text[state["pos"]] in "+-":
        state["pos"] += 1
    while state["pos"] < len(text) and text[state["pos"]].isdigit():
        state["pos"] += 1
    digits = text[start:state["pos"]]
    if not digits or digits in ("+", "-"):
        err("`#' must be followed by an integer literal")
        return None
    return Token("int", int(digits), line)


# ---------------------------------------------------------------------------
# command parser

def _parse_commands(tokens: list[Token], program: BstProgram, source: str,
                    diags: list[Diagnostic]) -> None:
    def err(message: str, line: int) -> None:
        diags.append(Diagnostic(ERROR, message, line, source))

    defined: set[str] = set()
    have_entry = False
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "block" and _is_bare_sort(tok):
            # `{SORT}` is accepted as a spelling of the bare SORT command
            program.commands.append(BstCommand("sort", line=tok.line))
            i += 1
            continue
        if tok.kind != "id":
            err(f"expected a command, got {_describe(tok)}", tok.line)
            i += 1
            continue
        kw = tok.value
        i += 1
        if kw == "entry":
            groups, i = _take_blocks(tokens, i, 3)
            if groups is None:
                err("ENTRY expects three {...} groups", tok.line)
                continue
            if have_entry:
                err("duplicate ENTRY command", tok.line)
                continue
            have_entry = True
            names = [_block_names(g, err) for g in groups]
            program.commands.append(BstCommand("entry", tuple(names), tok.line))
        elif kw == "function":
            groups, i = _take_blocks(tokens, i, 2)
            if groups is None:
                err("FUNCTION expects {name} {body}", tok.line)
                continue
            name = _single_name(groups[0])
            if name is None:
                err("FUNCTION name group must hold exactly one identifier", tok.line)
                continue
            if name in program.functions:
                err(f"function `{name}' is redefined; first definition kept", tok.line)
                continue
            program.functions[name] = groups[1].value
            defined.add(name)
            program.commands.append(BstCommand("function", name, tok.line))
        elif kw in ("execute", "iterate"):
            groups, i = _take_blocks(tokens, i, 1)
            if groups is None:
                err(f"{kw.upper()} expects a {{name}} group", tok.line)
                continue
            name = _single_name(groups[0])
            if name is None:
                err(f"{kw.upper()} target group must hold exactly one identifier", tok.line)
                continue
            if name not in defined and name not in KNOWN_BUILTINS:
                err(f"{kw.upper()} target `{name}' should be already described", tok.line)
                continue
            program.commands.append(BstCommand(kw, name, tok.line))
        elif kw in ("strings", "integers"):
            groups, i = _take_blocks(tokens, i, 1)
            if groups is None:
                err(f"{kw.upper()} expects a {{names}} group", tok.line)
                continue
            program.commands.append(BstCommand(kw, _block_names(groups[0], err), tok.line))
        elif kw == "read":
            program.commands.append(BstCommand("read", line=tok.line))
        elif kw == "sort":
            program.commands.append(BstCommand("sort", line=tok.line))
        elif kw in ("macro", "reverse"):
            err(f"unsupported command `{kw.upper()}'", tok.line)
            limit = 2 if kw == "macro" else 1
            taken = 0
            while i < len(tokens) and tokens[i].kind == "block" and taken < limit:
                i += 1
                taken += 1
        else:
            err(f"unknown command `{kw}'", tok.line)


def _take_blocks(tokens: list[Token], i: int, count: int):
    groups = []
    for _ in range(count):
        if i >= len(tokens) or tokens[i].kind != "block":
            return None, i
        groups.append(tokens[i])
        i += 1
    return groups, i


def _block_names(block: Token, err) -> list[str]:
    names = []
    for tok in block.value:
        if tok.kind == "id":
            names.append(tok.value)
        else:
            err(f"expected identifiers inside the group, got {_describe(tok)}", tok.line)
    return names


def _single_name(block: Token) -> str | None:
    body = block.value
    if len(body) == 1 and body[0].kind == "id":
        return body[0].value
    return None


def _is_bare_sort(tok: Token) -> bool:
    body = tok.value
    return len(body) == 1 and body[0].kind == "id" and body[0].value == "sort"


def _describe(tok: Token) -> str:
    if tok.kind == "block":
        return "a {...} group"
    if tok.kind == "string":
        return f'string "{tok.value}"'
    if tok.kind == "int":
        return f"integer #{tok.value}"
    if tok.kind == "quoted":
        return f"quoted identifier '{tok.value}"
    return f"`{tok.value}'"


# ---------------------------------------------------------------------------
# serialization (round-trip support and diagnostics)

def format_tokens(tokens: list[Token]) -> str:
    parts = []
    for tok in tokens:
        if tok.kind == "string":
            parts.append(f'"{tok.value}"')
        elif tok.kind == "int":
            parts.append(f"#{tok.value}")
        elif tok.kind == "quoted":
            parts.append(f"'{tok.value}")
        elif tok.kind == "block":
            parts.append("{ " + format_tokens(tok.value) + " }")
        else:
            parts.append(str(tok.value))
    return " ".join(parts)


def format_program(program: BstProgram) -> str:
    lines = []
    for cmd in program.commands:
        if cmd.kind == "entry":
            fields, ints, strs = cmd.operand
            lines.append(
                "ENTRY { %s } { %s } { %s }" % (" ".join(fields), " ".join(ints), " ".join(strs))
            )
        elif cmd.kind == "function":
            body = format_tokens(program.functions[cmd.operand])
            lines.append("FUNCTION { %s } { %s }" % (cmd.operand, body))
        elif cmd.kind in ("execute", "iterate"):
            lines.append("%s { %s }" % (cmd.kind.upper(), cmd.operand))
        elif cmd.kind in ("strings", "integers"):
            lines.append("%s { %s }" % (cmd.kind.upper(), " ".join(cmd.operand)))
        else:
            lines.append(cmd.kind.upper())
    return "\n".join(lines) + "\n"
