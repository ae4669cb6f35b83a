"""Stack-machine execution of style programs over citations and databases.

Values on the stack are plain Python ints and strs, plus two tagged
types: MissingField (an absent entry field) and FnRef (a quoted name or
a {...} block).  Execution order is program order: READ resolves the
deduplicated citation list against the databases, EXECUTE runs a
function with no current entry, ITERATE runs it once per entry, and
SORT stably reorders entries by their sort.key$ string.

Reading a declared field that an entry does not have pushes a
MissingField and logs the missing-field warning; write$ on such a value
logs the same warning and emits nothing.  The stack must be empty when
the last command finishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import names
from .auxfile import AuxFile, unique_citation_order
from .bstparse import KNOWN_BUILTINS, UNSUPPORTED_BUILTINS, BstProgram, Token
from .database import Database, lookup
from .emitter import BblDocument, BlgLog

DEFAULT_WHILE_LIMIT = 1_000_000


@dataclass
class MissingField:
    field_name: str
    entry_key: str


@dataclass
class FnRef:
    name: str | None = None
    body: list[Token] | None = None


@dataclass
class RuntimeEntry:
    key: str
    entry_type: str
    fields: dict[str, str]
    ints: dict[str, int] = field(default_factory=dict)
    strs: dict[str, str] = field(default_factory=dict)


class VmError(Exception):
    pass


def missing_field_message(field_name: str, entry_key: str) -> str:
    return f"`{field_name}' is a missing field, not a string, for entry {entry_key}"


class Vm:
    def __init__(self, program: BstProgram, databases: list[Database], *,
                 doc: BblDocument | None = None, log: BlgLog | None = None,
                 while_limit: int = DEFAULT_WHILE_LIMIT):
        self.program = program
        self.databases = databases
        self.doc = doc if doc is not None else BblDocument()
        self.log = log if log is not None else BlgLog()
        self.while_limit = while_limit
        self.stack: list = []
        self.field_names: list[str] = []
        self.entry_int_names: list[str] = []
        self.entry_str_names: list[str] = ["sort.key$"]
        self.globals_int: dict[str, int] = {}
        self.globals_str: dict[str, str] = {}
        self.entries: list[RuntimeEntry] = []
        self.current: RuntimeEntry | None = None

    # -- top level ----------------------------------------------------------

    def execute(self, aux: AuxFile) -> None:
        """Run all commands; errors are logged and abort the run."""
        try:
            for cmd in self.program.commands:
                self._exec_command(cmd, aux)
        except VmError as err:
            self.log.error(str(err))
            return
        except RecursionError:
            self.log.error("function call depth exceeded")
            return
        if self.stack:
            shown = ", ".join(self._show(v) for v in self.stack)
            self.log.error(f"stack not empty at end: [{shown}]")

    def _exec_command(self, cmd, aux: AuxFile) -> None:
        if cmd.kind == "entry":
            fields, ints, strs = cmd.operand
            self.field_names = list(fields)
            self.entry_int_names = list(ints)
            for name in strs:
                if name not in self.entry_str_names:
                    self.entry_str_names.append(name)
        elif cmd.kind == "strings":
            for name in cmd.operand:
                self.globals_str.setdefault(name, "")
        elif cmd.kind == "integers":
            for name in cmd.operand:
                self.globals_int.setdefault(name, 0)
        elif cmd.kind == "read":
            self._read(aux)
        elif cmd.kind == "execute":
            self.current = None
            self.exec_ident(cmd.operand, cmd.line)
        elif cmd.kind == "iterate":
            for entry in list(self.entries):
                self.current = entry
                self.exec_ident(cmd.operand, cmd.line)
            self.current = None
        elif cmd.kind == "sort":
            self.entries.sort(key=lambda e: e.strs["sort.key$"])
        # "function" commands have no runtime effect: bodies are bound at parse time

    def _read(self, aux: AuxFile) -> None:
        for key in unique_citation_order(aux):
            entry = None
            for db in self.databases:
                entry = lookup(db, key)
                if entry is not None:
                    break
            if entry is None:
                self.log.warning(f"no database entry for citation `{key}'")
                continue
            self.entries.append(RuntimeEntry(
                key=entry.key,
                entry_type=entry.entry_type,
                fields=entry.fields,
                ints={name: 0 for name in self.entry_int_names},
                strs={name: "" for name in self.entry_str_names},
            ))

    # -- token execution ----------------------------------------------------

    def exec_tokens(self, tokens: list[Token]) -> None:
        for tok in tokens:
            self.exec_token(tok)

    def exec_token(self, tok: Token) -> None:
        if tok.kind == "string":
            self.stack.append(tok.value)
        elif tok.kind == "int":
            self.stack.append(tok.value)
        elif tok.kind == "quoted":
            self.stack.append(FnRef(name=tok.value))
        elif tok.kind == "block":
            self.stack.append(FnRef(body=tok.value))
        else:
            self.exec_ident(tok.value, tok.line)

    def exec_ident(self, name: str, line: int) -> None:
        if name in self.field_names:
            entry = self._need_entry(name, line)
            value = entry.fields.get(name)
            if value is None:
                self.log.warning(missing_field_message(name, entry.key))
                self.stack.append(MissingField(name, entry.key))
            else:
                self.stack.append(value)
        elif name in self.entry_str_names:
            # .get: an ENTRY command after READ leaves older entries without storage
            self.stack.append(self._need_entry(name, line).strs.get(name, ""))
        elif name in self.entry_int_names:
            self.stack.append(self._need_entry(name, line).ints.get(name, 0))
        elif name in self.globals_str:
            self.stack.append(self.globals_str[name])
        elif name in self.globals_int:
            self.stack.append(self.globals_int[name])
        elif name in _BUILTINS:
            _BUILTINS[name](self, line)
        elif name in self.program.functions:
            self.exec_tokens(self.program.functions[name])
        elif name in UNSUPPORTED_BUILTINS:
            raise VmError(f"unsupported builtin `{name}' (line {line})")
        else:
            raise VmError(f"unknown identifier `{name}' (line {line})")

    def call_ref(self, ref: FnRef, line: int) -> None:
        if ref.body is not None:
            self.exec_tokens(ref.body)
        else:
            self.exec_ident(ref.name, line)

    # -- helpers ------------------------------------------------------------

    def _need_entry(self, name: str, line: int) -> RuntimeEntry:
        if self.current is None:
            raise VmError(f"`{name}' read outside ITERATE, no current entry (line {line})")
        return self.current

    def pop(self, who: str, line: int):
        if not self.stack:
            raise VmError(f"{who}: stack underflow (line {line})")
        return self.stack.pop()

    def pop_int(self, who: str, line: int) -> int:
        value = self.pop(who, line)
        if not isinstance(value, int):
            raise VmError(f"{who}: expected an integer, got {self._show(value)} (line {line})")
        return value

    def pop_str(self, who: str, line: int, *, coerce_missing: bool = True) -> str:
        value = self.pop(who, line)
        if isinstance(value, MissingField) and coerce_missing:
            return ""
        if not isinstance(value, str):
            raise VmError(f"{who}: expected a string, got {self._show(value)} (line {line})")
        return value

    def pop_ref(self, who: str, line: int) -> FnRef:
        value = self.pop(who, line)
        if not isinstance(value, FnRef):
            raise VmError(f"{who}: expected a function, got {self._show(value)} (line {line})")
        return value

    @staticmethod
    def _show(value) -> str:
        if isinstance(value, int):
            return str(value)
        if isinstance(value, str):
            return f'"{value}"'
        if isinstance(value, MissingField):
            return f"missing field `{value.field_name}'"
        if value.name is not None:
            return f"'{value.name}"
        return "{...}"


# ---------------------------------------------------------------------------
# builtins

def _bi_write(vm: Vm, line: int) -> None:
    value = vm.pop("write$", line)
    if isinstance(value, str):
        vm.doc.append(value)
    elif isinstance(value, MissingField):
        vm.log.warning(missing_field_message(value.field_name, value.entry_key))
    else:
        raise VmError(f"write$: expected a string, got {vm._show(value)} (line {line})")


def _bi_newline(vm: Vm, line: int) -> None:
    vm.doc.flush_line()


def _bi_cite(vm: Vm, line: int) -> None:
    vm.stack.append(vm._need_entry("cite$", line).key)


def _bi_empty(vm: Vm, line: int) -> None:
    value = vm.pop("empty$", line)
    if isinstance(value, MissingField):
        vm.stack.append(1)
    elif isinstance(value, str):
        vm.stack.append(1 if not value.strip() else 0)
    else:
        raise VmError(f"empty$: expected a string, got {vm._show(value)} (line {line})")


def _bi_skip(vm: Vm, line: int) -> None:
    pass


def _bi_if(vm: Vm, line: int) -> None:
    else_ref = vm.pop_ref("if$", line)
    then_ref = vm.pop_ref("if$", line)
    cond = vm.pop_int("if$", line)
    vm.call_ref(then_ref if cond > 0 else else_ref, line)


def _bi_while(vm: Vm, line: int) -> None:
    body = vm.pop_ref("while$", line)
    pred = vm.pop_ref("while$", line)
    for _ in range(vm.while_limit):
        vm.call_ref(pred, line)
        if vm.pop_int("while$", line) <= 0:
            return
        vm.call_ref(body, line)
    raise VmError(f"while$: iteration limit of {vm.while_limit} exceeded (line {line})")


def _bi_concat(vm: Vm, line: int) -> None:
    b = vm.pop_str("*", line)
    a = vm.pop_str("*", line)
    vm.stack.append(a + b)


def _bi_assign(vm: Vm, line: int) -> None:
    ref = vm.pop(":=", line)
    if not isinstance(ref, FnRef) or ref.name is None:
        raise VmError(f":=: expected a quoted variable name, got {vm._show(ref)} (line {line})")
    value = vm.pop(":=", line)
    name = ref.name
    if name in vm.field_names:
        raise VmError(f":=: cannot assign to field `{name}' (line {line})")
    if name in vm.entry_str_names:
        if vm.current is None:
            raise VmError(f":=: `{name}' assigned outside ITERATE (line {line})")
        vm.current.strs[name] = _as_str(value, name, line)
    elif name in vm.entry_int_names:
        if vm.current is None:
            raise VmError(f":=: `{name}' assigned outside ITERATE (line {line})")
        vm.current.ints[name] = _as_int(value, name, line, vm)
    elif name in vm.globals_str:
        vm.globals_str[name] = _as_str(value, name, line)
    elif name in vm.globals_int:
        vm.globals_int[name] = _as_int(value, name, line, vm)
    else:
        raise VmError(f":=: `{name}' is not a declared variable (line {line})")


def _as_str(value, name: str, line: int) -> str:
    if isinstance(value, MissingField):
        return ""
    if not isinstance(value, str):
        raise VmError(f":=: `{name}' is a string variable, got {Vm._show(value)} (line {line})")
    return value


def _as_int(value, name: str, line: int, vm: Vm) -> int:
    if not isinstance(value, int):
        raise VmError(f":=: `{name}' is an integer variable, got {vm._show(value)} (line {line})")
    return value


def _bi_num_names(vm: Vm, line: int) -> None:
    vm.stack.append(names.count_names(vm.pop_str("num.names$", line)))


def _bi_format_name(vm: Vm, line: int) -> None:
    template = vm.pop_str("format.name$", line)
    index = vm.pop_int("format.name$", line)
    name_list = vm.pop_str("format.name$", line)
    parts = names.split_names(name_list)
    if index < 1 or index > len(parts):
        where = f"entry {vm.current.key}" if vm.current is not None else f'"{name_list}"'
        raise VmError(
            f"format.name$: name index {index} out of range for {where} (line {line})"
        )
    try:
        vm.stack.append(names.format_name(parts[index - 1], template))
    except (names.NameParseError, names.TemplateError) as err:
        raise VmError(f"format.name$: {err} (line {line})") from err


def _bi_eq(vm: Vm, line: int) -> None:
    b = vm.pop("=", line)
    a = vm.pop("=", line)
    if isinstance(a, MissingField):
        a = ""
    if isinstance(b, MissingField):
        b = ""
    if isinstance(a, int) and isinstance(b, int):
        vm.stack.append(1 if a == b else 0)
    elif isinstance(a, str) and isinstance(b, str):
        vm.stack.append(1 if a == b else 0)
    else:
        raise VmError(
            f"=: operands must share a type, got {vm._show(a)} and {vm._show(b)} (line {line})"
        )


def _make_int_op(symbol: str, fn):
    def op(vm: Vm, line: int) -> None:
        b = vm.pop_int(symbol, line)
        a = vm.pop_int(symbol, line)
        vm.stack.append(fn(a, b))
    return op


def _bi_call_type(vm: Vm, line: int) -> None:
    entry = vm._need_entry("call.type$", line)
    body = vm.program.functions.get(entry.entry_type)
    if body is None:
        vm.log.warning(f"no handler function for entry type `{entry.entry_type}'")
        return
    vm.exec_tokens(body)


_BUILTINS = {
    "write$": _bi_write,
    "newline$": _bi_newline,
    "cite$": _bi_cite,
    "empty$": _bi_empty,
    "skip$": _bi_skip,
    "if$": _bi_if,
    "while$": _bi_while,
    "*": _bi_concat,
    ":=": _bi_assign,
    "num.names$": _bi_num_names,
    "format.name$": _bi_format_name,
    "=": _bi_eq,
    "<": _make_int_op("<", lambda a, b: 1 if a < b else 0),
    ">": _make_int_op(">", lambda a, b: 1 if a > b else 0),
    "+": _make_int_op("+", lambda a, b: a + b),
    "-": _make_int_op("-", lambda a, b: a - b),
    "call.type$": _bi_call_type,
}

assert set(_BUILTINS) == set(KNOWN_BUILTINS)


def run(program: BstProgram, aux: AuxFile, databases: list[Database], *,
        while_limit: int = DEFAULT_WHILE_LIMIT) -> tuple[BblDocument, BlgLog]:
    """Execute a parsed style program and return the document and run log."""
    vm = Vm(program, databases, while_limit=while_limit)
    vm.execute(aux)
    return vm.doc, vm.log
