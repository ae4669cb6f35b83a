"""Command-line front end tying the pipeline together.

Subcommands mirror the classical build protocol: `latexpass` simulates
one citation pass over <base>.tex, `bibtex` turns <base>.aux plus the
named style and databases into <base>.bbl/<base>.blg, `pipeline` chains
latexpass, bibtex, and further passes until the labels reach a fixpoint,
and `lint` runs the static checks over <base>.bst.

Exit codes: 0 success, 1 warnings under --strict, 2 errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .auxfile import AuxError, parse_aux, write_aux
from .bstparse import parse_bst
from .database import parse_bib
from .diagnostics import ERROR, WARNING, Diagnostic
from .emitter import BlgLog
from .latexpass import PassResult, TexScanError, run_pass, scan_tex
from .lint import lint_program
from .vm import run

_KNOWN_EXTENSIONS = (".tex", ".aux", ".bib", ".bst", ".bbl")


@dataclass
class CliConfig:
    base: str
    style_dir: Path | None = None
    bib_dir: Path | None = None
    max_passes: int = 5
    strict: bool = False


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.max_passes < 1:
        _err("--max-passes must be at least 1")
        return 2
    base = args.base
    for ext in _KNOWN_EXTENSIONS:
        if base.endswith(ext):
            base = base[: -len(ext)]
            break
    if not base:
        _err("BASE must not be empty")
        return 2
    cfg = CliConfig(base=base, style_dir=args.style_dir, bib_dir=args.bib_dir,
                    max_passes=args.max_passes, strict=args.strict)
    if args.command == "bibtex":
        return cmd_bibtex(cfg)
    if args.command == "latexpass":
        return cmd_latexpass(cfg)
    if args.command == "pipeline":
        return cmd_pipeline(cfg)
    return cmd_lint(cfg)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("base", help="file base name without extension")
    common.add_argument("--style-dir", type=Path, default=None,
                        help="extra directory searched for .bst files")
    common.add_argument("--bib-dir", type=Path, default=None,
                        help="extra directory searched for .bib files")
    common.add_argument("--max-passes", type=int, default=5,
                        help="cap on citation passes (default 5)")
    common.add_argument("--strict", action="store_true",
                        help="treat warnings as failures (exit 1)")
    parser = argparse.ArgumentParser(prog="bibstack",
                                     description="bibliography toolchain")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bibtex", parents=[common],
                   help="generate <base>.bbl and <base>.blg from <base>.aux")
    sub.add_parser("latexpass", parents=[common],
                   help="run one citation pass over <base>.tex")
    sub.add_parser("pipeline", parents=[common],
                   help="latexpass, bibtex, then passes until the labels settle")
    sub.add_parser("lint", parents=[common],
                   help="static checks over <base>.bst")
    return parser


# ---------------------------------------------------------------------------
# bibtex

def cmd_bibtex(cfg: CliConfig) -> int:
    aux_path = Path(cfg.base + ".aux")
    if not aux_path.exists():
        _err(f"no aux file {aux_path}")
        return 2
    try:
        aux = parse_aux(_read_text(aux_path))
    except (AuxError, _ReadError) as err:
        _err(f"{aux_path}: {err}")
        return 2
    if aux.style is None:
        _err(f"no style declared in {aux_path}")
        return 2
    if not aux.data:
        _err(f"no database declared in {aux_path}")
        return 2

    bst_path = _find_file(aux.style + ".bst", cfg.base, cfg.style_dir)
    if bst_path is None:
        _err(f"style file {aux.style}.bst not found in {_searched(cfg.base, cfg.style_dir)}")
        return 2
    diagnostics: list[Diagnostic] = []
    try:
        program, bst_diags = parse_bst(_read_text(bst_path), bst_path.name)
    except _ReadError as err:
        _err(f"{bst_path}: {err}")
        return 2
    diagnostics.extend(bst_diags)

    databases = []
    for data_name in aux.data:
        bib_path = _find_file(data_name + ".bib", cfg.base, cfg.bib_dir)
        if bib_path is None:
            _err(f"database file {data_name}.bib not found in {_searched(cfg.base, cfg.bib_dir)}")
            return 2
        try:
            db, bib_diags = parse_bib(_read_text(bib_path), bib_path.name)
        except _ReadError as err:
            _err(f"{bib_path}: {err}")
            return 2
        diagnostics.extend(bib_diags)
        databases.append(db)

    log = BlgLog()
    fatal = any(d.fatal for d in diagnostics)
    if not fatal:
        doc, log = run(program, aux, databases)
        _atomic_write(Path(cfg.base + ".bbl"), doc.finalize())
    _atomic_write(Path(cfg.base + ".blg"), _render_blg(diagnostics, log))

    for diag in diagnostics:
        _err(diag.format())
    for severity, message in log.records:
        _err(message if severity == ERROR else f"warning: {message}")

    n_errors = sum(1 for d in diagnostics if d.severity == ERROR) + len(log.errors())
    n_warnings = sum(1 for d in diagnostics if d.severity == WARNING) + len(log.warnings())
    if not fatal:
        print(f"{cfg.base}: wrote {cfg.base}.bbl ({n_warnings} warning(s), {n_errors} error(s))")
    if n_errors:
        return 2
    if cfg.strict and n_warnings:
        return 1
    return 0


def _render_blg(diagnostics: list[Diagnostic], log: BlgLog) -> str:
    lines = []
    for diag in diagnostics:
        if diag.severity == WARNING:
            lines.append(f"Warning--{diag.format()}")
        else:
            lines.append(diag.format())
    for severity, message in log.records:
        lines.append(f"Warning--{message}" if severity == WARNING else message)
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# latexpass

def cmd_latexpass(cfg: CliConfig) -> int:
    rc, _result = _do_latexpass(cfg)
    return rc


def _do_latexpass(cfg: CliConfig) -> tuple[int, PassResult | None]:
    tex_path = Path(cfg.base + ".tex")
    if not tex_path.exists():
        _err(f"no tex file {tex_path}")
        return 2, None
    try:
        tex = scan_tex(_read_text(tex_path))
    except (TexScanError, _ReadError) as err:
        _err(f"{tex_path}: {err}")
        return 2, None

    aux_path = Path(cfg.base + ".aux")
    old_aux = None
    if aux_path.exists():
        try:
            old_aux = parse_aux(_read_text(aux_path))
        except (AuxError, _ReadError) as err:
            _err(f"{aux_path}: {err}")
            return 2, None

    bbl_items = None
    bbl_path = Path(cfg.base + ".bbl")
    if (tex.style is not None or tex.data) and bbl_path.exists():
        try:
            bbl_items = scan_tex(_read_text(bbl_path)).inline_bib
        except (TexScanError, _ReadError) as err:
            _err(f"{bbl_path}: {err}")
            return 2, None

    result = run_pass(tex, old_aux, base=cfg.base, bbl_items=bbl_items)
    _atomic_write(aux_path, write_aux(result.new_aux))
    _atomic_write(Path(cfg.base + ".rendered.txt"), result.rendered)
    for warning in result.warnings:
        _err(warning)
    resolved = sum(1 for k in result.new_aux.citations if k in (old_aux.bibcites if old_aux else {}))
    state = "changed" if result.labels_changed else "stable"
    print(f"{cfg.base}: {len(result.new_aux.citations)} citation(s), "
          f"{resolved} resolved, labels {state}")
    return 0, result


# ---------------------------------------------------------------------------
# pipeline

def cmd_pipeline(cfg: CliConfig) -> int:
    tex_path = Path(cfg.base + ".tex")
    if not tex_path.exists():
        _err(f"no tex file {tex_path}")
        return 2
    try:
        tex = scan_tex(_read_text(tex_path))
    except (TexScanError, _ReadError) as err:
        _err(f"{tex_path}: {err}")
        return 2
    if tex.style is None:
        _err("no style declared")
        return 2
    if not tex.data:
        _err("no database declared")
        return 2

    rc, _ = _do_latexpass(cfg)
    if rc:
        return rc
    bibtex_rc = cmd_bibtex(cfg)
    if bibtex_rc == 2:
        return 2

    converged = False
    for _ in range(cfg.max_passes):
        rc, result = _do_latexpass(cfg)
        if rc:
            return rc
        if not result.labels_changed:
            converged = True
            break
    if not converged:
        _err(f"labels did not settle within {cfg.max_passes} pass(es)")
        return 2
    return bibtex_rc


# ---------------------------------------------------------------------------
# lint

def cmd_lint(cfg: CliConfig) -> int:
    bst_path = _find_file(cfg.base + ".bst", cfg.base, cfg.style_dir)
    if bst_path is None:
        _err(f"style file {cfg.base}.bst not found in {_searched(cfg.base, cfg.style_dir)}")
        return 2
    try:
        program, diagnostics = parse_bst(_read_text(bst_path), bst_path.name)
    except _ReadError as err:
        _err(f"{bst_path}: {err}")
        return 2
    if any(d.fatal for d in diagnostics):
        for diag in diagnostics:
            _err(diag.format())
        return 2

    count = 0
    for diag in diagnostics:
        print(f"{bst_path.name}:{diag.line}: {diag.message}")
        count += 1
    for finding in lint_program(program):
        where = f":{finding.line}" if finding.line else ""
        print(f"{bst_path.name}{where}: {finding.message}")
        count += 1
    print(f"{cfg.base}: {count} finding(s)")
    return 1 if count else 0


# ---------------------------------------------------------------------------
# helpers

class _ReadError(Exception):
    pass


def _read_text(path: Path) -> str:
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as err:
        raise _ReadError(f"invalid UTF-8 at byte {err.start}") from err


def _atomic_write(path: Path, text: str) -> None:
    # a failed run must never truncate a previous output file
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _find_file(name: str, base: str, extra_dir: Path | None) -> Path | None:
    for directory in _search_dirs(base, extra_dir):
        candidate = directory / name
        if candidate.exists():
            return candidate
    return None


def _search_dirs(base: str, extra_dir: Path | None) -> list[Path]:
    dirs = [Path(".")]
    base_dir = Path(base).parent
    if str(base_dir) not in ("", "."):
        dirs.append(base_dir)
    if extra_dir is not None:
        dirs.append(extra_dir)
    return dirs


def _searched(base: str, extra_dir: Path | None) -> str:
    return ", ".join(str(d) for d in _search_dirs(base, extra_dir))


def _err(message: str) -> None:
    print(message, file=sys.stderr)
