"""Command-line front end.

    matt check <src>... --mode-theory <mt> [--trace]
    matt modes validate <mt>
    matt sem laws <diagram> [--only <law>] [--cap <n>] [--jobs <n>]

Exit codes: 0 success, 1 a check or law failed, 2 malformed input.
Diagnostics go to stderr as "ERROR <code> @ <file>:<line>:<col>: <message>".
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .checker import Kernel
from .errors import MattError, ParseError
from .mode_theory import ModeTheory, load_mode_theory, validate_mode_theory
from .parser import (SurfaceConst, SurfaceDef, SurfaceModeTheory,
                     parse_program, resolve_term, resolve_type)
from .syntax import (ConstDecl, Param, Signature, empty_context, fresh,
                     push_lock, push_var)


@dataclass
class Diagnostic:
    code: str
    file: str
    line: int
    col: int
    message: str
    trace: tuple = ()

    def render(self, with_trace: bool = False) -> str:
        out = f"ERROR {self.code} @ {self.file}:{self.line}:{self.col}: " \
              f"{self.message}"
        if with_trace and self.trace:
            out += "".join(f"\n  trace: {line}" for line in self.trace)
        return out


def _diag(err: MattError, filename: str, fallback=(0, 0)) -> Diagnostic:
    line, col = err.span if err.span else fallback
    return Diagnostic(err.code, filename, line, col, err.message,
                      getattr(err, "trace", ()))


def check_file(path: Path, mt: ModeTheory | None):
    """Check every declaration in one source file.

    Returns (diagnostics, n_checked).  A mode-theory declaration in the file
    is used when no theory was supplied; declarations after a failing one are
    still attempted so a file reports all its independent errors.
    """
    filename = str(path)
    diags: list[Diagnostic] = []
    try:
        decls = parse_program(path.read_text(encoding="utf-8"), filename)
    except MattError as e:
        return [_diag(e, filename)], 0

    sig = Signature()
    kernel = None
    checked = 0
    for d in decls:
        if isinstance(d, SurfaceModeTheory):
            if mt is None:
                try:
                    mt = load_mode_theory(path.parent / d.path)
                    report = validate_mode_theory(mt)
                    if not report.ok:
                        raise ParseError(
                            "mode theory fails validation: " +
                            "; ".join(v.axiom for v in report.violations),
                            d.span)
                except OSError as e:
                    diags.append(Diagnostic("ParseError", filename,
                                            d.span[0], d.span[1], str(e)))
                    return diags, checked
                except MattError as e:
                    diags.append(_diag(e, filename, d.span))
                    return diags, checked
            continue
        if mt is None:
            diags.append(Diagnostic(
                "ParseError", filename, d.span[0], d.span[1],
                "no mode theory: pass --mode-theory or declare one"))
            return diags, checked
        if kernel is None:
            kernel = Kernel(mt, sig)
        try:
            _check_decl(kernel, d)
            checked += 1
        except MattError as e:
            diags.append(_diag(e, filename, d.span))
    return diags, checked


def _check_decl(kernel: Kernel, d):
    mt, sig = kernel.mt, kernel.sig
    if isinstance(d, SurfaceConst):
        ctx = empty_context(d.mode)
        scope: dict[str, str] = {}
        params = []
        for (pname, pmor, pty, pspan) in d.params:
            pmor = kernel._mor(ctx, pmor)
            sty = resolve_type(pty, scope, sig)
            ty = kernel.check_type(push_lock(mt, ctx, pmor), sty)
            v = fresh(pname)
            scope = {**scope, pname: v}
            params.append(Param(v, pmor, ty))
            ctx = push_var(mt, ctx, v, pmor, ty, pspan)
        result = None
        if d.result is not None:
            result = kernel.check_type(ctx, resolve_type(d.result, scope, sig))
        sig.declare(ConstDecl(d.name, d.mode, tuple(params), result))
        return
    if isinstance(d, SurfaceDef):
        ctx = empty_context(d.mode)
        ty = kernel.check_type(ctx, resolve_type(d.ty, {}, sig))
        term = resolve_term(d.term, {}, sig)
        kernel.check(ctx, term, ty)
        # definitions are opaque: later declarations see only the type
        sig.declare(ConstDecl(d.name, d.mode, (), ty))
        return
    raise ParseError(f"unknown declaration {d!r}")


# --- subcommands --------------------------------------------------------------

def cmd_check(paths, mode_theory=None, trace=False, out=None) -> int:
    out = out if out is not None else sys.stderr
    mt = None
    if mode_theory is not None:
        try:
            mt = load_mode_theory(mode_theory)
            report = validate_mode_theory(mt)
            if not report.ok:
                print(f"ERROR MalformedTable @ {mode_theory}:0:0: mode theory "
                      "fails validation: " +
                      "; ".join(v.axiom for v in report.violations), file=out)
                return 2
        except (OSError, MattError) as e:
            code = getattr(e, "code", "ParseError")
            print(f"ERROR {code} @ {mode_theory}:0:0: {e}", file=out)
            return 2
    worst = 0
    for p in paths:
        diags, _ = check_file(Path(p), mt)
        for dg in diags:
            print(dg.render(with_trace=trace), file=out)
            worst = max(worst, 2 if dg.code == "ParseError" else 1)
    return worst


def cmd_modes_validate(path, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        mt = load_mode_theory(path)
    except (OSError, MattError) as e:
        code = getattr(e, "code", "ParseError")
        print(f"ERROR {code} @ {path}:0:0: {e}", file=sys.stderr)
        return 2
    report = validate_mode_theory(mt)
    if report.ok:
        print(f"{path}: OK", file=out)
        return 0
    for v in sorted(report.violations, key=lambda v: (v.axiom, v.message)):
        print(f"VIOLATION {v.axiom}: {v.message}", file=out)
    return 1


def cmd_sem_laws(path, only=None, cap=None, jobs=1, out=None) -> int:
    out = out if out is not None else sys.stdout
    from .laws import run_law_suite
    try:
        results = run_law_suite(path, only=only, cap=cap, jobs=jobs)
    except (OSError, MattError) as e:
        code = getattr(e, "code", "ParseError")
        print(f"ERROR {code} @ {path}:0:0: {e}", file=sys.stderr)
        return 2
    failed = False
    for name in sorted(results):
        ok, detail = results[name]
        print(f"LAW {name}: {'PASS' if ok else 'FAIL'}"
              + (f" ({detail})" if detail and not ok else ""), file=out)
        failed = failed or not ok
    return 1 if failed else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="matt",
                                 description="modal type checker and "
                                             "semantics law runner")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_check = sub.add_parser("check", help="type-check source files")
    p_check.add_argument("src", nargs="+")
    p_check.add_argument("--mode-theory", default=None)
    p_check.add_argument("--trace", action="store_true")

    p_modes = sub.add_parser("modes", help="mode theory utilities")
    modes_sub = p_modes.add_subparsers(dest="modes_cmd", required=True)
    p_validate = modes_sub.add_parser("validate")
    p_validate.add_argument("mt")

    p_sem = sub.add_parser("sem", help="semantics law suites")
    sem_sub = p_sem.add_subparsers(dest="sem_cmd", required=True)
    p_laws = sem_sub.add_parser("laws")
    p_laws.add_argument("diagram")
    p_laws.add_argument("--only", default=None)
    p_laws.add_argument("--cap", type=int, default=None)
    p_laws.add_argument("--jobs", type=int, default=1)

    args = ap.parse_args(argv)
    if args.cmd == "check":
        return cmd_check(args.src, args.mode_theory, args.trace)
    if args.cmd == "modes":
        return cmd_modes_validate(args.mt)
    if args.cmd == "sem":
        return cmd_sem_laws(args.diagram, args.only, args.cap, args.jobs)
    return 2


if __name__ == "__main__":
    sys.exit(main())
