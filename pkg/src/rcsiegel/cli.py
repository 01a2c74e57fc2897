"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 mathematical
precondition violated (odd weight, singular recursion).  Solver results are
cached on disk under ``$RCSIEGEL_CACHE_DIR`` (default ``~/.cache/rcsiegel``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import brackets, rcsolve, vectorops
from .laplace import OperatorParams, TrivialSpaceError, structural_defect, verify_lemma_deltagrad
from .rcsolve import PBasisExpr, RecursionSingularError

SCHEMA_VERSION = 1
CACHE_ENV = "RCSIEGEL_CACHE_DIR"

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_MATH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    params: Dict[str, object] = field(default_factory=dict)
    fmt: str = "json"
    cache_dir: Optional[str] = None
    seed: int = 0
    truncation: int = brackets.DEFAULT_TRUNCATION


# Formatting ------------------------------------------------------------------

def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _latex_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _monomial(a, power_fmt: Callable[[int, int], str]) -> str:
    return " ".join(power_fmt(alpha, e) for alpha, e in enumerate(a) if e)


def export_latex(expr: PBasisExpr) -> str:
    """``sum C(a) prod P_alpha^{a_alpha}``, terms in descending multi-index order."""
    if expr.is_zero():
        return "0"

    def power(alpha, e):
        return f"P_{{{alpha}}}" if e == 1 else f"P_{{{alpha}}}^{{{e}}}"

    out = []
    for a in sorted(expr.coeffs, reverse=True):
        c = expr.coeffs[a]
        mono = _monomial(a, power)
        mag = abs(c)
        if not mono:
            body = _latex_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_latex_coeff(mag)} {mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def export_text(expr: PBasisExpr) -> str:
    lines = [f"n={expr.n} v={expr.v} d1={expr.d1} d2={expr.d2} normalization={expr.normalization}"]
    for a in sorted(expr.coeffs, reverse=True):
        lines.append(f"{_frac(expr.coeffs[a]):>16}  {_monomial(a, lambda al, e: f'P{al}^{e}') or '1'}")
    return "\n".join(lines)


def _render_expr(expr: PBasisExpr, fmt: str) -> str:
    if fmt == "latex":
        return export_latex(expr)
    if fmt == "text":
        return export_text(expr)
    return expr.dumps()


def _render_obj(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True)
    if fmt == "latex":
        raise UsageError("latex output is only available for P-basis expressions")
    return _text_tree(obj)


def _text_tree(obj, indent: str = "") -> str:
    """Indented ``key: value`` lines; list items are marked with ``-``."""
    lines: List[str] = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.append(_text_tree(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for x in obj:
            if isinstance(x, (dict, list)) and x:
                block = _text_tree(x, indent + "  ").split("\n")
                block[0] = f"{indent}- " + block[0][len(indent) + 2:]
                lines.extend(block)
            else:
                lines.append(f"{indent}- {x}")
    else:
        lines.append(f"{indent}{obj}")
    return "\n".join(lines)


# Cache -----------------------------------------------------------------------

def cache_dir(override: Optional[str] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rcsiegel"


def cache_key(kind: str, params: dict) -> str:
    blob = json.dumps({"schema": SCHEMA_VERSION, "kind": kind, "params": params}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_solve(params: OperatorParams, directory: Optional[Path], variant: str = "derived") -> PBasisExpr:
    if directory is None:
        return rcsolve.solve_recursion(params, variant=variant)
    key = cache_key("solve", {**asdict(params), "normalization": "C_last=1", "variant": variant})
    path = directory / f"{key}.json"
    if path.exists():
        try:
            return PBasisExpr.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError):
            pass  # unreadable entry: recompute and overwrite
    expr = rcsolve.solve_recursion(params, variant=variant)
    _atomic_write(path, expr.dumps())
    return expr


# Commands --------------------------------------------------------------------

def _params(args) -> OperatorParams:
    try:
        return OperatorParams(args.n, args.v, args.d1, args.d2)
    except TrivialSpaceError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cache(args) -> Optional[Path]:
    return None if args.no_cache else cache_dir(args.cache_dir)


def cmd_solve(args) -> str:
    params = _params(args)
    params.require_even()
    return _render_expr(cached_solve(params, _cache(args), args.variant), args.format)


def closed_form(kind: str, n: int, v: int, d1: int, d2: int) -> PBasisExpr:
    """Dispatch to a closed form; ``v`` is the weight throughout."""
    if v % 2:
        raise TrivialSpaceError("trivial space: v must be even")
    if kind == "v2":
        if v != 2:
            raise UsageError("the v2 closed form has weight 2")
        return rcsolve.closed_v2(n, d1, d2)
    if kind == "v4":
        if v != 4:
            raise UsageError("the v4 closed form has weight 4")
        return rcsolve.closed_v4(n, d1, d2)
    if kind == "cohen":
        if n != 1:
            raise UsageError("the cohen closed form is genus 1")
        return rcsolve.cohen_n1(v // 2, d1, d2)
    if kind == "genus2":
        if n != 2:
            raise UsageError("the genus2 closed form is genus 2")
        return rcsolve.choie_eholzer_n2(v // 2, d1, d2)
    raise UsageError(f"unknown closed form {kind!r}")


def cmd_closed_form(args) -> str:
    _params(args)
    try:
        expr = closed_form(args.kind, args.n, args.v, args.d1, args.d2)
    except ValueError as exc:
        if isinstance(exc, TrivialSpaceError):
            raise
        raise UsageError(str(exc)) from exc
    return _render_expr(expr, args.format)


def _applicable_closed_forms(p: OperatorParams) -> List[str]:
    kinds = []
    if p.v == 2:
        kinds.append("v2")
    if p.v == 4:
        kinds.append("v4")
    if p.n == 1 and p.v > 0 and p.d1 % 2 == 0 and p.d2 % 2 == 0:
        kinds.append("cohen")
    if p.n == 2 and p.v > 0:
        kinds.append("genus2")
    return kinds


def run_verify(params: OperatorParams, directory: Optional[Path] = None, cost_cap: int = 400) -> dict:
    params.require_even()
    report: dict = {"params": asdict(params), "checks": []}

    def add(name, ok, detail=None):
        entry = {"check": name, "pass": bool(ok)}
        if detail is not None:
            entry["detail"] = detail
        report["checks"].append(entry)

    if params.n <= 4:
        identities = verify_lemma_deltagrad(params.n, params.d1, params.d2)
        failed = [r for r in identities if not r["pass"]]
        add("operator_identities", not failed, {"total": len(identities), "failed": len(failed)})
    expr = cached_solve(params, directory)
    add("harmonic_structural", not structural_defect(expr, params.d1, params.d2))
    add("harmonic_expanded", rcsolve.is_harmonic(expr, params.d1, params.d2))
    for kind in _applicable_closed_forms(params):
        ref = closed_form(kind, params.n, params.v, params.d1, params.d2)
        c = rcsolve.proportional_equal(expr, ref)
        add(f"closed_form_{kind}", c is not None, None if c is None else {"ratio": _frac(c)})
    try:
        kd = rcsolve.kernel_dimension(params, cost_cap=cost_cap)
        add("kernel_dimension", kd.dimension >= 1, {"dimension": kd.dimension})
    except rcsolve.CostCapError as exc:
        report["skipped"] = [f"kernel_dimension: {exc}"]
    report["all_pass"] = all(c["pass"] for c in report["checks"])
    return report


def cmd_verify(args) -> str:
    report = run_verify(_params(args), _cache(args), args.cost_cap)
    out = _render_obj(report, "text" if args.format == "text" else "json")
    if not report["all_pass"]:
        raise VerificationFailed(out)
    return out


def cmd_kernel_dim(args) -> str:
    params = _params(args)
    try:
        kd = rcsolve.kernel_dimension(params, cost_cap=args.cost_cap)
    except rcsolve.CostCapError as exc:
        raise UsageError(str(exc)) from exc
    obj = {"params": asdict(params), "dimension": kd.dimension,
           "basis": [b.to_json() for b in kd.basis]}
    return _render_obj(obj, args.format)


def _load_expansion(path: str) -> brackets.QExpansion:
    try:
        return brackets.QExpansion.from_json(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read q-expansion from {path}: {exc}") from exc


def cmd_bracket(args) -> str:
    N = args.terms
    if N < 1:
        raise UsageError("--terms must be >= 1")
    try:
        f = _load_expansion(args.f) if args.f else brackets.eisenstein(args.k, N)
        g = _load_expansion(args.g) if args.g else brackets.eisenstein(args.l, N)
        out = brackets.rc_bracket_genus1(f, g, args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "text":
        return f"weight {out.weight}: " + " + ".join(
            f"({_frac(c)})q^{m}" for m, c in enumerate(out.coefficients) if c) + f" + O(q^{out.truncation})"
    return _render_obj(out.to_json(), args.format)


def cmd_cusp_check(args) -> str:
    params = _params(args)
    params.require_even()
    try:
        report = brackets.cusp_vanishing_check(params, args.trials, args.seed,
                                               expr=cached_solve(params, _cache(args)))
    except ValueError as exc:
        if isinstance(exc, TrivialSpaceError):
            raise
        raise UsageError(str(exc)) from exc
    out = _render_obj(report, args.format)
    if not (report["all_pass"] and report["nonsingular_nonzero"]):
        raise VerificationFailed(out)
    return out


def cmd_vector(args) -> str:
    try:
        if args.kind == "lift":
            vp = vectorops.lift_symmetric(args.n, args.m, args.d1, args.d2)
        else:
            if args.n != 2:
                raise UsageError("the mixed construction is genus 2")
            vp = vectorops.mixed_m2_genus2(args.m, args.d1, args.d2)
    except (TrivialSpaceError, vectorops.NotHarmonicError):
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    obj = vp.to_json()
    if args.equivariance_trials:
        eq = vectorops.verify_equivariance(vp, args.n, args.equivariance_trials, args.seed)
        obj = {"family": obj, "equivariance": eq}
        if not eq["all_pass"]:
            raise VerificationFailed(_render_obj(obj, args.format))
    return _render_obj(obj, args.format)


def cmd_export(args) -> str:
    if args.input:
        try:
            expr = PBasisExpr.from_json(json.loads(Path(args.input).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read expression from {args.input}: {exc}") from exc
    else:
        if None in (args.n, args.v, args.d1, args.d2):
            raise UsageError("export needs --input or all of --n --v --d1 --d2")
        params = _params(args)
        params.require_even()
        expr = cached_solve(params, _cache(args))
    return _render_expr(expr, args.format)


# Parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _operator_args(p, required=True):
    p.add_argument("--n", type=int, required=required, help="genus")
    p.add_argument("--v", type=int, required=required, help="weight (even)")
    p.add_argument("--d1", type=int, required=required)
    p.add_argument("--d2", type=int, required=required)


def _common(p, formats=("json", "text", "latex")):
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--cache-dir", default=None, help=f"overrides ${CACHE_ENV}")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rcsiegel", description="Invariant pluri-harmonic polynomials and their brackets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve the coefficient recursion")
    _operator_args(p)
    _common(p)
    p.add_argument("--variant", choices=["derived", "alternate"], default="derived")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("closed-form", help="evaluate a closed-form solution")
    _operator_args(p)
    _common(p)
    p.add_argument("--kind", choices=["v2", "v4", "cohen", "genus2"], required=True)
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("verify", help="run the identity suite for one parameter set")
    _operator_args(p)
    _common(p, ("json", "text"))
    p.add_argument("--cost-cap", type=int, default=400)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernel-dim", help="dimension of the harmonic subspace by elimination")
    _operator_args(p)
    _common(p, ("json", "text"))
    p.add_argument("--cost-cap", type=int, default=400)
    p.set_defaults(func=cmd_kernel_dim)

    p = sub.add_parser("bracket", help="genus-one bracket of two q-expansions")
    p.add_argument("--k", type=int, default=4, help="weight of the Eisenstein series f")
    p.add_argument("--l", type=int, default=6, help="weight of the Eisenstein series g")
    p.add_argument("--f", default=None, help="JSON q-expansion file used instead of E_k")
    p.add_argument("--g", default=None, help="JSON q-expansion file used instead of E_l")
    p.add_argument("--t", type=int, required=True, help="bracket order")
    p.add_argument("--terms", type=int, default=brackets.DEFAULT_TRUNCATION)
    _common(p, ("json", "text"))
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("cusp-check", help="vanishing on singular positive semi-definite pairs")
    _operator_args(p)
    _common(p, ("json", "text"))
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_cusp_check)

    p = sub.add_parser("vector", help="vector-valued families")
    p.add_argument("--kind", choices=["lift", "mixed"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--equivariance-trials", type=int, default=0)
    _common(p, ("json", "text"))
    p.set_defaults(func=cmd_vector)

    p = sub.add_parser("export", help="render a solved or stored expression")
    _operator_args(p, required=False)
    p.add_argument("--input", default=None, help="PBasisExpr JSON file")
    _common(p)
    p.set_defaults(func=cmd_export, format="latex")
    return parser


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except VerificationFailed as exc:
        print(str(exc), file=stdout)
        print("verification failed", file=stderr)
        return EXIT_VERIFY
    except (TrivialSpaceError, RecursionSingularError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_MATH
    except (rcsolve.NotHarmonicError, vectorops.NotHarmonicError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_VERIFY
    print(out, file=stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
