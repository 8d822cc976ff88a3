"""Command-line experiments: ``specop {spectrum,verify,sweep,inner,dirichlet}``.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 degenerate parameters. Reports are JSON (default) or CSV; every float is
written with 17 significant digits so a report re-run from its embedded
``argv`` reproduces its numbers bit for bit.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np

from . import __version__
from .dirichlet import (
    dirichlet_candidate,
    dirichlet_norm_diagnostic,
    dirichlet_params,
    ode_residual,
)
from .eigensolve import eigenvalues, outliers
from .operator import essential_interval, inner_defect, jacobi_truncation, section
from .pointspec import (
    DegenerateParameterError,
    PointEigen,
    associate,
    eigenfunction_closed,
    eigenfunction_recurrence,
    eigenvalue_mp,
    max_relative_deviation,
    point_spectrum,
    recurrence_precision,
    section_residual,
)
from .series import to_complex
from .weights import BergmanType, DirichletBinomial, WeightError, make_weight, parse_space

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_DEGENERATE = 0, 1, 2, 3

DEFAULT_N = 500
DEFAULT_TOL = 1e-8
DEFAULT_JMAX = 5
DEFAULT_MARGIN = 1e-6
# exact-sum identity: the defect of a rounded literal such as 1.4142136 is ~5e-8
DEFAULT_INNER_TOL = 1e-6
COEFF_RTOL = 1e-10


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits (non-finite -> null)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in seq) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return to_json([obj.real, obj.imag])
    s = str(obj)
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def run_id(argv: list[str]) -> str:
    return hashlib.sha256("\x1f".join(argv).encode()).hexdigest()[:12]


def parse_a(text: str):
    """``RE[+IMi]`` (``j`` also accepted) or ``MOD@PHASE`` with phase in radians."""
    t = text.strip().replace(" ", "")
    try:
        if "@" in t:
            mod, phase = t.split("@")
            return (float(mod), float(phase))
        return complex(t.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse a = {text!r}; use RE[+IMi] or MOD@PHASE") from None


def parse_poly(text: str) -> np.ndarray:
    try:
        coeffs = [complex(p.strip().replace(" ", "").replace("i", "j")) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse polynomial {text!r}") from None
    return np.array(coeffs, dtype=complex)


def _space(text: str):
    try:
        return parse_space(text)
    except (WeightError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _closed_alpha(w) -> float | None:
    return w.kind.alpha if isinstance(w.kind, BergmanType) else None


# -- spectrum ---------------------------------------------------------------


@dataclass
class SpectralReport:
    run_id: str
    argv: list
    space: dict
    a: dict
    essential: list
    predicted: list
    section: dict
    matches: list
    residuals: list
    unmatched: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    success: bool = True
    diagnostics: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["diagnostics"] is None:
            del d["diagnostics"]
        return d


def spectrum_report(args, argv) -> SpectralReport:
    w = _space(args.space)
    a = parse_a(args.a)
    if args.n < 1 or args.jmax < 0 or not args.tol > 0 or not args.margin > 0:
        raise UsageError("need --n >= 1, --jmax >= 0, --tol > 0, --margin > 0")
    t, g = section(w, a, args.n)
    lo, hi = essential_interval(g.modulus)
    below, above = outliers(t, (lo, hi), args.margin)
    sec = {"dimension": args.n, "outliers_below": below, "outliers_above": above}
    if args.all_eigenvalues:
        sec["eigenvalues"] = eigenvalues(t).values
    notes = []
    if g.modulus == 1.0:
        notes.append("|a| = 1: 0 is the lower end of the essential interval, so 0 is in the spectrum")
    alpha = _closed_alpha(w)
    predicted, matches, residuals, unmatched = [], [], [], []
    success = True
    if alpha is None:
        notes.append(f"no closed-form point spectrum for {w.descriptor}; outliers reported only")
    elif alpha >= 1:
        raise UsageError("bergman:ALPHA needs ALPHA < 1")
    elif g.modulus == 0:
        notes.append("a = 0: V_0 is diagonal with the ratios on the diagonal")
    else:
        entries = point_spectrum(alpha, g.modulus, args.jmax)
        predicted = [asdict(e) for e in entries]
        valid = [e for e in entries if e.valid]
        observed = list(below) + list(above)
        pairs = associate([e.lam for e in valid], observed)
        paired = {i for i, _, _ in pairs}
        used = {k for _, k, _ in pairs}
        for i, k, dist in pairs:
            e = valid[i]
            ok = dist <= args.tol
            success &= ok
            matches.append(
                {"j": e.j, "branch": e.branch, "predicted": e.lam, "section": observed[k], "delta": dist, "ok": ok}
            )
        for i, e in enumerate(valid):
            if i not in paired:
                success = False
                matches.append({"j": e.j, "branch": e.branch, "predicted": e.lam, "section": None, "delta": None, "ok": False})
            residuals.append(
                {"j": e.j, "branch": e.branch, "value": section_residual(w, g.modulus, alpha, e, args.n)}
            )
        # an outlier farther out than the last predicted value on its side is unexplained
        for k, x in enumerate(observed):
            if k in used:
                continue
            side = [v.lam for v in valid if (v.lam < lo) == (x < lo)]
            explained = bool(side) and (min(side) < x if x < lo else x < max(side))
            unmatched.append({"value": x, "explained_by_higher_j": explained})
            success &= explained
    return SpectralReport(
        run_id=run_id(argv),
        argv=list(argv),
        space={"family": w.descriptor.split(":")[0], "alpha": _alpha_of(w), "descriptor": w.descriptor},
        a={"modulus": g.modulus, "phase": g.phase},
        essential=[lo, hi],
        predicted=predicted,
        section=sec,
        matches=matches,
        residuals=residuals,
        unmatched=unmatched,
        notes=notes,
        success=bool(success),
    )


def _alpha_of(w):
    return getattr(w.kind, "alpha", None)


def spectrum_csv(rep: SpectralReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["run_id", "alpha", "a_mod", "a_phase", "kind", "j", "branch", "value"])
    base = [rep.run_id, fmt(rep.space["alpha"]) if rep.space["alpha"] is not None else "",
            fmt(rep.a["modulus"]), fmt(rep.a["phase"])]
    wr.writerow(base + ["essential_lo", "", "", fmt(rep.essential[0])])
    wr.writerow(base + ["essential_hi", "", "", fmt(rep.essential[1])])
    for p in rep.predicted:
        if p["valid"]:
            wr.writerow(base + ["predicted", p["j"], p["branch"], fmt(p["lam"])])
    values = rep.section.get("eigenvalues")
    if values is None:
        values = list(rep.section["outliers_below"]) + list(rep.section["outliers_above"])
    for v in values:
        wr.writerow(base + ["section", "", "", fmt(v)])
    for r in rep.residuals:
        wr.writerow(base + ["residual", r["j"], r["branch"], fmt(r["value"])])
    return buf.getvalue()


def cmd_spectrum(args, argv) -> tuple[str, int]:
    rep = spectrum_report(args, argv)
    text = spectrum_csv(rep) if args.format == "csv" else to_json(rep.to_dict()) + "\n"
    return text, EXIT_OK if rep.success else EXIT_FAIL


# -- verify -----------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def verify_case(alpha: float, a_mod: float, e: PointEigen, n: int, terms: int, perturb: float) -> dict:
    w = make_weight(BergmanType(alpha))
    dps = recurrence_precision(e.pole, terms)
    with mpmath.workdps(dps):
        # the shift must happen at working precision, not the default 53 bits
        lam = eigenvalue_mp(alpha, a_mod, e.j, e.branch, dps) + mpmath.mpf(perturb)
    rec = eigenfunction_recurrence(w, a_mod, lam, terms, dps=dps)
    closed = eigenfunction_closed(alpha, a_mod, e, terms)
    dev = max_relative_deviation(rec, closed)
    res = section_residual(w, a_mod, alpha, e, n, lam=e.lam + perturb)
    return {"alpha": alpha, "a": a_mod, "j": e.j, "branch": e.branch, "lam": e.lam,
            "coeff_deviation": dev, "residual": res}


def cmd_verify(args, argv) -> tuple[str, int]:
    alphas = _floats(args.alphas)
    a_values = _floats(args.a_values)
    if any(not al < 1 or al == 0 for al in alphas) or any(not a > 0 for a in a_values):
        raise UsageError("need alphas < 1, nonzero, and a-values > 0")
    cases = []
    for al in alphas:
        for a in a_values:
            for e in point_spectrum(al, a, args.jmax):
                if e.valid:
                    cases.append(verify_case(al, a, e, args.n, args.terms, args.perturb))
    failures = [
        c for c in cases
        if not (c["coeff_deviation"] <= COEFF_RTOL and c["residual"] < args.tol)
    ]
    code = EXIT_FAIL if failures else EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["run_id", "alpha", "a_mod", "j", "branch", "lam", "coeff_deviation", "residual"])
        rid = run_id(argv)
        for c in cases:
            wr.writerow([rid, fmt(c["alpha"]), fmt(c["a"]), c["j"], c["branch"], fmt(c["lam"]),
                         fmt(c["coeff_deviation"]), fmt(c["residual"])])
        return buf.getvalue(), code
    rep = {
        "run_id": run_id(argv), "argv": list(argv), "cases": len(cases),
        "coeff_rtol": COEFF_RTOL, "residual_tol": args.tol, "perturb": args.perturb,
        "success": not failures, "failures": failures[:10], "results": cases,
    }
    return to_json(rep) + "\n", code


# -- sweep ------------------------------------------------------------------


def sweep_row(w, alpha, a: float, n: int, jmax: int, margin: float) -> dict:
    t = jacobi_truncation(w, a, n)
    below, above = outliers(t, essential_interval(a), margin)
    entries = point_spectrum(alpha, a, jmax) if alpha is not None and a > 0 else []
    return {
        "a": a,
        "valid_minus": sum(e.valid and e.branch == "minus" for e in entries),
        "valid_plus": sum(e.valid and e.branch == "plus" for e in entries),
        "outliers_below": int(below.size),
        "outliers_above": int(above.size),
    }


def cmd_sweep(args, argv) -> tuple[str, int]:
    w = _space(args.space)
    if args.steps < 1 or not args.a_min >= 0 or args.a_max < args.a_min:
        raise UsageError("need --steps >= 1 and 0 <= --a-min <= --a-max")
    alpha = _closed_alpha(w)
    grid = np.linspace(args.a_min, args.a_max, args.steps) if args.steps > 1 else np.array([args.a_min])
    threads = max(1, int(os.environ.get("SPECOP_THREADS", "") or (os.cpu_count() or 1)))
    # map() yields in submission order, so the output order is fixed
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda a: sweep_row(w, alpha, float(a), args.n, args.jmax, args.margin), grid))
    rid = run_id(argv)
    if args.format == "json":
        return to_json({"run_id": rid, "argv": list(argv), "rows": rows}) + "\n", EXIT_OK
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    cols = ["a", "valid_minus", "valid_plus", "outliers_below", "outliers_above"]
    wr.writerow(["run_id", *cols])
    for r in rows:
        wr.writerow([rid, fmt(r["a"]), *(r[c] for c in cols[1:])])
    return buf.getvalue(), EXIT_OK


# -- inner ------------------------------------------------------------------


def cmd_inner(args, argv) -> tuple[str, int]:
    w = _space(args.space)
    f = parse_poly(args.poly)
    defect = inner_defect(w, f)
    image = defect.copy()
    image[0] += 1.0
    worst = float(np.max(np.abs(defect)))
    verdict = worst <= args.tol
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["run_id", "n", "re", "im"])
        for k, v in enumerate(image):
            wr.writerow([run_id(argv), k, fmt(v.real), fmt(v.imag)])
        return buf.getvalue(), EXIT_OK
    rep = {
        "run_id": run_id(argv), "argv": list(argv), "space": w.descriptor,
        "poly": [complex(c) for c in f], "V1": [complex(c) for c in image],
        "defect": worst, "tol": args.tol, "inner": verdict,
    }
    return to_json(rep) + "\n", EXIT_OK


# -- dirichlet --------------------------------------------------------------


def cmd_dirichlet(args, argv) -> tuple[str, int]:
    if not args.alpha > 0 or not args.a > 0 or args.terms < 1 or args.norm_terms < 0:
        raise UsageError("need --alpha > 0, --a > 0, --terms >= 1, --norm-terms >= 0")
    p = dirichlet_params(args.alpha, args.a, args.lam)
    h_mp = dirichlet_candidate(args.alpha, args.a, args.lam, args.terms, as_mp=True)
    h = to_complex(h_mp)
    w = make_weight(DirichletBinomial(args.alpha))
    dps = recurrence_precision(1.0 / max(abs(p.c), 1.0), args.terms)
    rec = eigenfunction_recurrence(w, args.a, args.lam, args.terms, dps=dps)
    deviation = max_relative_deviation(h, rec)
    residual = ode_residual(p, h_mp)
    ok = deviation <= 1e-8 and residual < 1e-10
    diag = None
    if args.norm_terms:
        d = dirichlet_norm_diagnostic(args.alpha, args.a, args.lam, args.norm_terms)
        diag = {"label": d.label, "log10_partial_norms": d.log10_partial, "slope": d.slope,
                "last_increment": d.last_increment}
    rid = run_id(argv)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["run_id", "kind", "n", "value"])
        for k, v in (("b", p.b), ("c", p.c.real), ("mu", p.mu.real), ("nu", p.nu.real),
                     ("deviation", deviation), ("residual", residual)):
            wr.writerow([rid, k, "", fmt(v)])
        if diag:
            for n, v in enumerate(diag["log10_partial_norms"]):
                wr.writerow([rid, "diagnostic_log10_partial_norm", n, fmt(v)])
        return buf.getvalue(), EXIT_OK if ok else EXIT_FAIL
    rep = {
        "run_id": rid, "argv": list(argv),
        "params": {"alpha": p.alpha, "a_mod": p.a_mod, "lambda": p.lam, "b": p.b,
                   "c": p.c, "mu": p.mu, "nu": p.nu, "mu_plus_nu": p.mu + p.nu},
        "candidate": h, "deviation_vs_recurrence": deviation, "ode_residual": residual,
        "success": ok,
    }
    if diag:
        rep["diagnostics"] = diag
    return to_json(rep) + "\n", EXIT_OK if ok else EXIT_FAIL


# -- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="specop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"specop {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_default="json"):
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--out", help="write the report here instead of stdout")

    s = sub.add_parser("spectrum", help="section eigenvalues against predicted point spectrum")
    s.add_argument("--space", required=True, help="bergman:A | dirichlet-pow:A | dirichlet-binom:A")
    s.add_argument("--a", required=True, help="RE[+IMi] or MOD@PHASE")
    s.add_argument("--n", type=int, default=DEFAULT_N)
    s.add_argument("--jmax", type=int, default=DEFAULT_JMAX)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    s.add_argument("--all-eigenvalues", action="store_true", help="include every section eigenvalue")
    common(s)

    v = sub.add_parser("verify", help="closed forms against the recurrence and section residuals")
    v.add_argument("--alphas", default="-2,-1,-0.5,0.25,0.5,0.75")
    v.add_argument("--a-values", default="0.3,0.9,1.1,2")
    v.add_argument("--jmax", type=int, default=3)
    v.add_argument("--n", type=int, default=DEFAULT_N)
    v.add_argument("--terms", type=int, default=50)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--perturb", type=float, default=0.0, help="shift every eigenvalue by this amount")
    common(v)

    w = sub.add_parser("sweep", help="branch and outlier counts over a range of a")
    w.add_argument("--space", required=True)
    w.add_argument("--a-min", type=float, required=True)
    w.add_argument("--a-max", type=float, required=True)
    w.add_argument("--steps", type=int, default=11)
    w.add_argument("--n", type=int, default=DEFAULT_N)
    w.add_argument("--jmax", type=int, default=DEFAULT_JMAX)
    w.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    common(w, "csv")

    i = sub.add_parser("inner", help="test M_f* M_f 1 = 1 for a polynomial f")
    i.add_argument("--space", required=True)
    i.add_argument("--poly", required=True, help="comma-separated coefficients, constant first")
    i.add_argument("--tol", type=float, default=DEFAULT_INNER_TOL)
    common(i)

    d = sub.add_parser("dirichlet", help="candidate eigenfunction on binom(n+alpha, n) weights")
    d.add_argument("--alpha", type=float, default=1.0)
    d.add_argument("--a", type=float, required=True)
    d.add_argument("--lambda", dest="lam", type=float, required=True)
    d.add_argument("--terms", type=int, default=30)
    d.add_argument("--norm-terms", type=int, default=0)
    common(d)
    return p


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "inner": cmd_inner,
    "dirichlet": cmd_dirichlet,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        text, code = COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"specop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateParameterError as exc:
        print(f"specop: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
