"""Command-line interface: ``openxxz verify|build|spectrum|sweep``.

Exit status: 0 when everything passes, 1 when a check fails, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import charges as ch
from . import lattice as lt
from .algebra import GRADATIONS, make_params
from .checks import GROUPS, REGISTRY
from .errors import DegenerateAnisotropyError, OpenXXZError
from .suite import SuiteConfig, run_suite
from .tensor import eig_general, matrix_to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OBJECTS = ("r", "kright", "kleft", "transfer", "hamiltonian", "q1", "q2")


class UsageError(Exception):
    pass


def parse_n(text: str) -> tuple[int, ...]:
    """``"3"``, ``"1,2,4"`` or ``"1-4"``."""
    out: list[int] = []
    try:
        for part in str(text).split(","):
            if "-" in part.strip()[1:]:
                a, b = part.split("-")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad chain length list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("chain lengths must be >= 1")
    return tuple(out)


def parse_list(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in str(text).split(",") if s.strip())


def parse_grid(text: str) -> list[float]:
    """``"0.3,0.5"`` or ``"start:stop:num"`` (inclusive linspace)."""
    text = str(text)
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(v) for v in np.linspace(float(a), float(b), int(n))]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def _model_args(p: argparse.ArgumentParser, n_default="3") -> None:
    p.add_argument("--mu", type=float, default=None, help="anisotropy, q = exp(i mu)")
    p.add_argument("--m", type=float, default=None, help="blob parameter, Q = exp(i m mu)")
    p.add_argument("--zeta", type=float, default=None, help="right boundary parameter")
    p.add_argument("--n", type=parse_n, default=None, help=f"chain length(s): 3, 1,2,4 or 1-4 (default {n_default})")
    p.add_argument("--gradation", choices=GRADATIONS, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="openxxz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    _model_args(v)
    v.add_argument("--case", type=parse_list, default=None, help="left boundary case(s): I,II,III")
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--draws", type=int, default=None, help="random parameter draws (ignored with --mu/--m/--zeta)")
    v.add_argument("--samples", type=int, default=None, help="lambda samples per entry")
    v.add_argument("--checks", type=parse_list, default=None,
                   help="comma list of check names or groups: " + ", ".join(GROUPS))
    v.add_argument("--format", choices=("json", "md"), default=None)
    v.add_argument("--config", type=Path, default=None, help="JSON file with the same keys as the flags")
    v.add_argument("--out", type=Path, default=None)

    b = sub.add_parser("build", help="export one lattice object as a matrix file")
    _model_args(b)
    b.add_argument("--object", choices=OBJECTS, required=True)
    b.add_argument("--lambda", dest="lam", default="symbolic", help="complex value or 'symbolic'")
    b.add_argument("--case", default="I", choices=lt.CASES)
    b.add_argument("--form", default="blob", choices=lt.K_FORMS)
    b.add_argument("--route", default="blob", help="Hamiltonian route")
    b.add_argument("--out", type=Path, default=None)

    s = sub.add_parser("spectrum", help="eigenvalues of H and Q1 with degeneracy clusters (CSV)")
    _model_args(s)
    s.add_argument("--cluster-tol", type=float, default=1e-8)
    s.add_argument("--out", type=Path, default=None)

    w = sub.add_parser("sweep", help="re-run selected checks over a (mu, m, zeta) grid (CSV)")
    w.add_argument("--mu", type=parse_grid, required=True)
    w.add_argument("--m", type=parse_grid, required=True)
    w.add_argument("--zeta", type=parse_grid, required=True)
    w.add_argument("--n", type=parse_n, default=(1, 2, 3))
    w.add_argument("--checks", type=parse_list, default=("symmetry", "hamiltonian"))
    w.add_argument("--tol", type=float, default=1e-10)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--samples", type=int, default=5)
    w.add_argument("--out", type=Path, default=None)
    return ap


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _params(args, n: int | None = None):
    mu = 0.3 if args.mu is None else args.mu
    m = 0.7 if args.m is None else args.m
    zeta = 0.2 if args.zeta is None else args.zeta
    if n is None:
        n = (args.n or (3,))[0]
    return make_params(mu, m, zeta, n, args.gradation or "homogeneous")


# ---------------------------------------------------------------------------


def _load_config(path: Path) -> dict:
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    return doc


def cmd_verify(args) -> int:
    conf = _load_config(args.config) if args.config else {}
    known = {"mu", "m", "zeta", "n", "case", "gradation", "tol", "seed", "draws", "samples", "checks", "format"}
    extra = set(conf) - known
    if extra:
        raise UsageError(f"unknown config keys: {sorted(extra)}")

    def pick(key, conv=lambda x: x):
        val = getattr(args, key)
        if val is not None:
            return val
        return conv(conf[key]) if key in conf else None

    mu, m, zeta = pick("mu", float), pick("m", float), pick("zeta", float)
    n = pick("n", lambda x: parse_n(str(x)))
    cases = pick("case", lambda x: parse_list(x) if isinstance(x, str) else tuple(x))
    grad = pick("gradation")
    checks = pick("checks", lambda x: parse_list(x) if isinstance(x, str) else tuple(x)) or ()
    unknown = set(checks) - set(REGISTRY) - set(GROUPS)
    if unknown:
        raise UsageError(f"unknown checks or groups: {sorted(unknown)}")
    fixed = [v is not None for v in (mu, m, zeta)]
    if any(fixed) and not all(fixed):
        raise UsageError("--mu, --m and --zeta must be given together")
    kw = {}
    if all(fixed):
        kw["points"] = ((mu, m, zeta),)
        try:
            make_params(mu, m, zeta, 1)
        except DegenerateAnisotropyError as exc:
            raise UsageError(str(exc)) from None
    for key, val in (("n_values", n), ("cases", cases), ("tol", pick("tol", float)),
                     ("seed", pick("seed", int)), ("draws", pick("draws", int)),
                     ("samples", pick("samples", int))):
        if val is not None:
            kw[key] = val
    if grad is not None:
        kw["gradations"] = (grad,)
    kw["checks"] = checks
    try:
        config = SuiteConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_suite(config)
    fmt = pick("format") or "json"
    _emit(report.to_json() + "\n" if fmt == "json" else report.to_markdown(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _laurent_doc(mat, metadata: dict) -> str:
    terms = [{"degree": mat.lo + k, "dim": mat.dim,
              "data": [[float(z.real), float(z.imag)] for z in mat.coeffs[k].ravel()]}
             for k in range(mat.nterms)]
    return json.dumps({"dim": mat.dim, "laurent_terms": terms, "metadata": metadata}, indent=1) + "\n"


def cmd_build(args) -> int:
    p = _params(args)
    g = args.gradation or "homogeneous"
    lam = None if args.lam == "symbolic" else args.lam
    if lam is not None:
        try:
            lam = complex(lam.replace(" ", ""))
        except ValueError:
            raise UsageError(f"--lambda must be a complex number or 'symbolic', got {args.lam!r}") from None
    obj = args.object
    meta = {"object": obj, "params": p.as_dict(), "gradation": g, "case": None,
            "lambda": None if lam is None else [lam.real, lam.imag]}
    if obj in ("hamiltonian", "q1", "q2"):
        meta["lambda"] = None
        if obj == "hamiltonian":
            mat = lt.hamiltonian(p, args.route)
            meta["route"] = args.route
        else:
            mat = ch.charge_tower(int(obj[1]), p)
            meta.update(charge=obj.upper(), route="closed_form")
        _emit(matrix_to_text(mat, meta), args.out)
        return EXIT_OK
    if obj == "r":
        lm = lt.r_matrix(p, g)
    elif obj == "kright":
        lm = lt.k_right(p, args.form, g).matrix
        meta["form"] = args.form
    elif obj == "kleft":
        lm = lt.k_left(args.case, g, p.mu).matrix
        meta["case"] = args.case
    else:
        lm = lt.transfer_matrix(p, args.case, g).matrix
        meta["case"] = args.case
    if lam is None:
        _emit(_laurent_doc(lm, meta), args.out)
    else:
        _emit(matrix_to_text(lm.eval(lam), meta), args.out)
    return EXIT_OK


def cluster(values: np.ndarray, tol: float) -> list[int]:
    """Cluster labels for (real, imag)-sorted values; a gap above ``tol`` starts a new cluster."""
    labels, cur = [], 0
    for k, v in enumerate(values):
        if k and abs(v - values[k - 1]) > tol:
            cur += 1
        labels.append(cur)
    return labels


def cmd_spectrum(args) -> int:
    p = _params(args)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["operator", "index", "re", "im", "cluster", "multiplicity"])
    for name, mat in (("H", lt.hamiltonian(p, "blob")), ("Q1", ch.charge_tower(1, p))):
        w = eig_general(mat)
        labels = cluster(w, args.cluster_tol)
        counts = {c: labels.count(c) for c in set(labels)}
        for k, (z, c) in enumerate(zip(w, labels)):
            wr.writerow([name, k, f"{z.real:.15g}", f"{z.imag:.15g}", c, counts[c]])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    unknown = set(args.checks) - set(REGISTRY) - set(GROUPS)
    if unknown:
        raise UsageError(f"unknown checks or groups: {sorted(unknown)}")
    points = tuple((mu, m, z) for mu in args.mu for m in args.m for z in args.zeta)
    for mu, _, _ in points:
        try:
            make_params(mu, 0.0, 0.0, 1)
        except DegenerateAnisotropyError as exc:
            raise UsageError(str(exc)) from None
    report = run_suite(SuiteConfig(n_values=args.n, tol=args.tol, seed=args.seed, samples=args.samples,
                                   checks=args.checks, points=points))
    rows: dict[tuple, list] = {}
    for e in report.entries:
        pr = e.params
        key = (pr["mu"], pr["m"], pr["zeta"], pr["N"], e.check_name)
        r = rows.setdefault(key, [0.0, True])
        if e.kind == "identity":
            r[0] = max(r[0], e.residual if e.residual == e.residual else float("inf"))
        r[1] = r[1] and e.passed
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["mu", "m", "zeta", "N", "check", "max_residual", "pass"])
    for (mu, m, z, n, name), (res, ok) in sorted(rows.items()):
        wr.writerow([f"{mu:.10g}", f"{m:.10g}", f"{z:.10g}", n, name, f"{res:.3e}", int(ok)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "build": cmd_build, "spectrum": cmd_spectrum, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DegenerateAnisotropyError) as exc:
        parser.print_usage(sys.stderr)
        print(f"openxxz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OpenXXZError, ValueError) as exc:
        print(f"openxxz: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
