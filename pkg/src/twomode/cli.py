"""Command-line interface: ``twomode {analyze,validate,make,sweep,verify}``.

Exit codes
----------
0  success
1  internal configuration error (Fock generator self-test failed)
2  unphysical covariance matrix in an input file
3  malformed input (file schema, JSON, command-line usage)
4  state specification out of range
5  verification gap above tolerance
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import fields

import numpy as np

from . import fock
from . import gaussian as g
from . import measures as ms
from . import states, verify
from .errors import (
    ContractError,
    ConventionError,
    CutoffTooSmallError,
    DomainError,
    UnphysicalStateError,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNPHYSICAL = 2
EXIT_MALFORMED = 3
EXIT_SPEC = 4
EXIT_VERIFY = 5

CONVENTION = "vacuum=1/2"
ORDERING = "x1,p1,x2,p2"
ENTROPIC_KEYS = ("von_neumann", "mutual_information", "eof", "log_negativity")
SWEEP_COLUMNS = ("param", "mu", "S_V", "I", "n_minus", "n_plus", "nt_minus", "eof", "log_neg")
SPEC_PARAMS = tuple(f.name for f in fields(states.StateSpec) if f.name not in ("kind", "modes"))


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}", EXIT_MALFORMED)


# --------------------------------------------------------------------------
# covariance files


def read_covfile(path):
    """Parse a covariance file; ``"-"`` reads standard input.

    Returns ``(matrix, label)``.  Physicality is not checked here.
    """
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_MALFORMED) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})", EXIT_MALFORMED) from exc
    if not isinstance(doc, dict):
        raise CliError(f"{path}: expected a JSON object", EXIT_MALFORMED)
    unknown = set(doc) - {"convention", "ordering", "matrix", "label"}
    if unknown:
        raise CliError(f"{path}: unknown keys {sorted(unknown)}", EXIT_MALFORMED)
    for key in ("convention", "ordering", "matrix"):
        if key not in doc:
            raise CliError(f"{path}: missing required key {key!r}", EXIT_MALFORMED)
    if doc["convention"] != CONVENTION:
        raise CliError(
            f"{path}: convention must be {CONVENTION!r}, got {doc['convention']!r}; other conventions are not rescaled",
            EXIT_MALFORMED,
        )
    if doc["ordering"] != ORDERING:
        raise CliError(f"{path}: ordering must be {ORDERING!r}, got {doc['ordering']!r}", EXIT_MALFORMED)
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise CliError(f"{path}: label must be a string", EXIT_MALFORMED)
    rows = doc["matrix"]
    ok = (
        isinstance(rows, list)
        and len(rows) == 4
        and all(isinstance(r, list) and len(r) == 4 for r in rows)
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for r in rows for v in r)
    )
    if not ok:
        raise CliError(f"{path}: matrix must be a 4x4 array of numbers", EXIT_MALFORMED)
    m = np.array(rows, dtype=float)
    if not np.all(np.isfinite(m)):
        raise CliError(f"{path}: matrix contains non-finite entries", EXIT_MALFORMED)
    return m, label


def covfile_dict(sigma, label=None):
    doc = {
        "convention": CONVENTION,
        "ordering": ORDERING,
        "matrix": [[float(v) for v in row] for row in g.as_matrix(sigma)],
    }
    if label is not None:
        doc["label"] = label
    return doc


def _validated(m, path):
    try:
        return g.validate(m)
    except UnphysicalStateError as exc:
        raise CliError(
            f"{path}: unphysical covariance matrix; minimum eigenvalue of sigma + i Omega/2 = {exc.min_eigenvalue:.12g}",
            EXIT_UNPHYSICAL,
        ) from exc
    except ContractError as exc:
        raise CliError(f"{path}: {exc}", EXIT_MALFORMED) from exc


# --------------------------------------------------------------------------
# reports


def build_report(sigma, bits=False, label=None):
    """Flat dictionary of invariants, standard form and measures."""
    sigma = g.validate(sigma)
    da, db, dg, dsig = g.local_invariants(sigma)
    sf = g.standard_form(sigma)
    mr = ms.measure_report(sigma)
    report = {}
    if label is not None:
        report["label"] = label
    report.update(
        det_sigma=dsig,
        delta=g.delta_invariant(sigma),
        det_alpha=da,
        det_beta=db,
        det_gamma=dg,
        a=sf.a,
        b=sf.b,
        c1=sf.c1,
        c2=sf.c2,
    )
    report.update(mr.as_dict())
    report["symmetric"] = ms.is_symmetric(sigma)
    report["pure"] = bool(abs(mr.purity - 1.0) <= 1e-9)
    report["min_bona_fide_eig"] = g.bona_fide_min_eig(sigma.matrix)
    if bits:
        for key in ENTROPIC_KEYS:
            if report.get(key) is not None:
                report[key] = report[key] / math.log(2.0)
    report["entropy_unit"] = "bits" if bits else "nats"
    return {k: (float(v) if isinstance(v, (np.floating, np.integer)) else v) for k, v in report.items()}


def fmt(value):
    """Fixed 12-significant-digit rendering used by every text output."""
    if value is None:
        return "none"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


def report_text(report):
    return "".join(f"{k} = {fmt(v)}\n" for k, v in report.items())


def report_json(report):
    # repr-based float output is the shortest string that round-trips (<= 17 digits)
    return json.dumps(report, indent=2) + "\n"


def parse_report_json(text):
    return json.loads(text)


# --------------------------------------------------------------------------
# specs


def _spec_from_args(args, kind=None):
    kw = {}
    for name in SPEC_PARAMS:
        value = getattr(args, name, None)
        if value is not None:
            kw[name] = value
    nbar = getattr(args, "nbar", None)
    if nbar is not None:
        kw.setdefault("nbar1", nbar)
        kw.setdefault("nbar2", nbar)
    return states.StateSpec(kind or args.kind, **kw)


def _make_state(spec):
    try:
        return states.make(spec)
    except UnphysicalStateError as exc:
        raise CliError(
            f"parameters give an unphysical state; minimum eigenvalue of sigma + i Omega/2 = {exc.min_eigenvalue:.12g}",
            EXIT_SPEC,
        ) from exc
    except DomainError as exc:
        raise CliError(str(exc), EXIT_SPEC) from exc


def parse_range(text):
    """``start:stop:step`` with ``step > 0``; ``stop`` is included when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"range must be start:stop:step, got {text!r}", EXIT_MALFORMED)
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise CliError(f"range must be numeric, got {text!r}", EXIT_MALFORMED) from exc
    if not all(map(math.isfinite, (start, stop, step))) or step <= 0 or stop < start:
        raise CliError(f"range needs finite start <= stop and step > 0, got {text!r}", EXIT_SPEC)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


# --------------------------------------------------------------------------
# subcommands


def cmd_analyze(args, out):
    m, label = read_covfile(args.path)
    sigma = _validated(m, args.path)
    report = build_report(sigma, bits=args.bits, label=label)
    out.write(report_json(report) if args.json else report_text(report))
    return EXIT_OK


def cmd_validate(args, out):
    m, _ = read_covfile(args.path)
    sigma = _validated(m, args.path)
    out.write(f"valid: minimum eigenvalue of sigma + i Omega/2 = {fmt(g.bona_fide_min_eig(sigma.matrix))}\n")
    return EXIT_OK


def cmd_make(args, out):
    if args.kind == "random":
        if args.seed is None:
            raise CliError("--kind random needs --seed", EXIT_SPEC)
        try:
            sigma, _, _ = states.random_valid(args.seed, args.max_thermal, args.max_squeeze)
        except DomainError as exc:
            raise CliError(str(exc), EXIT_SPEC) from exc
    else:
        sigma = _make_state(_spec_from_args(args))
    text = json.dumps(covfile_dict(sigma, args.label), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def sweep_rows(kind, param, grid, fixed=None, bits=False):
    """One dictionary per grid point with the :data:`SWEEP_COLUMNS` keys."""
    if param not in SPEC_PARAMS:
        raise CliError(f"cannot sweep {param!r}; choose one of {', '.join(SPEC_PARAMS)}", EXIT_SPEC)
    scale = 1.0 / math.log(2.0) if bits else 1.0
    rows = []
    for value in grid:
        kw = dict(fixed or {})
        kw[param] = value
        try:
            sigma = _make_state(states.StateSpec(kind, **kw))
        except CliError as exc:
            raise CliError(f"{param} = {fmt(value)}: {exc}", EXIT_SPEC) from exc
        rep = ms.measure_report(sigma)
        rows.append(
            {
                "param": value,
                "mu": rep.purity,
                "S_V": rep.von_neumann * scale,
                "I": rep.mutual_information * scale,
                "n_minus": rep.n_minus,
                "n_plus": rep.n_plus,
                "nt_minus": rep.nt_minus,
                "eof": None if rep.eof is None else rep.eof * scale,
                "log_neg": rep.log_negativity * scale,
            }
        )
    return rows


def cmd_sweep(args, out):
    grid = parse_range(args.range)
    fixed = {name: getattr(args, name) for name in SPEC_PARAMS if getattr(args, name, None) is not None}
    if args.nbar is not None:
        fixed.setdefault("nbar1", args.nbar)
        fixed.setdefault("nbar2", args.nbar)
    fixed.pop(args.param, None)
    rows = sweep_rows(args.kind, args.param, grid, fixed, bits=args.bits)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else out
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            # eof is undefined for asymmetric states
            writer.writerow(["nan" if row[c] is None else fmt(row[c]) for c in SWEEP_COLUMNS])
    finally:
        if fh is not out:
            fh.close()
    return EXIT_OK


def _print_record(out, name, record):
    out.write(f"state {name}: path={record.path} cutoff={record.cutoff} trace_deficit={fmt(record.trace_deficit)}\n")
    out.write(f"  {'quantity':<20} {'closed_form':>20} {'fock_oracle':>20} {'gap':>20} {'tolerance':>20}  status\n")
    for c in record.checks:
        status = "info" if c.tolerance is None else ("ok" if c.ok else "FAIL")
        tol = "none" if c.tolerance is None else fmt(c.tolerance)
        out.write(
            f"  {c.quantity:<20} {fmt(c.closed_form):>20} {fmt(c.oracle):>20} {fmt(c.gap):>20} {tol:>20}  {status}\n"
        )


def cmd_verify(args, out):
    try:
        fock.check_conventions()
    except ConventionError as exc:
        raise CliError(f"Fock generator self-test failed: {exc}", EXIT_CONFIG) from exc
    if args.cutoff < 1:
        raise CliError("--cutoff must be >= 1", EXIT_SPEC)
    tolerances = {
        k: v
        for k, v in (
            ("entropy", args.tol_entropy),
            ("purity", args.tol_purity),
            ("mutual_information", args.tol_mi),
        )
        if v is not None
    }
    if args.corpus:
        targets = [
            (f"corpus[{c.index}]", c.sigma)
            for c in verify.oracle_corpus(size=args.size, seed=args.seed, cutoff=args.cutoff)
        ]
    elif args.path is not None:
        m, label = read_covfile(args.path)
        targets = [(label or args.path, _validated(m, args.path))]
    elif args.kind is not None:
        targets = [(args.kind, _make_state(_spec_from_args(args)))]
    else:
        raise CliError("verify needs a file path, --kind or --corpus", EXIT_MALFORMED)

    all_ok = True
    for name, sigma in targets:
        try:
            record = verify.verify_state(sigma, cutoff=args.cutoff, tolerances=tolerances)
        except CutoffTooSmallError as exc:
            raise CliError(f"state {name}: {exc}", EXIT_SPEC) from exc
        _print_record(out, name, record)
        all_ok &= record.ok
    out.write("verification " + ("passed" if all_ok else "FAILED") + "\n")
    return EXIT_OK if all_ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser


def _add_spec_flags(p, with_kind=True, kinds=states.KINDS):
    if with_kind:
        p.add_argument("--kind", choices=kinds, help="state family")
    p.add_argument("--nbar", type=float, help="thermal photon number of both modes")
    p.add_argument("--nbar1", type=float)
    p.add_argument("--nbar2", type=float)
    p.add_argument("--r", type=float, help="entangling two-mode squeezing")
    p.add_argument("--r1", type=float, help="local squeezing of mode 1")
    p.add_argument("--r2", type=float, help="local squeezing of mode 2")
    for name in ("a", "b", "c1", "c2"):
        p.add_argument(f"--{name}", type=float, help="standard-form entry")


def build_parser():
    parser = _Parser(prog="twomode", description="Analyze two-mode Gaussian covariance matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="print invariants and measures of a covariance file")
    p.add_argument("path", help="covariance file, or - for standard input")
    p.add_argument("--bits", action="store_true", help="entropic quantities in bits instead of nats")
    p.add_argument("--json", action="store_true", help="JSON output with round-trip float precision")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("validate", help="check that a covariance file describes a physical state")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("make", help="write the covariance file of a named state")
    p.add_argument("--kind", required=True, choices=states.KINDS + ("random",))
    _add_spec_flags(p, with_kind=False)
    p.add_argument("--seed", type=int, help="seed for --kind random")
    p.add_argument("--max-thermal", type=float, default=1.0)
    p.add_argument("--max-squeeze", type=float, default=0.5)
    p.add_argument("--label")
    p.add_argument("--out", help="output file (default: standard output)")
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("sweep", help="tabulate measures over a parameter grid as CSV")
    p.add_argument("--kind", required=True, choices=states.KINDS)
    p.add_argument("--param", required=True, help="StateSpec parameter to vary")
    p.add_argument("--range", required=True, help="start:stop:step")
    _add_spec_flags(p, with_kind=False)
    p.add_argument("--bits", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="compare closed forms with the Fock-space oracle")
    p.add_argument("path", nargs="?", help="covariance file")
    _add_spec_flags(p)
    p.add_argument("--corpus", action="store_true", help="verify the seeded oracle corpus")
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--seed", type=int, default=20031)
    p.add_argument("--cutoff", type=int, default=24)
    p.add_argument("--tol-entropy", type=float)
    p.add_argument("--tol-purity", type=float)
    p.add_argument("--tol-mi", type=float)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
