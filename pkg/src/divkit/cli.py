"""Command-line front end.

Exit codes: 0 success, 1 verification or regression failure, 2 input error,
3 dimension mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import (
    BoundEstimate,
    beta_tolerance,
    certify,
    estimate_sup,
    lookup_entry,
    parse_ratio,
    run_regression,
)
from .distributions import Distribution, from_counts_smoothed, from_weights
from .divergences import closed_form, csiszar, partial_sum
from .errors import (
    DimensionMismatchError,
    DistributionError,
    DivergenceOverflowError,
    DivkitError,
    UnknownIdError,
)
from .generators import MeasureId, catalog_ids, generator_for
from .inequalities import (
    INEQUALITY_CHAINS,
    chain_names,
    check_identities,
    get_chain,
    run_chain,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DIM = 0, 1, 2, 3
SEED_ENV = "DIVKIT_SEED"
#: Probability-mode files may be off by this much before renormalisation.
PROB_SUM_TOL = 1e-9
REPORT_PARTIAL_SUMS = 20


class InputError(Exception):
    """Bad user input; carries the message printed before exiting with 2."""


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj: Any, out: List[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _encode(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            out.append("[" + ", ".join(
                format_float(float(v)) if isinstance(v, (float, np.floating)) else str(int(v))
                for v in obj) + "]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append(("," if i else "") + pad)
            _encode(v, out, indent, level + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits.

    Parsing the result and dumping it again reproduces it byte for byte.
    """
    out: List[str] = []
    _encode(obj, out, indent, 0)
    return "".join(out) + "\n"


def dumps_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    fields: List[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (format_float(v) if isinstance(v, float) else
                        ("" if v is None else v)) for k, v in r.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# input files
# ---------------------------------------------------------------------------

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _read_csv(path: str, text: str) -> List[tuple]:
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        cell = line.strip()
        if not cell or cell.startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([cell]))]
        cells = [c for c in cells if c != ""]
        if len(cells) != 1:
            raise InputError(f"{path}:{lineno}: expected one value per line, got {len(cells)}")
        if not _NUMBER.match(cells[0]):
            if not values and lineno == _first_content_line(text):
                continue  # header
            raise InputError(f"{path}:{lineno}: not a number: {cells[0]!r}")
        values.append((float(cells[0]), lineno))
    return values


def _first_content_line(text: str) -> int:
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip() and not line.strip().startswith("#"):
            return lineno
    return 0


def _read_json(path: str, text: str) -> List[tuple]:
    def line_of(pos: int) -> int:
        return text.count("\n", 0, pos) + 1

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    pos = text.find("[") + 1
    if isinstance(data, dict):
        for key in ("probs", "p", "counts", "values"):
            if key in data:
                data = data[key]
                m = re.search(r'"%s"\s*:\s*\[' % key, text)
                pos = m.end() if m else pos
                break
    if not isinstance(data, list):
        raise InputError(f"{path}:1: expected a JSON array of numbers")
    # locate each element so diagnostics can name its line
    dec = json.JSONDecoder()
    out = []
    for value in data:
        while text[pos] in " \t\r\n,":
            pos += 1
        _, end = dec.raw_decode(text, pos)
        lineno = line_of(pos)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InputError(f"{path}:{lineno}: not a number: {text[pos:end]}")
        out.append((float(value), lineno))
        pos = end
    return out


def read_values(path: str) -> List[tuple]:
    """``(value, line)`` pairs from a single-column CSV or a JSON array."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    stripped = text.lstrip()
    if path.lower().endswith(".json") or stripped.startswith(("[", "{")):
        return _read_json(path, text)
    return _read_csv(path, text)


def load_distribution(path: str, counts: bool = False, alpha: float = 0.5) -> Distribution:
    vals = read_values(path)
    if len(vals) < 2:
        raise InputError(f"{path}:{vals[0][1] if vals else 1}: need at least 2 values, got {len(vals)}")
    for v, line in vals:
        if not math.isfinite(v):
            raise InputError(f"{path}:{line}: value must be finite")
        if counts and v < 0:
            raise InputError(f"{path}:{line}: counts must be >= 0, got {v!r}")
        if not counts and v <= 0:
            raise InputError(f"{path}:{line}: probabilities must be > 0, got {v!r}"
                             " (use --counts to smooth zero counts)")
    arr = [v for v, _ in vals]
    try:
        if counts:
            return from_counts_smoothed(arr, alpha)
        total = math.fsum(arr)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InputError(f"{path}:{vals[-1][1]}: probabilities sum to {total!r}, not 1"
                             " (use --counts for unnormalised data)")
        return from_weights(arr)
    except DistributionError as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_dims(text: str) -> List[int]:
    """``"2..16"``, ``"2,4,8"`` or a mix such as ``"2..4,8"``."""
    out: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part.isdigit():
            out.append(int(part))
        else:
            raise argparse.ArgumentTypeError(f"bad dims entry {part!r}")
    if not out or min(out) < 2:
        raise argparse.ArgumentTypeError("dims must be nonempty and every dim >= 2")
    return out


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0) or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a finite number > 0")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


@dataclass
class Outcome:
    status: int
    payload: Any
    rows: List[dict]


def _pair(args) -> tuple:
    p = load_distribution(args.p, args.counts, args.alpha)
    q = load_distribution(args.q, args.counts, args.alpha)
    if p.dim != q.dim:
        raise DimensionMismatchError(f"{args.p} has {p.dim} entries but {args.q} has {q.dim}")
    return p, q


def cmd_compute(args) -> Outcome:
    p, q = _pair(args)
    records = []
    for name in args.measure:
        mid = MeasureId.parse(name)
        if args.path == "csiszar":
            rec = csiszar(generator_for(mid), p, q).to_record()
        else:
            rec = closed_form(mid, p, q).to_record()
        rec["path"] = args.path
        records.append(rec)
    payload = records[0] if len(records) == 1 else records
    return Outcome(EXIT_OK, payload, records)


def _profile(p: Distribution, q: Distribution) -> List[dict]:
    rows = []
    ids = list(catalog_ids(5))
    for mid in ids:
        try:
            rows.append({"measure": mid.name, "value": closed_form(mid, p, q).value})
        except DivergenceOverflowError as exc:
            rows.append({"measure": mid.name, "value": None, "error": str(exc)})
    for t in range(REPORT_PARTIAL_SUMS + 1):
        rows.append({"measure": f"partial:{t}", "value": partial_sum(t, p, q).value})
    return rows


def cmd_report(args) -> Outcome:
    p, q = _pair(args)
    rows = _profile(p, q)
    payload = {
        "dims": p.dim,
        "inputs_hash": f"{p.digest()}:{q.digest()}",
        "measures": rows,
    }
    return Outcome(EXIT_OK, payload, rows)


def cmd_verify(args) -> Outcome:
    names = list(INEQUALITY_CHAINS) if args.chain == "all" else [args.chain]
    chains = [get_chain(n) for n in names]
    reports = [run_chain(c, args.trials, args.dims, args.seed, args.tol) for c in chains]
    ok = all(r.verified for r in reports)
    dicts = [r.to_dict(args.max_violations) for r in reports]
    payload = dicts[0] if len(dicts) == 1 else {"verified": ok, "chains": dicts}
    rows = []
    for r in reports:
        for e in r.edges:
            rows.append({"chain": r.chain, **e.to_dict()})
    return Outcome(EXIT_OK if ok else EXIT_FAIL, payload, rows)


def cmd_identities(args) -> Outcome:
    rep = check_identities(args.trials, args.dims, args.seed, args.tol)
    rows = [r.to_dict() for r in rep.results]
    return Outcome(EXIT_OK if rep.ok else EXIT_FAIL, rep.to_dict(), rows)


def _estimate_dict(est: BoundEstimate, args) -> dict:
    d = est.to_dict()
    try:
        entry = lookup_entry(est.name)
    except UnknownIdError:
        entry = None
    if entry is not None:
        d["label"] = entry.label
        d["expected"] = str(entry.expected)
        d["matches"] = abs(est.beta_hat - float(entry.expected)) <= beta_tolerance(entry.expected)
    if args.certify:
        rep = certify(est.pair[0], est.pair[1], est.beta_hat + 1e-9, args.certify,
                      args.dims, args.seed, args.tol)
        d["certify"] = rep.to_dict()
    return d


def cmd_beta(args) -> Outcome:
    if args.all:
        results = run_regression(l_source=args.l_source)
        rows = [r.to_dict() for r in results]
        matched = sum(r.matches for r in results)
        payload = {"l_source": args.l_source, "matched": matched, "total": len(results),
                   "entries": rows}
        return Outcome(EXIT_OK if matched == len(results) else EXIT_FAIL, payload, rows)
    g1, g2 = parse_ratio(args.ratio)
    d = _estimate_dict(estimate_sup(g1, g2), args)
    return Outcome(EXIT_OK, d, [{k: v for k, v in d.items() if not isinstance(v, dict)}])


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_seed() -> Optional[str]:
    return os.environ.get(SEED_ENV)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divkit", description="Divergence measures, inequalities and ratio bounds.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def output(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    def inputs(sp):
        sp.add_argument("--p", required=True, help="first distribution (CSV column or JSON array)")
        sp.add_argument("--q", required=True, help="second distribution")
        sp.add_argument("--counts", action="store_true", help="inputs are counts; smooth with --alpha")
        sp.add_argument("--alpha", type=_positive_float, default=0.5, help="additive smoothing (default 0.5)")

    def trials(sp, default_trials, default_tol):
        sp.add_argument("--trials", type=_positive_int, default=default_trials)
        sp.add_argument("--dims", type=parse_dims, default=parse_dims("2..16"),
                        help='"2..16", "2,4,8" or a mix')
        sp.add_argument("--seed", type=_seed, default=None,
                        help=f"64-bit seed (default ${SEED_ENV}, else 0)")
        sp.add_argument("--tol", type=_positive_float, default=default_tol)

    sp = sub.add_parser("compute", help="evaluate measures on one pair")
    inputs(sp)
    sp.add_argument("--measure", action="append", required=True, help="measure name; repeatable")
    sp.add_argument("--path", choices=("closed", "csiszar"), default="closed")
    output(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("report", help="full divergence profile of one pair")
    inputs(sp)
    output(sp)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("verify", help="check an inequality chain on random pairs")
    sp.add_argument("--chain", required=True, help=f"one of {', '.join(chain_names())}, or 'all'")
    trials(sp, 100_000, 1e-10)
    sp.add_argument("--max-violations", type=int, default=None,
                    help="truncate the listed violations (default: list all)")
    output(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("identities", help="check the exact identities on random pairs")
    trials(sp, 10_000, 1e-12)
    output(sp)
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("beta", help="estimate sup f1''/f2''")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--ratio", help='e.g. "d:t-delta/d:k0-delta"')
    grp.add_argument("--all", action="store_true", help="run the tabled regression")
    sp.add_argument("--l-source", choices=("chain", "printed"), default="chain",
                    help="which L generators the regression uses")
    sp.add_argument("--certify", type=int, default=0, metavar="TRIALS",
                    help="also certify the estimate on this many random pairs")
    trials(sp, 10_000, 1e-10)
    output(sp)
    sp.set_defaults(func=cmd_beta)
    return ap


def _emit(outcome: Outcome, args) -> None:
    text = dumps_csv(outcome.rows) if args.format == "csv" else dumps(outcome.payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(None if argv is None else list(argv))
    if hasattr(args, "seed") and args.seed is None:
        env = _default_seed()
        try:
            args.seed = _seed(env) if env is not None else 0
        except argparse.ArgumentTypeError as exc:
            print(f"divkit: ${SEED_ENV}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if getattr(args, "chain", None) not in (None, "all") and args.chain not in chain_names():
        print(f"divkit: unknown chain {args.chain!r}; choose from {', '.join(chain_names())}",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        outcome = args.func(args)
    except InputError as exc:
        print(f"divkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionMismatchError as exc:
        print(f"divkit: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIM
    except (DivkitError, KeyError, ValueError, OverflowError, ArithmeticError) as exc:
        print(f"divkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(outcome, args)
    return outcome.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
