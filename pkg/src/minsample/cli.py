"""Command-line front end.

Exit codes: 0 success or report, 1 a verified inequality failed, 2 usage or
input-schema error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from contextlib import contextmanager
from typing import Iterator, Optional, TextIO

import numpy as np

from . import bounds
from . import quantum as qm
from . import suites
from .bounds import BoundReport
from .guess_oracle import ClassicalJoint, pguess_subset
from .sampler_sim import monte_carlo_pguess_subset, parse_seed
from .xor_code import subsets

SUITES = ("brw", "fourier", "theorem3", "listdecode", "lemma1", "audit")
RANDOMIZED_SUITES = ("lemma1",)


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return "%.12g" % x


def _k_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    return range(a, b + 1)


def _probability(text: str) -> float:
    """``0.001``, ``2^-10`` or ``2**-10``."""
    m = re.fullmatch(r"\s*2\s*(?:\^|\*\*)\s*(-?\d+(?:\.\d+)?)\s*", text)
    try:
        value = 2.0 ** float(m.group(1)) if m else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in (0, 1], got {value}")
    return value


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tol(text: str) -> float:
    value = float(text)
    if not value >= np.finfo(float).eps:
        raise argparse.ArgumentTypeError(f"tolerance must be >= machine epsilon, got {text}")
    return value


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _load_json(path: str) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# -- bounds-compare -----------------------------------------------------------

CSV_HEADER = ("k", "cor2_bound", "brw_bound", "nayak_max_p", "cor2_vacuous", "brw_vacuous")


def cmd_bounds_compare(args: argparse.Namespace) -> int:
    n, m = args.n, args.m
    if n < 1 or not 0 <= m <= n:
        raise UsageError(f"need n >= 1 and 0 <= m <= n, got n={n}, m={m}")
    if args.k_range and (args.k_range.start < 1 or args.k_range.stop - 1 > n):
        raise UsageError(f"k range must lie within [1, n={n}]")
    if args.eta <= 2 * math.log(2):
        raise UsageError(f"--eta must exceed 2 ln 2, got {args.eta}")
    print(f"note: brw_bound is a {bounds.NON_RIGOROUS}", file=sys.stderr)
    nayak = bounds.nayak_max_p(n, m)
    with _output(args.out) as out:
        out.write(",".join(CSV_HEADER) + "\n")
        for k in args.k_range:
            cor = bounds.rac_success_bound(n, m, k)
            brw = bounds.brw_bound(n, m, k, args.eta, args.c_eta)
            row = (str(k), fmt(cor.value), fmt(brw.value), fmt(nayak), str(int(cor.vacuous)), str(int(brw.vacuous)))
            out.write(",".join(row) + "\n")
    return 0


# -- sampling-threshold ----------------------------------------------------------------


def _report_lines(report: BoundReport) -> list[str]:
    lines = [f"[{report.name}] " + " ".join(f"{k}={v}" for k, v in report.params.items())]
    lines.append(f"  value            {fmt(report.value)}")
    for key, val in report.outputs.items():
        if isinstance(val, float):
            val = fmt(val)
        lines.append(f"  {key:<16} {val}")
    lines.append(f"  vacuous          {'yes' if report.vacuous else 'no'}")
    if report.preconditions:
        lines.append("  preconditions:")
        for p in report.preconditions:
            status = "ok  " if p.satisfied else "FAIL"
            lines.append(f"    {status} {p.name:<42} margin={fmt(p.margin)}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    return lines


def cmd_sampling_threshold(args: argparse.Namespace) -> int:
    n, k = args.n, args.k
    if not 1 <= k <= n:
        raise UsageError(f"need 1 <= k <= n, got k={k}, n={n}")
    reports = []
    if args.c is not None:
        if not 0.0 <= args.c <= 1.0:
            raise UsageError(f"--c must lie in [0, 1], got {args.c}")
        cor = bounds.corollary1_bound(n, k, args.c)
        reports.append(cor)
        if cor.sampled_hmin > 0:
            reports.append(bounds.main_sampling_threshold(n, k, 2.0 ** -cor.sampled_hmin))
    else:
        reports.append(bounds.main_sampling_threshold(n, k, args.p))
    lines = []
    for r in reports:
        lines.extend(_report_lines(r))
    with _output(args.out) as out:
        out.write("\n".join(lines) + "\n")
    return 0


# -- rac-eval -----------------------------------------------------------------


def _parse_strategies(data: object, encoding: qm.RacEncoding, k: int) -> dict:
    """``{"k": int, "povms": [{"subset": [..], "elements": [matrix, ...]}]}``."""
    if not isinstance(data, dict):
        raise ValueError("(root): expected an object")
    if data.get("k") != k:
        raise ValueError(f"k: strategies file is for k={data.get('k')!r}, requested k={k}")
    povms = data.get("povms")
    if not isinstance(povms, list):
        raise ValueError("povms: expected a list")
    d = 1 << encoding.m
    out = {}
    for i, item in enumerate(povms):
        if not isinstance(item, dict) or "subset" not in item or "elements" not in item:
            raise ValueError(f"povms[{i}]: expected an object with 'subset' and 'elements'")
        t = tuple(item["subset"])
        elements = item["elements"]
        if not isinstance(elements, list) or len(elements) != 1 << k:
            raise ValueError(f"povms[{i}].elements: expected {1 << k} matrices")
        mats = np.zeros((1 << k, d, d), dtype=np.complex128)
        for v, mat in enumerate(elements):
            where = f"povms[{i}].elements[{v}]"
            if not isinstance(mat, list) or len(mat) != d or any(not isinstance(row, list) or len(row) != d for row in mat):
                raise ValueError(f"{where}: expected a {d}x{d} matrix of [re, im]")
            for r, row in enumerate(mat):
                for c, e in enumerate(row):
                    if not (isinstance(e, list) and len(e) == 2 and all(isinstance(p, (int, float)) for p in e)):
                        raise ValueError(f"{where}[{r}][{c}]: expected [re, im]")
                    mats[v, r, c] = complex(e[0], e[1])
        try:
            qm.check_povm(mats)
        except ValueError as exc:
            raise ValueError(f"povms[{i}]: {exc}") from None
        out[t] = mats
    missing = [t for t in subsets(encoding.n, k) if t not in out]
    if missing:
        raise ValueError(f"povms: no measurement for subset {list(missing[0])}")
    return out


def cmd_rac_eval(args: argparse.Namespace) -> int:
    try:
        encoding = qm.RacEncoding.from_dict(_load_json(args.encoding))
    except ValueError as exc:
        raise UsageError(f"{args.encoding}: {exc}") from None
    k = args.k
    if not 1 <= k <= encoding.n:
        raise UsageError(f"need 1 <= k <= n={encoding.n}, got k={k}")
    if args.strategies:
        try:
            strategies = _parse_strategies(_load_json(args.strategies), encoding, k)
        except ValueError as exc:
            raise UsageError(f"{args.strategies}: {exc}") from None
        source = "file"
    elif k == 1 and not args.pgm:
        strategies = qm.helstrom_strategies(encoding)
        source = "helstrom"
    else:
        strategies = qm.pgm_strategies(encoding, k)
        source = "pgm"
    success = qm.rac_success(encoding, k, strategies)
    n, m = encoding.n, encoding.m
    m_eff = min(m, n)
    cor = bounds.rac_success_bound(n, m_eff, k)
    lines = [
        f"n={n} m={m} k={k} measurements={source}",
        f"success          {fmt(success)}",
        f"nayak_max_p      {fmt(bounds.nayak_max_p(n, m))}",
        f"cor2_bound       {fmt(cor.value)}{' (vacuous)' if cor.vacuous else ''}",
    ]
    if args.eta * m_eff / n < 1:
        brw = bounds.brw_bound(n, m_eff, k, args.eta, args.c_eta)
        lines.append(f"brw_bound        {fmt(brw.value)}{' (vacuous)' if brw.vacuous else ''}  [{bounds.NON_RIGOROUS}]")
    else:
        lines.append("brw_bound        vacuous (eta*m/n >= 1)")
    with _output(args.out) as out:
        out.write("\n".join(lines) + "\n")
    return 0


# -- verify -------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite_flag or args.suite
    if suite is None:
        raise UsageError("choose a suite: " + ", ".join(SUITES + ("all",)))
    chosen = SUITES if suite == "all" else (suite,)
    if args.seed is None and any(s in RANDOMIZED_SUITES for s in chosen):
        raise UsageError(f"suite {suite!r} is randomized and requires --seed")
    tol = args.tol
    families = None

    def lemma4_instances():
        nonlocal families
        if families is None:
            random_joints = args.random_joints if args.random_joints is not None else (100 if args.seed is not None else 0)
            families = list(
                suites.lemma4_families(args.n_max, tuple(range(1, args.m_max + 1)), random_joints=random_joints, seed=args.seed)
            )
        return families

    results = []
    for name in chosen:
        if name == "brw":
            results.append(suites.run_brw(lemma4_instances(), tol or suites.DEFAULT_TOL))
        elif name == "fourier":
            results.append(suites.run_fourier(lemma4_instances(), tol or suites.DEFAULT_TOL))
        elif name == "theorem3":
            fams = [f for f in lemma4_instances() if f.n <= 5]
            results.append(suites.run_theorem3(fams, tol or suites.DEFAULT_TOL))
        elif name == "listdecode":
            results.append(suites.run_listdecode(min(args.n_max + 1, 4)))
        elif name == "lemma1":
            results.append(suites.run_lemma1(args.seed, tol=tol or 1e-10))
        elif name == "audit":
            results.append(suites.run_audit(args.k_max))
    failed = False
    with _output(args.out) as out:
        for res in results:
            for v in res.violations:
                out.write(json.dumps(v, sort_keys=True) + "\n")
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} {res.suite}: {res.checked} checks, {len(res.violations)} violations", file=sys.stderr)
            failed |= not res.passed
    return 1 if failed else 0


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    data = _load_json(args.joint)
    if not isinstance(data, dict):
        raise UsageError(f"{args.joint}: (root): expected an object")
    try:
        joint = ClassicalJoint.from_dict(data)
    except ValueError as exc:
        raise UsageError(f"{args.joint}: {exc}") from None
    if not 0 <= args.k <= joint.n:
        raise UsageError(f"need 0 <= k <= n={joint.n}, got k={args.k}")
    est = monte_carlo_pguess_subset(joint, args.k, args.trials, args.seed)
    header = ["k", "trials", "estimate", "stderr"]
    row = [str(args.k), str(est.trials), fmt(est.estimate), fmt(est.stderr)]
    if joint.n <= 12:
        header.append("exact")
        row.append(fmt(float(pguess_subset(joint, args.k))))
    with _output(args.out) as out:
        out.write(",".join(header) + "\n" + ",".join(row) + "\n")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minsample", description="Min-entropy sampling bounds and exhaustive verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds-compare", help="CSV table of RAC success bounds over a range of k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k-range", type=_k_range, required=True, help="inclusive range a..b")
    p.add_argument("--eta", type=float, default=1.4)
    p.add_argument("--c-eta", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds_compare)

    p = sub.add_parser("sampling-threshold", help="min-entropy threshold for sampling, with precondition ledger")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=_probability)
    group.add_argument("--c", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sampling_threshold)

    p = sub.add_parser("rac-eval", help="exact success probability of a random access code")
    p.add_argument("encoding", help='JSON {"n", "m", "states"}')
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strategies", help='JSON {"k", "povms": [{"subset", "elements"}]}')
    group.add_argument("--pgm", action="store_true", help="pretty good measurement per subset")
    p.add_argument("--eta", type=float, default=1.4)
    p.add_argument("--c-eta", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rac_eval)

    p = sub.add_parser("verify", help="run exhaustive verification suites")
    p.add_argument("suite", nargs="?", choices=SUITES + ("all",))
    p.add_argument("--suite", dest="suite_flag", choices=SUITES + ("all",))
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=2)
    p.add_argument("--k-max", type=int, default=10_000)
    p.add_argument("--random-joints", type=int)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--tol", type=_tol)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the subset guessing probability")
    p.add_argument("--joint", required=True, help='JSON {"n", "w_size", "probs"}')
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
