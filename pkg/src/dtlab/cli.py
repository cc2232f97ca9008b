"""Command line entry point.

Exit codes: 0 on success, 1 for usage or input errors, 2 when a computed
quantity violates the bound or identity it is checked against.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import charsum, decomposition, golden, integer_tuples, sieve_constants, stepanov, tuple_search
from .finite_field import FieldError, build_field
from .numtheory import is_prime, prime_power, primes_upto

DEFAULT_SEED = 0x5EED
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# Output


def to_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else row[k] for k in columns})
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}")


def _pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected a,k but got {text!r}")
    return vals[0], vals[1]


def _field(args):
    return build_field(args.p, args.r)


def _workers(args) -> int | None:
    return args.threads


# ---------------------------------------------------------------------------
# Subcommands


def cmd_field_info(args) -> int:
    F = _field(args)
    modulus = F.modulus if F.r > 1 else (0, 1)
    _emit(args, "".join(f"{k}={v}\n" for k, v in [
        ("p", F.p), ("r", F.r), ("q", F.q),
        ("modulus", ",".join(map(str, modulus))), ("generator", F.generator)]))
    return EXIT_OK


def cmd_charsum_verify(args) -> int:
    F = build_field(*prime_power(args.q))
    results = charsum.random_audit(F, args.d, args.trials, np.random.default_rng(args.seed))
    columns = ["check_name", "q", "d", "lhs", "rhs", "bound", "holds"]
    _emit(args, to_csv((vars(r) for r in results), columns))
    return EXIT_OK if all(r.holds for r in results) else EXIT_VIOLATION


def cmd_stepanov_verify(args) -> int:
    if len(args.set) != (2 if args.variant == stepanov.PRODUCT else 1):
        raise UsageError("the product variant takes --set A --set B; the restricted one a single --set")
    F = _field(args)
    B = args.set[1] if len(args.set) > 1 else args.set[0]
    cert = stepanov.verify_stepanov(F, args.set[0], B, args.lam, args.d, args.variant)
    _emit(args, to_json(cert.to_dict()))
    return EXIT_OK if cert.bound_holds else EXIT_VIOLATION


def _report_status(reports) -> int:
    bad = any(not r.all_hold or r.exact_matched is False for r in reports)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_tuple_max(args) -> int:
    rep = tuple_search.bound_report(_field(args), args.d, args.lam, args.strong)
    _emit(args, tuple_search.reports_to_csv([rep]))
    return _report_status([rep])


def cmd_tuple_sweep(args) -> int:
    keep = is_prime if args.primes_only else _is_prime_power
    qs = [q for q in range(2, args.q_max + 1) if keep(q)]
    reports = tuple_search.sweep(qs, args.d, _workers(args), strict=False)
    _emit(args, tuple_search.reports_to_csv(reports))
    return _report_status(reports)


def _is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ValueError:
        return False
    return True


def cmd_decompose(args) -> int:
    F = _field(args)
    target = decomposition.build_target(F, args.d, args.lam)
    result = decomposition.find_binary(target)
    out = {"q": F.q, "d": args.d, "lambda": args.lam, "target": target.T,
           "target_size": target.size, "lambda_in_subgroup": target.contains_zero_shift}
    out.update(result.to_dict())
    status = EXIT_OK
    if target.contains_zero_shift:
        out["sidon_audit"] = decomposition.sidon_audit(result, target)
        if not out["sidon_audit"]:
            status = EXIT_VIOLATION
    if args.ternary:
        tern = decomposition.find_ternary(target, result)
        out["ternary"] = {"exists": tern.exists, "search_complete": tern.search_complete,
                          "witness": None if tern.witness is None else [list(x) for x in tern.witness]}
    _emit(args, to_json(out))
    return status


def cmd_sieve_table(args) -> int:
    rows = sieve_constants.table_rows(args.k_min, args.k_max, _workers(args))
    _emit(args, sieve_constants.rows_to_csv(rows))
    return EXIT_OK


def cmd_figure_data(args) -> int:
    rows = sieve_constants.figure_rows(args.k_max, _workers(args))
    _emit(args, sieve_constants.rows_to_csv(rows))
    return EXIT_OK


def cmd_eta(args) -> int:
    rec = sieve_constants.sieve_record(args.k)
    r4 = sieve_constants.round4
    _emit(args, f"k={rec.k}\nphi_k={rec.phi_k}\neta_k={r4(rec.eta)}\nmu_k={r4(rec.mu)}\n"
                f"nu_k={r4(rec.nu)}\nprefix_len={rec.best_prefix_len}\n")
    ok = rec.eta <= rec.mu * (1 + 1e-12) and rec.eta <= (1 + 1e-12) / rec.k
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gallagher(args) -> int:
    A = _int_list(Path(args.set).read_text())
    N = args.N if args.N is not None else max(A)
    Q = args.Q
    if args.primes_mod:
        a, k = args.primes_mod
        primes = sieve_constants.primes_in_class(a, k, int(Q))
    else:
        primes = primes_upto(int(Q))
    res = sieve_constants.gallagher_bound(A, primes, Q, N)
    _emit(args, to_json({"size": res.size, "bound": res.bound if res.valid else None,
                         "valid": res.valid, "holds": res.holds,
                         "numerator": res.numerator, "denominator": res.denominator}))
    return EXIT_OK if res.holds else EXIT_VIOLATION


def cmd_int_tuple(args) -> int:
    query = integer_tuples.IntegerTupleQuery(args.k, args.n, args.N, args.strong)
    res = integer_tuples.search_max_tuple(query)
    _emit(args, to_json({"k": args.k, "n": args.n, "N": args.N, "strong": args.strong,
                         "size": res.size, "witness": res.witness}))
    return EXIT_OK


def cmd_golden_check(args) -> int:
    directory = Path(args.golden_dir) if args.golden_dir else None
    report = golden.check_table(args.table, args.k_max, directory, _workers(args))
    _emit(args, "\n".join(report.lines()) + "\n")
    return EXIT_OK if report.ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--config", help="key=value file supplying defaults for this subcommand")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $DTLAB_THREADS or 1)")

    parser = _Parser(prog="dtlab", description="Diophantine tuple computations")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def field_args(p, with_d=True, with_lambda=True):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--r", type=int, default=1)
        if with_d:
            p.add_argument("--d", type=int, required=True)
        if with_lambda:
            p.add_argument("--lambda", dest="lam", type=int, required=True)

    p = add("field-info", cmd_field_info, "modulus and generator of F_q")
    field_args(p, with_d=False, with_lambda=False)

    p = add("charsum-verify", cmd_charsum_verify, "seeded audit of character-sum identities")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)

    p = add("stepanov-verify", cmd_stepanov_verify, "auxiliary-polynomial certificate as JSON")
    field_args(p)
    p.add_argument("--set", type=_int_list, action="append", required=True,
                   help="comma-separated element indices; repeat for B")
    p.add_argument("--variant", choices=[stepanov.PRODUCT, stepanov.RESTRICTED], default=stepanov.PRODUCT)

    p = add("tuple-max", cmd_tuple_max, "exact maximum tuple and applicable bounds")
    field_args(p)
    p.add_argument("--strong", action="store_true")

    p = add("tuple-sweep", cmd_tuple_sweep, "bound report over all q up to --q-max")
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--d", type=int, action="append", help="restrict to these d (repeatable)")
    p.add_argument("--primes-only", action="store_true")

    p = add("decompose", cmd_decompose, "multiplicative decompositions of S_d - lambda")
    field_args(p)
    p.add_argument("--ternary", action="store_true")

    p = add("sieve-table", cmd_sieve_table, "eta, mu, nu and m_k as CSV")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, required=True)

    p = add("figure-data", cmd_figure_data, "nu_k against 3 phi(k) as CSV")
    p.add_argument("--k-max", type=int, default=1000)

    p = add("eta", cmd_eta, "eta, mu and nu for one k")
    p.add_argument("--k", type=int, required=True)

    p = add("gallagher", cmd_gallagher, "larger-sieve bound for a set of integers")
    p.add_argument("--set", required=True, help="file of integers separated by whitespace or commas")
    p.add_argument("--primes-mod", type=_pair, help="a,k: only primes congruent to a mod k")
    p.add_argument("--Q", type=float, required=True)
    p.add_argument("--N", type=int, default=None)

    p = add("int-tuple", cmd_int_tuple, "largest integer tuple below N")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--strong", action="store_true")

    p = add("golden-check", cmd_golden_check, "compare recomputed tables with the shipped values")
    p.add_argument("--table", choices=sorted(golden.TABLES), required=True)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--golden-dir", default=None)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Load --config (if given) as defaults of the chosen subcommand."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or not argv:
        return
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    chosen = subparsers.choices.get(argv[0])
    if chosen is None:
        return
    actions = {a.dest: a for a in chosen._actions}
    values = {}
    for key, raw in read_config(known.config).items():
        key = "lam" if key == "lambda" else key
        action = actions.get(key)
        if action is None:
            raise UsageError(f"unknown config key {key!r} for {argv[0]}")
        if isinstance(action, argparse._StoreTrueAction):
            values[key] = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            values[key] = [action.type(v) if action.type else v for v in raw.split(";")]
        else:
            values[key] = action.type(raw) if action.type else raw
        action.required = False
    chosen.set_defaults(**values)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except tuple_search.BoundViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (FieldError, stepanov.HypothesisError, stepanov.InapplicableError, ValueError,
            KeyError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
