"""spcheck command line: run checks, emit versioned JSON or TSV reports.

Exit codes: 0 all checks pass, 1 some check failed, 2 a budget refusal and
no failures, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Callable

from ._budget import BudgetExceeded, default_budget
from .classparams import AutSpec, admissible_q1, count_classes, count_invariant, enumerate_params
from .gf import prime_power
from .series import (build_class_number, build_gend, build_genfun_c, build_partition,
                     coefficient_table, verify_fplus_closed_form, verify_genfun_factorization,
                     verify_jacobi, verify_main_identity)
from .symbols import count_degenerate, dprime_convolution, phi, phi_closed_form, verify_phi_series
from .weyl.twist import TwistSpec, extended_weyl_checks, regular_numbers, twist_setting_checks
from .weyl.wreath import check_mu, factor_action, normalizer_check, stabilizer_grid

SCHEMA = "spcheck.report/1"
PASS, FAIL, SKIP = "pass", "fail", "skipped-budget"
EXIT = {PASS: 0, FAIL: 1, SKIP: 2}
EXIT_USAGE = 3


class UsageError(Exception):
    pass


@dataclass
class Check:
    key: str
    status: str
    value: Any = None
    expected: Any = None
    witness: Any = None

    def to_dict(self) -> dict:
        out = {"status": self.status}
        for name in ("value", "expected", "witness"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


def _check(key: str, value: Any, expected: Any, witness: Any = None) -> Check:
    if value == expected:
        return Check(key, PASS, value, expected)
    return Check(key, FAIL, value, expected,
                 witness if witness is not None else {"value": value, "expected": expected})


@dataclass
class TaskResult:
    checks: list[Check] = field(default_factory=list)
    table: dict | None = None  # {"columns": [...], "rows": [[...], ...]}
    millis: int = 0


@dataclass
class Report:
    command: dict
    checks: list[Check]
    table: dict | None = None
    timings: dict[str, int] | None = None

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if SKIP in statuses:
            return SKIP
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT[self.status]

    def to_dict(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.key)
        out = {
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status,
            "summary": {s: sum(c.status == s for c in checks) for s in (PASS, FAIL, SKIP)},
            "checks": {c.key: c.to_dict() for c in checks},
        }
        if self.table is not None:
            out["table"] = self.table
        if self.timings is not None:
            out["timings_ms"] = self.timings
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_tsv(self) -> str:
        def cell(v):
            return str(v) if isinstance(v, (int, str)) else json.dumps(v, sort_keys=True,
                                                                       separators=(",", ":"))
        lines = []
        if self.table is not None:
            lines.append("\t".join(self.table["columns"]))
            lines += ["\t".join(cell(v) for v in row) for row in self.table["rows"]]
        else:
            lines.append("key\tstatus\tvalue\texpected")
            for c in sorted(self.checks, key=lambda c: c.key):
                lines.append("\t".join([c.key, c.status, cell(c.value) if c.value is not None else "",
                                        cell(c.expected) if c.expected is not None else ""]))
        return "\n".join(lines) + "\n"


# -- tasks: plain functions of JSON-able keyword arguments -------------------------

def task_classes_count(n: int, q: int, oracle: bool = False, budget: int | None = None,
                       cap: int | None = None) -> TaskResult:
    key = f"classes.count.n{n}.q{q}"
    count = count_classes(n, q, budget)
    res = TaskResult([_check(key, count, build_class_number(n)[n](q))])
    if oracle:
        from .matgrp import DEFAULT_CAP, oracle_class_census
        census = oracle_class_census(n, q, cap or DEFAULT_CAP)
        ours = {p.to_json() for p in enumerate_params(n, q, budget)}
        theirs = {p.to_json() for p in census.sizes}
        diff = {"only_enumerated": sorted(ours - theirs), "only_oracle": sorted(theirs - ours)}
        chk = _check(key + ".oracle", census.class_count, count, diff)
        if chk.status == PASS and (diff["only_enumerated"] or diff["only_oracle"]):
            chk = Check(chk.key, FAIL, chk.value, chk.expected, diff)
        res.checks.append(chk)
    return res


def task_classes_invariant(n: int, q: int, q1: int, diagonal: bool = False, oracle: bool = False,
                           method: str = "auto", budget: int | None = None,
                           cap: int | None = None) -> TaskResult:
    aut = AutSpec(q1, diagonal)
    key = f"classes.invariant.n{n}.q{q}.q1_{q1}" + (".delta" if diagonal else "")
    value = count_invariant(n, q, aut, method, budget)
    res = TaskResult()
    if diagonal:
        res.checks.append(_check(key, value, build_genfun_c(n)[n](q1)))
    else:
        # without delta there is no closed form; compare two counting routes instead
        other = "orders" if method != "orders" else "explicit"
        res.checks.append(_check(key, value, count_invariant(n, q, aut, other, budget)))
    if oracle:
        from .matgrp import DEFAULT_CAP, oracle_invariant_count
        res.checks.append(_check(key + ".oracle", oracle_invariant_count(n, q, aut, cap or DEFAULT_CAP),
                                 value))
    return res


def _series_table(s) -> dict:
    return {"columns": ["n", "coefficients", "polynomial"],
            "rows": [[r["n"], r["coefficient"], repr(c)] for r, c in zip(coefficient_table(s), s.coeffs)]}


def _identity_check(key: str, rep) -> Check:
    if rep.ok:
        return Check(key, PASS, rep.order)
    return Check(key, FAIL, rep.order, witness=rep.to_dict()["mismatches"][:5])


def task_series(kind: str, order: int) -> TaskResult:
    if kind == "genfun":
        res = TaskResult(table=_series_table(build_genfun_c(order)))
        res.checks += [_identity_check(f"series.genfun-factorization.order{order}",
                                       verify_genfun_factorization(order)),
                       _identity_check(f"series.fplus-closed-form.order{order}",
                                       verify_fplus_closed_form(order))]
        return res
    if kind == "gend":
        res = TaskResult(table=_series_table(build_gend(order)))
        res.checks.append(_identity_check(f"series.main-identity.order{order}",
                                          verify_main_identity(order)))
        return res
    if kind == "jacobi":
        return TaskResult([_identity_check(f"series.jacobi.order{order}", verify_jacobi(order))])
    if kind == "main-identity":
        return TaskResult([_identity_check(f"series.main-identity.order{order}",
                                           verify_main_identity(order))])
    raise UsageError(f"unknown series kind {kind!r}")


def task_symbols(kind: str, n: int, upto: bool = False, budget: int | None = None,
                 method: str = "auto") -> TaskResult:
    res = TaskResult()
    lo = 0 if upto else n
    if kind == "phi":
        closed = phi_closed_form(n)
        rows = []
        for k in range(lo, n + 1):
            value = phi(k, budget, method)
            rows.append([k, value])
            res.checks.append(_check(f"symbols.phi.n{k}", value, closed[k](0)))
        res.table = {"columns": ["n", "phi"], "rows": rows}
    elif kind == "degenerate":
        p = build_partition(n)
        rows = []
        for m in range(lo, n + 1):
            value = count_degenerate(2 * m)
            rows.append([m, value])
            res.checks.append(_check(f"symbols.degenerate.m{m}", value, p[m](0)))
        res.table = {"columns": ["m", "degenerate"], "rows": rows}
    elif kind == "phi-series":
        res.checks.append(_identity_check(f"symbols.phi-series.order{n}",
                                          verify_phi_series(n, budget, method)))
    elif kind == "dprime":
        gend = build_gend(n)
        rows = []
        for k in range(lo, n + 1):
            key = f"symbols.dprime.n{k}"
            try:
                value = dprime_convolution(k, budget)
            except ArithmeticError as exc:
                res.checks.append(Check(key, FAIL, witness={"halving": str(exc)}))
                continue
            rows.append([k, value.to_list(), repr(value)])
            res.checks.append(_check(key, value.to_list(), gend[k].to_list()))
        res.table = {"columns": ["n", "coefficients", "polynomial"], "rows": rows}
    else:
        raise UsageError(f"unknown symbols kind {kind!r}")
    return res


def task_weyl_check(l: int, d: int, qs: list[int], nonregular: bool = False,
                    budget: int | None = None) -> TaskResult:
    spec = TwistSpec(l, d, regular=not nonregular)
    prefix = f"weyl.l{l}.d{d}"
    if nonregular:
        checks = twist_setting_checks(spec)
        return TaskResult([Check(f"{prefix}.{k}", PASS if v else FAIL, v, witness=None if v else
                                 {"l": l, "d": d}) for k, v in checks.items()])
    rep = extended_weyl_checks(spec, tuple(qs), budget)
    res = TaskResult()
    for name, ok in rep.checks.items():
        res.checks.append(Check(f"{prefix}.{name}", PASS if ok else FAIL, ok,
                                witness=None if ok else rep.data))
    return res


def task_weyl_stabilizers(l: int, d: int, q: int, brute_limit: int = 100_000) -> TaskResult:
    spec = TwistSpec(l, d)
    act = factor_action(spec, q)
    key = f"weyl.stabilizers.l{l}.d{d}.q{q}"
    grid = stabilizer_grid(spec, q, brute_limit=brute_limit)
    inv = pow(act.g, act.order // 2, act.N)
    return TaskResult([
        Check(key, PASS if grid.ok else FAIL, {"tuples": grid.tuples, "orbits": grid.orbits,
                                               "brute_checked": grid.brute_checked},
              witness=None if grid.ok else grid.to_dict()),
        _check(key + ".involution", inv, (-1) % act.N),
    ])


def task_weyl_normalizers(l: int, d: int, q: int) -> TaskResult:
    import itertools
    spec = TwistSpec(l, d)
    act = factor_action(spec, q)
    key = f"weyl.normalizers.l{l}.d{d}.q{q}"
    bad = []
    total = pairs = 0
    for xi in itertools.product(range(act.N), repeat=spec.a):
        rep = normalizer_check(spec, q, xi)
        total += 1
        pairs += rep.pair_matches is not None
        if not rep.ok:
            bad.append(list(xi))
    value = {"tuples": total, "with_nu": pairs}
    return TaskResult([Check(key, FAIL if bad else PASS, value,
                             witness={"xi": bad[:10]} if bad else None)])


def task_weyl_mu(f: int, n: int) -> TaskResult:
    rep = check_mu(f, n)
    key = f"weyl.mu.f{f}.n{n}"
    value = {"homomorphism": rep.homomorphism, "order_divides_2": rep.order_divides_2,
             "nontrivial_on_base": rep.nontrivial_on_base, "trivial_on_top": rep.trivial_on_top}
    return TaskResult([Check(key, PASS if rep.ok else FAIL, value,
                             witness=None if rep.ok else value)])


TASKS: dict[str, Callable[..., TaskResult]] = {
    "classes.count": task_classes_count,
    "classes.invariant": task_classes_invariant,
    "series": task_series,
    "symbols": task_symbols,
    "weyl.check": task_weyl_check,
    "weyl.stabilizers": task_weyl_stabilizers,
    "weyl.normalizers": task_weyl_normalizers,
    "weyl.mu": task_weyl_mu,
}


def run_task(name: str, kwargs: dict) -> TaskResult:
    """Run one task, turning a budget refusal into a skipped check."""
    start = time.perf_counter()
    try:
        res = TASKS[name](**kwargs)
    except BudgetExceeded as exc:
        label = name + "[" + ",".join(f"{k}={v}" for k, v in sorted(kwargs.items())
                                      if k not in ("budget", "cap") and v is not None) + "]"
        res = TaskResult([Check(label, SKIP, witness={"reason": str(exc), "needed": exc.needed,
                                                      "budget": exc.budget,
                                                      "progress": exc.progress})])
    res.millis = int((time.perf_counter() - start) * 1000)
    return res


# -- the suite -----------------------------------------------------------------

def _stabilizer_grids(max_l: int, qs: tuple[int, ...], limit: int = 100_000,
                      tuple_limit: int = 200_000) -> list[tuple[str, dict]]:
    out = []
    for l in range(1, max_l + 1):
        for d in regular_numbers(l):
            spec = TwistSpec(l, d)
            if (2 * spec.d0) ** spec.a * factorial(spec.a) > limit:
                continue
            for q in qs:
                if (q ** spec.d0 - spec.eps) ** spec.a <= tuple_limit:
                    out.append(("weyl.stabilizers", {"l": l, "d": d, "q": q}))
    return out


def suite_tasks(tier: str, budget: int | None) -> list[tuple[str, dict]]:
    b = {"budget": budget}
    tasks: list[tuple[str, dict]] = []
    if tier == "quick":
        for n, q in [(1, 3), (1, 5), (1, 9), (2, 3)]:
            tasks.append(("classes.count", {"n": n, "q": q, "oracle": n == 1, **b}))
        for q in (3, 5, 9):
            for q1 in admissible_q1(q):
                for n in range(1, 4):
                    tasks.append(("classes.invariant", {"n": n, "q": q, "q1": q1, "diagonal": True, **b}))
        for n, q, q1 in [(1, 3, 3), (1, 5, 5), (1, 9, 3)]:
            tasks.append(("classes.invariant", {"n": n, "q": q, "q1": q1, "diagonal": True,
                                                "oracle": True, **b}))
        tasks += [("series", {"kind": "main-identity", "order": 30}),
                  ("series", {"kind": "jacobi", "order": 60}),
                  ("series", {"kind": "genfun", "order": 20}),
                  ("symbols", {"kind": "phi-series", "n": 20, **b}),
                  ("symbols", {"kind": "degenerate", "n": 10, "upto": True, **b}),
                  ("symbols", {"kind": "dprime", "n": 8, "upto": True, **b})]
        max_l, qs = 3, (3, 5)
    elif tier == "full":
        for n, q in [(1, 3), (1, 5), (1, 9), (2, 3)]:
            tasks.append(("classes.count", {"n": n, "q": q, "oracle": True, **b}))
        for q in (3, 5, 9, 27):
            for q1 in admissible_q1(q):
                for n in range(1, 6):
                    tasks.append(("classes.invariant", {"n": n, "q": q, "q1": q1, "diagonal": True, **b}))
        for n, q, q1 in [(1, 3, 3), (1, 5, 5), (1, 9, 3), (1, 9, 9), (2, 3, 3)]:
            tasks.append(("classes.invariant", {"n": n, "q": q, "q1": q1, "diagonal": True,
                                                "oracle": True, **b}))
        tasks += [("series", {"kind": "main-identity", "order": 30}),
                  ("series", {"kind": "jacobi", "order": 60}),
                  ("series", {"kind": "genfun", "order": 30}),
                  ("symbols", {"kind": "phi-series", "n": 40, **b}),
                  ("symbols", {"kind": "degenerate", "n": 10, "upto": True, **b}),
                  ("symbols", {"kind": "dprime", "n": 12, "upto": True, **b})]
        max_l, qs = 5, (3, 5, 9)
    else:
        raise UsageError(f"unknown tier {tier!r}")
    for l in range(1, max_l + 1):
        for d in regular_numbers(l):
            tasks.append(("weyl.check", {"l": l, "d": d, "qs": [3, 5, 9], **b}))
    tasks += _stabilizer_grids(max_l, qs)
    for l, d, q in [(2, 1, 5), (2, 2, 3), (3, 2, 3)]:
        tasks.append(("weyl.normalizers", {"l": l, "d": d, "q": q}))
    for f in (2, 4, 6):
        for n in (1, 2, 3):
            tasks.append(("weyl.mu", {"f": f, "n": n}))
    return tasks


def _task_id(name: str, kwargs: dict) -> str:
    return name + json.dumps(kwargs, sort_keys=True, separators=(",", ":"))


def run_tasks(tasks: list[tuple[str, dict]], jobs: int = 1
              ) -> tuple[list[Check], dict[str, int], list[dict | None]]:
    """Run tasks (in worker processes when jobs > 1) and merge checks by key."""
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_task, [t[0] for t in tasks], [t[1] for t in tasks]))
    else:
        results = [run_task(name, kw) for name, kw in tasks]
    checks: dict[str, Check] = {}
    timings = {}
    for (name, kw), res in zip(tasks, results):
        timings[_task_id(name, kw)] = res.millis
        for c in res.checks:
            if c.key in checks and checks[c.key].to_dict() != c.to_dict():
                raise AssertionError(f"conflicting results for check {c.key}")
            checks[c.key] = c
    return list(checks.values()), timings, [r.table for r in results]


# -- argument handling -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--budget", type=int, help="enumeration budget (default: $SPCHECK_BUDGET or built-in)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    classes = sub.add_parser("classes", help="conjugacy-class parameter counts")
    classes.add_argument("what", choices=["count", "invariant"])
    classes.add_argument("--n", type=int, required=True)
    classes.add_argument("--q", type=int, required=True)
    classes.add_argument("--q1", type=int)
    classes.add_argument("--diagonal", action="store_true", help="compose with the diagonal automorphism")
    classes.add_argument("--oracle", action="store_true", help="also enumerate the matrix group and diff")
    classes.add_argument("--method", choices=["auto", "explicit", "orders", "literal"], default="auto")
    classes.add_argument("--cap", type=int, help="matrix-group enumeration cap")
    _common(classes)

    series = sub.add_parser("series", help="generating functions and identities")
    series.add_argument("what", choices=["genfun", "gend", "jacobi", "main-identity"])
    series.add_argument("--order", type=int, required=True)
    _common(series)

    symbols = sub.add_parser("symbols", help="unipotent symbol counts")
    symbols.add_argument("what", choices=["phi", "degenerate", "phi-series", "dprime"])
    symbols.add_argument("--n", type=int, help="rank n (phi, dprime), m (degenerate) or truncation order")
    symbols.add_argument("--order", type=int, help="alias of --n for phi-series")
    symbols.add_argument("--upto", action="store_true", help="tabulate every value from 0 to n")
    symbols.add_argument("--method", choices=["auto", "pairs", "rows"], default="auto")
    _common(symbols)

    weyl = sub.add_parser("weyl", help="extended Weyl group and wreath-product checks")
    weyl.add_argument("what", choices=["check", "stabilizers", "normalizers", "mu"])
    weyl.add_argument("--l", type=int)
    weyl.add_argument("--d", type=int)
    weyl.add_argument("--q", type=int, action="append", help="repeatable; default 3, 5, 9")
    weyl.add_argument("--f", type=int, help="cyclic factor order for mu")
    weyl.add_argument("--n", type=int, help="number of wreath factors for mu")
    weyl.add_argument("--nonregular", action="store_true")
    _common(weyl)

    suite = sub.add_parser("suite", help="run a fixed battery of checks")
    suite.add_argument("--tier", choices=["quick", "full"], default="quick")
    suite.add_argument("--jobs", type=int, default=1)
    _common(suite)
    return parser


def _odd_prime_power(q: int, name: str = "q") -> None:
    try:
        p, _ = prime_power(q)
    except ValueError:
        raise UsageError(f"{name} = {q} is not a prime power") from None
    if p == 2:
        raise UsageError(f"{name} = {q}: characteristic 2 is not supported")


def _need(args, *names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {args.what} needs {', '.join(missing)}")


def plan(args) -> tuple[dict, list[tuple[str, dict]]]:
    """Validate arguments and turn them into (command echo, task list)."""
    budget = args.budget
    if budget is not None and budget <= 0:
        raise UsageError("--budget must be positive")
    b = {"budget": budget}
    cmd = args.command
    if cmd == "classes":
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        _odd_prime_power(args.q)
        if args.what == "count":
            tasks = [("classes.count", {"n": args.n, "q": args.q, "oracle": args.oracle,
                                        "cap": args.cap, **b})]
        else:
            _need(args, "q1")
            if args.q1 not in admissible_q1(args.q):
                raise UsageError(f"q1 = {args.q1} is not admissible for q = {args.q} "
                                 f"(choose from {admissible_q1(args.q)})")
            tasks = [("classes.invariant", {"n": args.n, "q": args.q, "q1": args.q1,
                                            "diagonal": args.diagonal, "oracle": args.oracle,
                                            "method": args.method, "cap": args.cap, **b})]
    elif cmd == "series":
        if args.order < 0:
            raise UsageError("--order must be nonnegative")
        tasks = [("series", {"kind": args.what, "order": args.order})]
    elif cmd == "symbols":
        n = args.n if args.n is not None else args.order
        if n is None:
            raise UsageError("symbols needs --n")
        if n < 0:
            raise UsageError("--n must be nonnegative")
        tasks = [("symbols", {"kind": args.what, "n": n, "upto": args.upto, "method": args.method, **b})]
    elif cmd == "weyl":
        if args.what == "mu":
            _need(args, "f", "n")
        tasks = _weyl_tasks(args, b)
    elif cmd == "suite":
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        tasks = suite_tasks(args.tier, budget)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {cmd}")
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("output", "format", "timings", "jobs") and v is not None and v is not False}
    return echo, tasks


def _weyl_tasks(args, b: dict) -> list[tuple[str, dict]]:
    if args.what == "mu":
        if args.f % 2 or args.f < 2:
            raise UsageError("--f must be a positive even number")
        return [("weyl.mu", {"f": args.f, "n": args.n})]
    _need(args, "l", "d")
    try:
        TwistSpec(args.l, args.d, regular=not args.nonregular)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    qs = args.q or [3, 5, 9]
    for q in qs:
        _odd_prime_power(q)
    if args.what == "check":
        return [("weyl.check", {"l": args.l, "d": args.d, "qs": qs, "nonregular": args.nonregular, **b})]
    if args.nonregular:
        raise UsageError(f"weyl {args.what} covers regular d only")
    name = "weyl.stabilizers" if args.what == "stabilizers" else "weyl.normalizers"
    return [(name, {"l": args.l, "d": args.d, "q": q}) for q in qs]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        default_budget()
        echo, tasks = plan(args)
    except (UsageError, ValueError) as exc:
        print(f"spcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    checks, timings, tables = run_tasks(tasks, getattr(args, "jobs", 1))
    table = tables[0] if len(tables) == 1 else None
    report = Report(echo, checks, table, timings if args.timings else None)
    text = report.to_tsv() if args.format == "tsv" else report.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
