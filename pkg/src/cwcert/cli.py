"""Command-line interface for the certification engine.

Subcommands:

``check``
    Decide a single cell (cyclic order or abelian group, weight), print the
    certificate as JSON.  Optional flags run the multiplier-constrained
    witness search or the cached Weil/idempotent rules.

``table``
    Regenerate the full existence table with rule attribution in csv, json,
    or grid form, and optionally diff it against the shipped fixture.

``weil``
    Enumerate (or import) the equivalence classes of cyclotomic integers of
    a given norm at a given conductor and print them as JSON.

``verify``
    Check a group-ring element stored as JSON against the weighing-matrix
    equations and the properness condition.

Exit codes: 0 decided / verified, 1 verification or soundness failure,
2 usage or parse error, 3 open / inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from .certificates import Certificate, EXISTS, NONEXISTENT, OPEN
from .criteria import decide_cell, decide_group_cell
from .grouprings import GroupRingElem
from .numtheory import eligible_multipliers, mult_ord, prime_divisors
from . import weilsearch
from .weilsearch import (
    DimensionTooLarge,
    SearchOverflow,
    SolutionSet,
    cache_load,
    idempotent_integrality_search,
    is_proper,
    orbit_search,
    verify_weighing,
    weil_divisibility_rule,
    weil_enumerate,
)

# Fixture symbols: Y = exists, "." / "*" / "N" = nonexistent, "?" = open.
_SYMBOL_STATUS = {"Y": EXISTS, ".": NONEXISTENT, "*": NONEXISTENT, "N": NONEXISTENT, "?": OPEN}


def _data_path(name: str):
    return resources.files("cwcert.data").joinpath(name)


def default_cache_dir() -> str:
    """Cache directory: $CWM_CACHE if set, else the packaged read-only cache."""
    env = os.environ.get(weilsearch.CACHE_ENV)
    if env:
        return env
    return str(_data_path("weilcache"))


def load_cell_fixture() -> dict[tuple[int, int], dict]:
    """The shipped existence table: (v, s) -> row with symbol/anchor/cite."""
    out: dict[tuple[int, int], dict] = {}
    with _data_path("strassler_table.csv").open() as handle:
        for row in csv.DictReader(handle):
            out[(int(row["v"]), int(row["s"]))] = row
    return out


def load_group_fixture() -> list[dict]:
    with _data_path("group_table.csv").open() as handle:
        return list(csv.DictReader(handle))


def _parse_group(text: str) -> tuple[int, ...]:
    try:
        factors = tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad group spec {text!r}; use e.g. 2x2x11")
    if not factors or any(f < 1 for f in factors):
        raise argparse.ArgumentTypeError(f"bad group spec {text!r}")
    return factors


def _print_json(data) -> None:
    print(json.dumps(data, indent=1, sort_keys=True))


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _search_witness(v: int, n: int, a: int) -> dict | None:
    """Try multiplier-constrained searches for an existence witness."""
    multipliers = eligible_multipliers(n, v) if v > 1 else [1]
    # Prefer multipliers with few orbits (largest order); fall back to t=1.
    ordered = sorted(multipliers, key=lambda t: -mult_ord(t, v))
    if 1 not in ordered:
        ordered.append(1)
    for t in ordered:
        try:
            found = orbit_search(v, n, a=a, t=t)
        except SearchOverflow:
            continue
        if found:
            elem = found[0]
            return {
                "multiplier": t,
                "element": elem.to_json(),
                "proper": is_proper(elem),
            }
    return None


def _weil_rules(v: int, n: int, a: int, cache_dir: str) -> Certificate | None:
    """Cached-conductor Weil divisibility and idempotent rules."""
    for q in prime_divisors(n):
        try:
            cert = weil_divisibility_rule(v, n, q, a=a, cache_dir=cache_dir)
        except (DimensionTooLarge, SearchOverflow):
            continue
        if cert.conclusion == NONEXISTENT:
            return cert
    # idempotent search needs complete class lists at conductors w with p | w
    split_primes = [p for p in prime_divisors(v) if v % (p * p) != 0]
    if split_primes:
        p = max(split_primes)
        classes: dict[int, SolutionSet] = {}
        for w in sorted(d for d in _divisors(v) if d % p == 0):
            ss = cache_load(w, n, cache_dir=cache_dir)
            if ss is None:
                try:
                    ss = weil_enumerate(w, n, cache_dir=cache_dir)
                except (DimensionTooLarge, SearchOverflow):
                    return None
            classes[w] = ss
        try:
            cert = idempotent_integrality_search(v, n, classes, a=a)
        except (SearchOverflow, ValueError):
            return None
        if cert.conclusion == NONEXISTENT:
            return cert
    return None


def _divisors(v: int) -> list[int]:
    return weilsearch._divisors(v)


def cmd_check(args: argparse.Namespace) -> int:
    n = args.n
    result: dict = {"n": n, "a": args.a}
    certificate: Certificate | None = None
    status = OPEN

    if args.group is not None:
        result["group"] = list(args.group)
        conclusion, certificate = decide_group_cell(args.group, n)
        if conclusion == NONEXISTENT:
            status = NONEXISTENT
    else:
        v = args.v
        result["v"] = v
        conclusion, certificate, attribution = decide_cell(v, n)
        if conclusion == NONEXISTENT:
            status = NONEXISTENT
            result["attribution"] = {str(d): r for d, r in attribution.items()}
        cache_dir = args.cache_dir or default_cache_dir()
        if status == OPEN and args.weil:
            cert = _weil_rules(v, n, args.a, cache_dir)
            if cert is not None:
                certificate, status = cert, NONEXISTENT
        if status == OPEN and args.search:
            witness = _search_witness(v, n, args.a)
            if witness is not None:
                status = EXISTS
                result["witness"] = witness
        if status == OPEN:
            s = 0
            root = int(n**0.5)
            if root * root == n:
                s = root
            fixture = load_cell_fixture().get((v, s))
            if fixture is not None:
                status = _SYMBOL_STATUS[fixture["symbol"]]
                result["provenance"] = {
                    "source": "fixture",
                    "symbol": fixture["symbol"],
                    "anchor": fixture["anchor"],
                    "cite": fixture["cite"],
                }

    result["status"] = status
    if certificate is not None:
        result["certificate"] = certificate.to_json()
    _print_json(result)
    return 0 if status != OPEN else 3


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


def _decide_row(task: tuple[int, int]) -> tuple[int, list[tuple[int, str, str]]]:
    """Engine decisions for one table row; (v, [(s, conclusion, rule)])."""
    v, smax = task
    out = []
    for s in range(1, smax + 1):
        conclusion, cert, _ = decide_cell(v, s * s)
        out.append((s, conclusion, cert.rule if cert else ""))
    return v, out


def _table_cells(vmax: int, smax: int, jobs: int) -> list[dict]:
    fixture = load_cell_fixture()
    tasks = [(v, smax) for v in range(1, vmax + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = dict(pool.map(_decide_row, tasks, chunksize=8))
    else:
        rows = dict(map(_decide_row, tasks))
    cells = []
    for v in range(1, vmax + 1):
        for s, conclusion, rule in rows[v]:
            row = fixture.get((v, s), {"symbol": "", "anchor": "", "cite": "", "note": ""})
            symbol = row["symbol"]
            if conclusion == NONEXISTENT:
                status, provenance = NONEXISTENT, rule
            elif symbol:
                status = _SYMBOL_STATUS[symbol]
                provenance = "fixture"
            else:
                status, provenance = OPEN, ""
            cells.append(
                {
                    "v": v,
                    "s": s,
                    "status": status,
                    "provenance": provenance,
                    "rule": rule,
                    "symbol": symbol,
                    "anchor": row["anchor"],
                    "cite": row["cite"],
                }
            )
    return cells


def _emit_table(cells: list[dict], fmt: str, rules: bool) -> str:
    if fmt == "json":
        return json.dumps(cells, indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=["v", "s", "status", "provenance", "rule", "symbol", "anchor", "cite"]
        )
        writer.writeheader()
        writer.writerows(cells)
        return buf.getvalue()
    # grid
    by_cell = {(c["v"], c["s"]): c for c in cells}
    vmax = max(c["v"] for c in cells)
    smax = max(c["s"] for c in cells)
    glyph = {EXISTS: "Y", NONEXISTENT: ".", OPEN: "?"}
    lines = ["v\\s " + " ".join(f"{s:>2}" for s in range(1, smax + 1))]
    for v in range(1, vmax + 1):
        parts = []
        for s in range(1, smax + 1):
            cell = by_cell[(v, s)]
            mark = cell["symbol"] if cell["symbol"] in ("N", "*") else glyph[cell["status"]]
            if rules and cell["rule"]:
                mark = f"{mark}[{cell['rule']}]"
            parts.append(f"{mark:>2}")
        lines.append(f"{v:>3} " + " ".join(parts))
    return "\n".join(lines) + "\n"


def _diff_fixture(cells: list[dict]) -> tuple[list[dict], list[dict]]:
    """(soundness violations, completeness warnings) against the fixture."""
    violations = []
    warnings = []
    for cell in cells:
        if cell["symbol"] == "Y" and cell["rule"] and cell["status"] == NONEXISTENT:
            violations.append(cell)
        if (
            cell["anchor"]
            and not cell["cite"]
            and cell["symbol"] in (".", "*", "N")
            and not cell["rule"]
        ):
            warnings.append(cell)
    return violations, warnings


def cmd_table(args: argparse.Namespace) -> int:
    cells = _table_cells(args.vmax, args.smax, args.jobs)
    sys.stdout.write(_emit_table(cells, args.format, args.rules))
    if args.diff_fixture:
        violations, warnings = _diff_fixture(cells)
        for cell in warnings:
            print(
                f"warning: anchored cell ({cell['v']},{cell['s']}) "
                f"[{cell['anchor']}] not derived by the engine",
                file=sys.stderr,
            )
        for cell in violations:
            print(
                f"SOUNDNESS VIOLATION: existing cell ({cell['v']},{cell['s']}) "
                f"flagged NONEXISTENT by {cell['rule']}",
                file=sys.stderr,
            )
        if violations:
            return 1
    return 0


# ---------------------------------------------------------------------------
# weil
# ---------------------------------------------------------------------------


def cmd_weil(args: argparse.Namespace) -> int:
    imported: SolutionSet | None = None
    if args.import_file:
        try:
            with open(args.import_file) as handle:
                imported = SolutionSet.from_json(json.load(handle))
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: cannot read import file: {exc}", file=sys.stderr)
            return 2
        if imported.v != args.v or imported.n != args.n:
            print("error: import file is for different parameters", file=sys.stderr)
            return 2
    cache_dir = args.cache_dir or default_cache_dir()
    try:
        solution_set = weil_enumerate(args.v, args.n, cache_dir=cache_dir)
    except DimensionTooLarge as exc:
        if imported is not None:
            _print_json(imported.to_json())
            return 0
        print(
            f"error: {exc}; enumeration at this conductor exceeds the backend "
            "dimension cap. Provide a class list with --import (it is flagged "
            "complete=false and consuming rules record the import).",
            file=sys.stderr,
        )
        return 3
    _print_json(solution_set.to_json())
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        with open(args.file) as handle:
            data = json.load(handle)
        element = GroupRingElem.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot parse element: {exc}", file=sys.stderr)
        return 2
    weighing = verify_weighing(element, args.n, a=args.a)
    proper = is_proper(element) if weighing else False
    report = {
        "n": args.n,
        "a": args.a,
        "group": list(element.group.invariant_factors),
        "weighing": weighing,
        "proper": proper,
        "pass": weighing,
    }
    _print_json(report)
    return 0 if weighing else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwcert",
        description="Certified nonexistence of group-invariant weighing matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide a single cell")
    p_check.add_argument("v", type=int, nargs="?", help="cyclic group order")
    p_check.add_argument("n", type=int, help="weight")
    p_check.add_argument("--group", type=_parse_group, help="abelian group, e.g. 2x2x11")
    p_check.add_argument("--a", type=int, default=1, help="coefficient bound (default 1)")
    p_check.add_argument("--search", action="store_true", help="search for an existence witness")
    p_check.add_argument(
        "--weil", action="store_true", help="also run cached Weil/idempotent rules"
    )
    p_check.add_argument("--cache-dir", help="class-list cache directory")
    p_check.set_defaults(func=cmd_check)

    p_table = sub.add_parser("table", help="regenerate the existence table")
    p_table.add_argument("--vmax", type=int, default=200)
    p_table.add_argument("--smax", type=int, default=10)
    p_table.add_argument("--format", choices=("csv", "json", "grid"), default="grid")
    p_table.add_argument("--rules", action="store_true", help="annotate grid cells with rules")
    p_table.add_argument("--jobs", type=int, default=1)
    p_table.add_argument(
        "--diff-fixture",
        action="store_true",
        help="report soundness violations and completeness gaps against the fixture",
    )
    p_table.set_defaults(func=cmd_table)

    p_weil = sub.add_parser("weil", help="enumerate norm-n classes at a conductor")
    p_weil.add_argument("v", type=int)
    p_weil.add_argument("n", type=int)
    p_weil.add_argument("--cache-dir")
    p_weil.add_argument("--import", dest="import_file", help="imported class-list JSON")
    p_weil.set_defaults(func=cmd_weil)

    p_verify = sub.add_parser("verify", help="verify a stored group-ring element")
    p_verify.add_argument("file", help="element JSON file")
    p_verify.add_argument("n", type=int)
    p_verify.add_argument("--a", type=int, default=1)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        if args.group is None and args.v is None:
            parser.error("check needs a cyclic order or --group")
        if args.group is not None and args.v is not None:
            parser.error("give either a cyclic order or --group, not both")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
