"""Command-line front end: one subcommand per checker, one JSON report per run.

Exit codes: 0 verdict true (or search/exploration finished), 1 verdict false,
2 usage or domain error, 3 oracle-range/resource/factorization limit,
4 an identity that is a theorem failed.
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional

from app import congruences, ppp, quotients, supercongruences
from app.config import (
    APP_NAME,
    BRUTE_FORCE_CAP,
    FINDINGS_DB_PATH,
    RECORDS_PATH,
    SIEVE_DEFAULT_BOUND,
    VERSION,
    WORKERS,
)
from app.errors import (
    DomainError,
    EmcongError,
    IncompleteFactorizationError,
    OracleRangeError,
    ResourceError,
    TheoremViolationError,
)
from app.primes import factorize, primes_up_to
from app.records import parse_decimal
from app.report import EXPLORATION, Report

log = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_THEOREM = 4


@dataclass
class Context:
    cap: int
    workers: int
    records: str
    findings_db: Optional[str]


def _natural(text):
    try:
        return parse_decimal(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    value = _natural(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _prime_list(text):
    return [_natural(part.strip()) for part in text.split(",") if part.strip()]


def _factorization(k, primes):
    return factorize(k, hints=primes or ())


# -- subcommands -----------------------------------------------------------

def _cmd_check(args, ctx):
    n, k = args.n, args.k
    inputs = {"n": n, "k": k, "mode": args.mode}
    details = {}
    direct = conditions = None
    if args.mode in ("direct", "both"):
        direct = congruences.emc_congruence_holds(n, k, cap=ctx.cap)
        details["direct"] = direct
    if args.mode in ("conditions", "both"):
        report = congruences.mod_k_conditions(n, k, _factorization(k, args.primes))
        conditions = report.verdict
        details["conditions"] = report
    if direct is not None and conditions is not None and direct != conditions:
        raise TheoremViolationError(f"direct verdict {direct} != condition verdict {conditions} at n={n}, k={k}")
    verdict = direct if direct is not None else conditions
    return Report("check", inputs, verdict, details)


def _cmd_super(args, ctx):
    n, k, power = args.n, args.k, args.power
    inputs = {"n": n, "k": k, "power": power}
    if power == 2:
        direct = k <= ctx.cap
        report = supercongruences.mod_k2_conditions(
            n, k, _factorization(k, args.primes), direct=direct, cap=ctx.cap)
        return Report("super", inputs, report.verdict, report)
    holds = supercongruences.super_holds(n, k, 3, cap=ctx.cap)
    return Report("super", inputs, holds, {"direct": holds})


def _cmd_conditions(args, ctx):
    if args.exponent_class is not None:
        n = congruences.ExponentClass.parse(args.exponent_class)
    else:
        n = args.n
    report = congruences.mod_k_conditions(n, args.k, _factorization(args.k, args.primes))
    return Report("conditions", {"k": args.k, "n": str(n)}, report.verdict, report)


def _cmd_egyptian(args, ctx):
    fac = _factorization(args.k, args.primes)
    holds = congruences.egyptian_condition(args.k, fac)
    return Report("egyptian", {"k": args.k}, holds, {"primes": fac.primes, "squarefree": fac.is_squarefree})


def _cmd_minimal_exponent(args, ctx):
    fac = _factorization(args.k, args.primes)
    if not (fac.is_squarefree and congruences.egyptian_condition(args.k, fac)):
        return Report("minimal-exponent", {"k": args.k}, False, {"minimal_exponent": None})
    value = congruences.minimal_exponent(args.k, fac)
    return Report("minimal-exponent", {"k": args.k}, True, {"minimal_exponent": value})


def _separator_scan(bound, ctx):
    separators = ppp.egyptian_vs_ppp_scan(bound, workers=ctx.workers)
    findings = [f"k={k} satisfies the Egyptian fraction congruence but is not primary pseudoperfect"
                for k in separators]
    return separators, findings


def _cmd_search(args, ctx):
    hits = congruences.search_solutions_by_prime_count(args.r, args.bound, workers=ctx.workers)
    separators, findings = _separator_scan(args.bound, ctx)
    details = {"solutions": hits,
               "separators": separators,
               "note": "bounded search; the statement for every k is a theorem, not a computation"}
    return Report("search", {"r": args.r, "bound": args.bound}, True, details, findings)


def _cmd_ppp_search(args, ctx):
    records = ppp.ppp_search(args.limit, workers=ctx.workers)
    separators, findings = _separator_scan(args.limit, ctx)
    details = {"records": records, "separators": separators}
    return Report("ppp-search", {"limit": args.limit}, True, details, findings)


def _cmd_verify_record(args, ctx):
    result = ppp.verify_record(args.k, args.primes, args.exponent)
    inputs = {"k": args.k, "primes": args.primes}
    if args.exponent is not None:
        inputs["exponent"] = args.exponent
    details = {"checks": result.checks, "minimal_exponent": result.minimal_exponent}
    return Report("verify-record", inputs, result.passed, details, list(result.findings))


def _cmd_zagier(args, ctx):
    if args.k is not None:
        verdict = ppp.zagier_check(args.k)
        if not verdict.agree:
            raise TheoremViolationError(f"Zagier characterizations disagree at k={args.k}")
        return Report("zagier", {"k": args.k}, verdict.conditions[0],
                      {"verdict": verdict, "chain": ppp.zagier_chain()})
    members = []
    for k in range(1, args.limit + 1):
        verdict = ppp.zagier_check(k)
        if not verdict.agree:
            raise TheoremViolationError(f"Zagier characterizations disagree at k={k}")
        if verdict.conditions[0]:
            members.append(k)
    return Report("zagier", {"limit": args.limit}, True, {"members": members, "chain": ppp.zagier_chain()})


def _cmd_lerch(args, ctx):
    failures = []
    checked = 0
    for p in primes_up_to(args.pmax):
        if p == 2:
            continue
        checked += 1
        if not quotients.lerch_check(p).holds:
            failures.append(p)
    if failures:
        raise TheoremViolationError(f"Lerch's formula failed at {failures}")
    return Report("lerch", {"pmax": args.pmax}, True, {"primes_checked": checked, "failures": failures})


def _cmd_eisenstein(args, ctx):
    checked = 0
    for p in primes_up_to(args.pmax):
        for a in range(1, p):
            for b in range(1, p):
                checked += 1
                if not quotients.eisenstein_check(p, a, b):
                    raise TheoremViolationError(f"Eisenstein's relation failed at p={p}, a={a}, b={b}")
    return Report("eisenstein", {"pmax": args.pmax}, True, {"triples_checked": checked})


def _cmd_quotients(args, ctx):
    pair = quotients.quotient_pair(args.p)
    details = {"pair": pair}
    if args.p > 2:
        details["lerch"] = quotients.lerch_check(args.p)._asdict()
    return Report("quotients", {"p": args.p}, True, details)


def _cmd_explore_p3(args, ctx):
    rows = []
    findings = []
    for t in range(1, args.tmax + 1):
        n = args.n * t
        cube = supercongruences.cube_block_explore(n, args.k, cap=ctx.cap)
        applies = supercongruences.super_holds(n, args.k, 2, cap=ctx.cap)
        for row in cube:
            if not row.holds:
                hypothesis = "holds" if applies else "fails"
                findings.append(f"mod p^3 mismatch: n={n}, k={args.k}, p={row.p} (mod k^2 relation {hypothesis})")
        rows.append({"n": n, "mod_k2_holds": applies, "primes": cube})
    inputs = {"n": args.n, "k": args.k, "tmax": args.tmax}
    return Report("explore-p3", inputs, EXPLORATION, {"status": "conjecture, not a theorem", "rows": rows}, findings)


def _cmd_remark7(args, ctx):
    rows = supercongruences.square_divisibility_explore(args.nmax, p=args.p, cap=ctx.cap)
    details = {"p": args.p, "rows": [{"n": n, "divisible": d} for n, d in rows]}
    return Report("remark7", {"nmax": args.nmax, "p": args.p}, EXPLORATION, details)


def _cmd_family2(args, ctx):
    holds = supercongruences.power_of_two_family(args.n, args.d)
    guaranteed = args.n % (1 << (args.d - 1)) == 0
    if guaranteed and not holds:
        raise TheoremViolationError(f"1 + 2^n = 3^n (mod 2^d) failed at n={args.n}, d={args.d}")
    return Report("family2", {"n": args.n, "d": args.d}, holds, {"guaranteed": guaranteed})


def _cmd_exact(args, ctx):
    hits = congruences.exact_solutions(args.nmax, args.kmax)
    findings = [f"non-trivial solution n={n}, k={k}" for n, k in hits if (n, k) != (1, 2)]
    verdict = not findings
    return Report("exact", {"nmax": args.nmax, "kmax": args.kmax}, verdict, {"solutions": hits}, findings)


def _cmd_odd(args, ctx):
    hits = congruences.odd_exponent_solutions(args.nmax, args.kmax, cap=ctx.cap)
    stray = [(n, k) for n, k in hits if k > 2]
    if stray:
        raise TheoremViolationError(f"odd-exponent solutions beyond k = 1, 2: {stray}")
    return Report("odd", {"nmax": args.nmax, "kmax": args.kmax}, True, {"solutions": hits})


def _cmd_super_exponents(args, ctx):
    solution = supercongruences.supercongruence_exponents(args.k, _factorization(args.k, args.primes))
    return Report("super-exponents", {"k": args.k}, solution is not None, {"solution": solution})


def _classification_details(records, ctx):
    classes = supercongruences.classify_mod_k2(records)
    cubes = supercongruences.cube_candidates(records, cap=ctx.cap)
    expected = {2: (0, 2), 42: (12, 42)}
    for K, solution in classes:
        got = (solution.residue, solution.modulus) if solution else None
        if got != expected.get(K):
            raise TheoremViolationError(f"mod K^2 exponents for K={K} are {got}, expected {expected.get(K)}")
    for K, n, holds in cubes:
        if holds != (K == 2 and n >= 4):
            raise TheoremViolationError(f"mod K^3 verdict {holds} at n={n}, K={K}")
    return {
        "mod_k2": [{"K": K, "solution": solution} for K, solution in classes],
        "mod_k3": [{"K": K, "n": n, "holds": holds} for K, n, holds in cubes],
    }


def _cmd_classify_records(args, ctx):
    records = ppp.load_records(ctx.records)
    return Report("classify-records", {"records": ctx.records}, True, _classification_details(records, ctx))


def _cmd_tables(args, ctx):
    verified = ppp.verify_records_table(ctx.records)
    exponents = ppp.exponent_table(ctx.records)
    passed = {row.K for row in verified if row.passed}
    records = [r for r in ppp.load_records(ctx.records, strict=False) if r.K in passed]
    found = ppp.ppp_search(SIEVE_DEFAULT_BOUND, workers=ctx.workers)
    expected = [r for r in records if r.K <= SIEVE_DEFAULT_BOUND]
    separators, findings = _separator_scan(SIEVE_DEFAULT_BOUND, ctx)
    for row in verified:
        findings.extend(row.findings)
        if not row.passed:
            failed = ", ".join(check.name for check in row.checks if not check.passed)
            findings.append(f"record K={row.K} failed: {failed}")
    for row in exponents:
        if not row.matches:
            reason = f" ({row.problem})" if row.problem else ""
            findings.append(f"minimal exponent of k={row.k}: shipped {row.shipped}, "
                            f"recomputed {row.computed}{reason}")
    search_matches = found == expected
    if not search_matches:
        findings.append(f"search to {SIEVE_DEFAULT_BOUND} found {[r.K for r in found]}, "
                        f"table lists {[r.K for r in expected]}")
    details = {
        "records": [{"K": row.K, "r": len(row.primes), "primes": row.primes, "passed": row.passed,
                     "minimal_exponent": row.minimal_exponent} for row in verified],
        "exponents": [{"k": row.k, "n_multiple_of": row.shipped, "recomputed": row.computed,
                       "matches": row.matches} for row in exponents],
        "search": {"bound": SIEVE_DEFAULT_BOUND, "found": [r.K for r in found], "matches": search_matches,
                   "separators": separators},
        "classification": _classification_details(records, ctx),
    }
    verdict = (len(passed) == len(verified) and all(row.matches for row in exponents)
               and search_matches)
    return Report("tables", {"action": "reproduce", "records": ctx.records}, verdict, details, findings)


# -- parser ----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Verify power-sum congruences related to 1^n + 2^n + ... + k^n = (k+1)^n.",
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {VERSION}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug on stderr")
    parser.add_argument("--records", default=RECORDS_PATH, help="records data file")
    parser.add_argument("--findings-db", default=FINDINGS_DB_PATH, help="SQLite file to append findings to")
    parser.add_argument("--workers", type=_positive, default=WORKERS, help="threads for range scans")
    parser.add_argument("--cap", type=_positive, default=BRUTE_FORCE_CAP, help="brute-force iteration cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="congruence mod k")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--primes", type=_prime_list, help="known prime factors of k")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--direct", dest="mode", action="store_const", const="direct")
    mode.add_argument("--conditions", dest="mode", action="store_const", const="conditions")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(mode="both", handler=_cmd_check)

    p = sub.add_parser("super", help="congruence mod k^2 or k^3")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--power", type=int, choices=(2, 3), required=True)
    p.add_argument("--primes", type=_prime_list)
    p.set_defaults(handler=_cmd_super)

    p = sub.add_parser("conditions", help="per-prime conditions mod k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--primes", type=_prime_list)
    exp = p.add_mutually_exclusive_group(required=True)
    exp.add_argument("--n", type=_positive)
    exp.add_argument("--exponent-class", help="multiple-of:N")
    p.set_defaults(handler=_cmd_conditions)

    for name, handler in (("egyptian", _cmd_egyptian), ("minimal-exponent", _cmd_minimal_exponent),
                          ("super-exponents", _cmd_super_exponents)):
        p = sub.add_parser(name)
        p.add_argument("--k", type=_positive, required=True)
        p.add_argument("--primes", type=_prime_list)
        p.set_defaults(handler=handler)

    p = sub.add_parser("search", help="solutions with exactly r prime factors")
    p.add_argument("--r", type=_natural, required=True)
    p.add_argument("--bound", type=_positive, default=SIEVE_DEFAULT_BOUND)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("ppp-search", help="primary pseudoperfect numbers up to a limit")
    p.add_argument("--limit", type=_natural, default=SIEVE_DEFAULT_BOUND)
    p.set_defaults(handler=_cmd_ppp_search)

    p = sub.add_parser("verify-record")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--primes", type=_prime_list, required=True)
    p.add_argument("--exponent", type=_positive)
    p.set_defaults(handler=_cmd_verify_record)

    p = sub.add_parser("zagier")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--k", type=_positive)
    target.add_argument("--limit", type=_positive)
    p.set_defaults(handler=_cmd_zagier)

    for name, handler in (("lerch", _cmd_lerch), ("eisenstein", _cmd_eisenstein)):
        p = sub.add_parser(name)
        p.add_argument("--pmax", type=_positive, required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("quotients")
    p.add_argument("--p", type=_positive, required=True)
    p.set_defaults(handler=_cmd_quotients)

    p = sub.add_parser("explore-p3", help="mod p^3 exploration (conjecture)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--tmax", type=_positive, default=1, help="also run n*t for t <= tmax")
    p.set_defaults(handler=_cmd_explore_p3)

    p = sub.add_parser("remark7")
    p.add_argument("--nmax", type=_positive, required=True)
    p.add_argument("--p", type=_positive, default=7)
    p.set_defaults(handler=_cmd_remark7)

    p = sub.add_parser("family2")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.set_defaults(handler=_cmd_family2)

    for name, handler in (("exact", _cmd_exact), ("odd", _cmd_odd)):
        p = sub.add_parser(name)
        p.add_argument("--nmax", type=_positive, required=True)
        p.add_argument("--kmax", type=_positive, required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("classify-records", help="mod K^2 and K^3 classification of the records")
    p.set_defaults(handler=_cmd_classify_records)

    p = sub.add_parser("tables")
    p.add_argument("action", choices=("reproduce",))
    p.set_defaults(handler=_cmd_tables)
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _exit_code(verdict):
    return EXIT_FALSE if verdict is False else EXIT_TRUE


def _store_findings(report, path):
    from app.findings import FindingsStore

    store = FindingsStore(path)
    try:
        for finding in report.findings:
            store.add(report.command, "finding", finding, report.to_dict()["inputs"])
    finally:
        store.close()


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)
    ctx = Context(args.cap, args.workers, args.records, args.findings_db)

    try:
        report = args.handler(args, ctx)
    except TheoremViolationError as exc:
        log.error("Theorem violation: %s", exc)
        return EXIT_THEOREM
    except (OracleRangeError, ResourceError, IncompleteFactorizationError) as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except (DomainError, EmcongError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE

    stdout.write(report.to_json())
    log.info("%s: verdict %s, %d finding(s)", report.command, report.verdict, len(report.findings))
    if report.findings and ctx.findings_db:
        try:
            _store_findings(report, ctx.findings_db)
        except Exception:
            log.warning("Failed to record findings in %s", ctx.findings_db, exc_info=True)
    return _exit_code(report.verdict)


def main():
    sys.exit(run())
