"""Command-line front end.

Machine-readable output (JSON Lines by default, CSV on request) goes to
stdout or --out; human-readable progress and summaries go to stderr.
Survey results are cached as an append-only JSON Lines store under
$BINOMGROUP_CACHE (default ~/.cache/binomgroup); a cached q is skipped on
re-runs unless --force is given.

Exit codes: 0 success, 1 usage error, 2 engine error, 3 expectation
failure (vr18 --expect with a different count).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import classify, sieve
from .binomial import enumerate_generators, family_additive, family_tz, keyprop_count
from .classify import ENGINE_VERSION, SurveyRecord, analyze
from .errors import EngineError
from .ffield import DEFAULT_FIELD_CEILING, build_field
from .intmath import prime_power_decompose

CSV_COLUMNS = ("q", "p", "e", "verdict", "gens", "r_of_q", "divisors", "order", "ms")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# results store


def store_dir() -> Path:
    env = os.environ.get("BINOMGROUP_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "binomgroup"


class Store:
    """Append-only JSON Lines record store, one record per q."""

    def __init__(self, directory: Path | None = None):
        self.dir = directory if directory is not None else store_dir()
        self.path = self.dir / "records.jsonl"

    def load(self) -> dict[int, SurveyRecord]:
        out: dict[int, SurveyRecord] = {}
        if not self.path.exists():
            return out
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = SurveyRecord.from_dict(json.loads(line))
                out[rec.q] = rec  # last one wins
        return out

    def append(self, records: list[SurveyRecord]) -> None:
        if not records:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")

    def compact(self) -> None:
        """Rewrite the store keeping one record per q, ascending."""
        recs = self.load()
        if not recs:
            return
        tmp = self.path.with_suffix(".tmp")
        with tmp.open("w") as fh:
            for q in sorted(recs):
                fh.write(json.dumps(recs[q].to_dict(), sort_keys=True) + "\n")
        tmp.replace(self.path)


# ---------------------------------------------------------------------------
# output helpers


def _emit(lines: list[dict], args) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_COLUMNS)
        for d in lines:
            writer.writerow(_csv_row(d))
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(d, sort_keys=True) + "\n" for d in lines)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_row(d: dict):
    return (
        d.get("q", ""),
        d.get("p", ""),
        d.get("e", ""),
        d.get("verdict", ""),
        d.get("generator_classes", ""),
        d.get("r_of_q", ""),
        ";".join(str(x) for x in d.get("divisors", ())),
        d.get("bsgs_order") or "",
        d.get("elapsed_ms", ""),
    )


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _require_prime_power(q: int) -> tuple[int, int]:
    pe = prime_power_decompose(q)
    if q < 3 or pe is None:
        raise UsageError(f"q = {q} must be a prime power >= 3")
    return pe


# ---------------------------------------------------------------------------
# subcommands


def _run_survey(args, q_min: int, q_max: int) -> list[SurveyRecord]:
    store = Store()
    cached = {} if args.force else store.load()
    skip = set(cached) if cached else None
    fresh = classify.survey(
        q_min,
        q_max,
        jobs=args.jobs,
        field_ceiling=args.ceiling,
        skip=skip,
    )
    store.append(fresh)
    if args.force:
        store.compact()
    merged = {**cached, **{r.q: r for r in fresh}}
    out = [merged[q] for q in sorted(merged) if q_min <= q <= q_max]
    pe_ok = [q for q in sorted(merged) if q_min <= q <= q_max]
    _info(
        f"survey [{q_min}, {q_max}]: {len(pe_ok)} prime powers, "
        f"{len(fresh)} computed, {len(out) - len(fresh)} from cache"
    )
    return out


def cmd_analyze(args) -> int:
    _require_prime_power(args.q)
    rec = analyze(args.q, field_ceiling=args.ceiling)
    _emit([rec.to_dict()], args)
    _info(
        f"q={rec.q}: {rec.verdict}"
        + (f" divisors={list(rec.divisors)}" if rec.divisors else "")
        + f", {rec.generator_classes} generator classes, r(q)={rec.r_of_q}"
    )
    return 0


def cmd_survey(args) -> int:
    if args.q_min > args.q_max:
        raise UsageError("q_min must be <= q_max")
    records = _run_survey(args, args.q_min, args.q_max)
    _emit([r.to_dict() for r in records], args)
    return 0


def cmd_vr18(args) -> int:
    records = _run_survey(args, 3, 4999)
    hits = [r.q for r in records if r.verdict == classify.SYMMETRIC]
    _emit([r.to_dict() for r in records if r.verdict == classify.SYMMETRIC], args)
    odd = [q for q in hits if q % 2 == 1]
    even = [q for q in hits if q % 2 == 0]
    _info(f"full symmetric group count for q < 5000: {len(hits)}")
    _info(f"q list: {hits}")
    _info(f"odd q: {len(odd)}, characteristic 2: {len(even)} {even}")
    if args.expect is not None and len(hits) != args.expect:
        _info(f"expected {args.expect}, found {len(hits)}")
        return 3
    return 0


def cmd_families(args) -> int:
    p, e = _require_prime_power(args.q)
    ctx = build_field(p, e, ceiling=args.ceiling)
    n1 = ctx.n1
    rows = []
    for j in range(1, e):
        if e % j:
            continue
        r = p**j
        valid = [a for a in range(n1) if family_additive(ctx, r, a) is not None]
        rows.append(
            {"q": args.q, "family": "additive", "r": r, "count": len(valid), "a_logs": valid}
        )
    if e % 2 == 0 and p ** (e // 2) % 3 == 2 and p ** (e // 2) > 2:
        valid = [a for a in range(n1) if family_tz(ctx, a) is not None]
        rows.append(
            {
                "q": args.q,
                "family": "order6",
                "r": p ** (e // 2),
                "count": len(valid),
                "a_logs": valid,
            }
        )
    _emit(rows, args)
    _info(f"q={args.q}: {len(rows)} applicable families")
    return 0


def cmd_sieve(args) -> int:
    rep = sieve.qualifying_primes(args.N)
    doc = {
        "bound": rep.bound,
        "sqrt_bound": rep.sqrt_bound,
        "count": rep.count,
        "qualifying": list(rep.qualifying),
        "congruence_count": rep.congruence_count,
        "repunit_excluded": rep.repunit_excluded,
        "expected": rep.expected,
        "ratio": rep.ratio,
        "alarm": rep.alarm,
        "tail_pairs": rep.tail_pairs,
        "tail_bound": rep.tail_bound,
        "schema": 1,
    }
    _emit([doc], args)
    _info(
        f"N={args.N}: {rep.count} qualifying primes <= {rep.sqrt_bound}, "
        f"expected ~{rep.expected:.1f}, ratio {rep.ratio:.3f}"
        + (" (ALARM)" if rep.alarm else "")
    )
    return 0


def cmd_mzscan(args) -> int:
    rep = classify.mz_scan(args.p_max, field_ceiling=args.ceiling)
    lines = [
        {
            "p": row.p,
            "min_gap_gcd": row.min_gap_gcd,
            "threshold": row.threshold,
            "ok": row.ok,
            "schema": 1,
        }
        for row in rep.rows
    ]
    _emit(lines, args)
    bad = rep.violations
    _info(f"primes <= {args.p_max}: {len(rep.rows)} scanned, {len(bad)} violations")
    return 0


def cmd_keyprop(args) -> int:
    _require_prime_power(args.q)
    p, e = prime_power_decompose(args.q)
    ctx = build_field(p, e, ceiling=args.ceiling)
    n1 = ctx.n1
    if args.d < 1 or n1 % args.d or args.k < 1 or n1 % args.k or args.k % args.d == 0:
        raise UsageError(
            f"need d | q-1, k | q-1 and d not dividing k (q-1 = {n1})"
        )
    res = keyprop_count(ctx, args.d, args.k)
    _emit(
        [
            {
                "q": args.q,
                "d": args.d,
                "k": args.k,
                "count": res.count,
                "a_logs": list(res.a_values),
                "bound": args.d,
                "schema": 1,
            }
        ],
        args,
    )
    _info(f"q={args.q}, d={args.d}, k={args.k}: {res.count} coefficients (bound {args.d})")
    return 0


def cmd_prim(args) -> int:
    rep = classify.verify_prim_pipeline(args.r, field_ceiling=args.ceiling)
    doc = {
        "r": rep.r,
        "q": rep.q,
        "stages": [
            {"name": s.name, "gens_added": s.gens_added, "survivors": list(s.survivors)}
            for s in rep.stages
        ],
        "s8_count": rep.s8_count,
        "complete": rep.complete,
        "final_survivors": list(rep.final_survivors),
        "schema": 1,
    }
    _emit([doc], args)
    _info(
        f"r={rep.r}, q={rep.q}: final survivors {list(rep.final_survivors)}"
        + ("" if rep.complete else " (no gap-(q-1)/8 binomial found)")
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="binomgroup",
        description="Binomial permutation groups over finite fields",
    )
    top.add_argument("--version", action="version", version=ENGINE_VERSION)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", metavar="PATH", help="write machine output here")
        p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
        p.add_argument("--jobs", type=int, default=None, help="parallel workers")
        p.add_argument("--force", action="store_true", help="ignore cached records")
        p.add_argument(
            "--ceiling",
            type=int,
            default=DEFAULT_FIELD_CEILING,
            help="largest allowed field size",
        )

    p = sub.add_parser("analyze", help="classify one q")
    p.add_argument("q", type=int)
    common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("survey", help="classify every prime power in a range")
    p.add_argument("q_min", type=int)
    p.add_argument("q_max", type=int)
    common(p)
    p.set_defaults(fn=cmd_survey)

    p = sub.add_parser("vr18", help="count full symmetric groups below 5000")
    p.add_argument("--expect", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_vr18)

    p = sub.add_parser("families", help="explicit binomial families over F_q")
    p.add_argument("q", type=int)
    common(p)
    p.set_defaults(fn=cmd_families)

    p = sub.add_parser("sieve", help="qualifying-prime sieve up to sqrt(N)")
    p.add_argument("N", type=int)
    common(p)
    p.set_defaults(fn=cmd_sieve)

    p = sub.add_parser("mzscan", help="minimum gap gcd over prime fields")
    p.add_argument("p_max", type=int)
    common(p)
    p.set_defaults(fn=cmd_mzscan)

    p = sub.add_parser("keyprop", help="coset-trap coefficient count")
    p.add_argument("q", type=int)
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    common(p)
    p.set_defaults(fn=cmd_keyprop)

    p = sub.add_parser("prim", help="staged primitivity replay for q = r^2")
    p.add_argument("r", type=int)
    common(p)
    p.set_defaults(fn=cmd_prim)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage problems
        return 0 if exc.code in (0, None) else 1
    try:
        return args.fn(args)
    except UsageError as exc:
        _info(f"usage error: {exc}")
        return 1
    except (EngineError, ValueError) as exc:
        _info(f"engine error: {exc.__class__.__name__}: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
