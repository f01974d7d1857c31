"""Command line interface.

Commands:
  verify        one (a, b, n) instance -> certificate
  sweep         exhaustive or sampled (a, b, n) box -> report
  trace         proof traces for the prime factors of one modulus
  lemma-fuzz    seeded fuzzing of the floor inequality
  integrality   per-n integrality of a generalized factorial ratio
  oracle-check  cross-validation suites (valuation engine vs big integers)

Exit codes: 0 = all checks passed; 1 = a mathematical violation was
found (certificate/trace emitted); 2 = usage, domain or resource error.

JSON report schema (schema_version 1):

    {"schema_version": 1, "command": <str>, "config": {...},
     "results": [...],
     "summary": {"checked": <int>, "violations": <int>, "seconds": <float>}}

Each result carries certificate entries as {"p": p, "required": r,
"available": a}.  Reports are deterministic for a fixed config and
seed, except for the wall-clock ``summary.seconds`` field.

CSV output (verify / sweep / integrality only) has the fixed header
``a,b,n,verdict,witness_prime,seconds``; inapplicable fields are empty.

Canonical ratio grammar (the text form used in claim rendering):

    ratio := "1" | term (" " term)*
    term  := "(" form ")!^" exponent
    form  := e.g. "4n", "2n+3", "n-1", "5"

with terms sorted by (coeff, offset) descending and nonzero exponents;
a claim renders as "<moduli> <divisor ratio> | <multipliers> <dividend ratio>".

All verification-path arithmetic is 64-bit scale; inputs with
2*a*n >= 2^62 are rejected (exit 2) rather than risking overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .crosscheck import run_all
from .errors import IntegrityError, ResourceLimitError
from .ratio import Certificate, FactorialRatio, LinearForm, is_integral_at
from .theorem import (
    ModulusSide,
    ParamTriple,
    ProofTrace,
    SweepReport,
    conjecture_claim,
    conjecture_ratio,
    run_sweep,
    traces_for_modulus,
    verify_triple,
)
from .valuation import lemma_fuzz

SCHEMA_VERSION = 1
DEFAULT_SEED = 42
SCALE_GUARD = 2**62


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: command, parameters, and output routing."""

    command: str
    params: dict = field(default_factory=dict)
    jobs: int = 1
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "human"

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.format not in ("json", "csv", "human"):
            raise ValueError(f"unknown format {self.format!r}")

    def as_dict(self) -> dict:
        doc = dict(self.params)
        doc.update(jobs=self.jobs, seed=self.seed, format=self.format)
        return doc


def _guard_scale(a: int, n: int) -> None:
    if 2 * a * n >= SCALE_GUARD:
        raise OverflowError(
            f"2*a*n = {2 * a * n} exceeds the 2^62 guard; inputs this large "
            "would overflow 64-bit verification arithmetic"
        )


# ---------------------------------------------------------------------------
# rendering

def _certificate_dict(cert: Certificate) -> dict:
    return {
        "n": cert.n,
        "holds": cert.holds,
        "witness": cert.witness,
        "entries": [
            {"p": p, "required": req, "available": av} for p, req, av in cert.entries
        ],
    }


def _trace_dict(trace: ProofTrace) -> dict:
    return {
        "a": trace.triple.a,
        "b": trace.triple.b,
        "n": trace.triple.n,
        "p": trace.p,
        "modulus_side": trace.modulus_side.value,
        "modulus_value": trace.modulus_value,
        "alpha": trace.alpha,
        "beta": trace.beta,
        "gamma": trace.gamma,
        "tau": trace.tau,
        "branch": trace.branch.value,
        "levels": [[i, term] for i, term in trace.levels],
        "satisfied": trace.satisfied,
        "failures": list(trace.failures),
    }


def _certificate_lines(cert: Certificate, max_entries: int = 60) -> list[str]:
    lines = [f"verdict: {cert.verdict}", f"primes with required > 0: {len(cert.entries)}"]
    margin = cert.min_margin()
    if margin is not None:
        lines.append(f"min margin (available - required): {margin}")
    if len(cert.entries) <= max_entries:
        if cert.entries:
            lines.append(f"{'p':>12} {'required':>9} {'available':>10}")
            lines.extend(
                f"{p:>12} {req:>9} {av:>10}" for p, req, av in cert.entries
            )
    else:
        lines.append("(entry table elided; rerun with --format json --out FILE)")
    if not cert.holds:
        lines.append(f"VIOLATION at witness prime p={cert.witness}")
    return lines


def _level_breakdown(ratio: FactorialRatio, n: int, p: int, level: int) -> str:
    """Render one Legendre level as its signed floor addends."""
    parts = []
    for form, e in ratio.terms:
        arg = form.evaluate(n)
        sign = "+" if e > 0 else "-"
        mult = "" if abs(e) == 1 else f"{abs(e)}*"
        parts.append(f"{sign} {mult}floor({arg}/{p}^{level})")
    return " ".join(parts).lstrip("+ ")


def _trace_lines(trace: ProofTrace) -> list[str]:
    t = trace.triple
    ratio = conjecture_ratio(t.a, t.b)
    lines = [
        f"p={trace.p}: {trace.modulus_side.value} = {trace.modulus_value}, "
        f"alpha={trace.alpha}, branch={trace.branch.value}",
    ]
    if trace.tau is not None:
        lines.append(f"  beta={trace.beta} gamma={trace.gamma} tau={trace.tau}")
    for i, term in trace.levels:
        lines.append(f"  level {i}: {_level_breakdown(ratio, t.n, trace.p, i)} = {term}")
    lines.append(f"  satisfied: {trace.satisfied}")
    lines.extend(f"  FAILURE: {msg}" for msg in trace.failures)
    return lines


def _csv_text(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer,
        fieldnames=["a", "b", "n", "verdict", "witness_prime", "seconds"],
        lineterminator="\n",
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _report_doc(config: RunConfig, results: list, checked: int, violations: int, seconds: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": config.command,
        "config": config.as_dict(),
        "results": results,
        "summary": {"checked": checked, "violations": violations, "seconds": seconds},
    }


def _emit(text: str, config: RunConfig, summary_line: str) -> None:
    """Write the report to --out (plus a stdout summary) or to stdout."""
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
        print(f"{summary_line} (report written to {config.out})")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def sweep_report_from_json(doc: dict) -> SweepReport:
    """Reconstruct a SweepReport from a sweep report document."""
    if doc.get("schema_version") != SCHEMA_VERSION or doc.get("command") != "sweep":
        raise ValueError("not a sweep report document")
    config = doc["config"]
    summary = doc["summary"]
    violations = tuple(
        (ParamTriple(r["a"], r["b"], r["n"]), r["witness_prime"])
        for r in doc["results"]
    )
    return SweepReport(
        a_max=config["a_max"],
        b_max=config["b_max"],
        n_max=config["n_max"],
        checked=summary["checked"],
        violations=violations,
        seconds=summary["seconds"],
    )


# ---------------------------------------------------------------------------
# commands

def _cmd_verify(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="verify",
        params={"a": args.a, "b": args.b, "n": args.n},
        out=args.out,
        format=args.format,
    )
    triple = ParamTriple(args.a, args.b, args.n)
    _guard_scale(args.a, args.n)
    started = time.perf_counter()
    cert = verify_triple(triple)
    seconds = time.perf_counter() - started

    result = {
        "a": args.a,
        "b": args.b,
        "n": args.n,
        "verdict": cert.verdict,
        "witness_prime": cert.witness,
        "certificate": _certificate_dict(cert),
    }
    if config.format == "json":
        text = _json_text(_report_doc(config, [result], 1, 0 if cert.holds else 1, seconds))
    elif config.format == "csv":
        text = _csv_text(
            [
                {
                    "a": args.a,
                    "b": args.b,
                    "n": args.n,
                    "verdict": cert.verdict,
                    "witness_prime": "" if cert.witness is None else cert.witness,
                    "seconds": f"{seconds:.6f}",
                }
            ]
        )
    else:
        lines = [
            f"claim: {conjecture_claim(args.a, args.b)}",
            f"instance: a={args.a} b={args.b} n={args.n}",
            *_certificate_lines(cert),
            f"wall time: {seconds:.3f}s",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, config, f"verify a={args.a} b={args.b} n={args.n}: {cert.verdict}")
    return 0 if cert.holds else 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="sweep",
        params={
            "a_max": args.a_max,
            "b_max": args.b_max,
            "n_max": args.n_max,
            "sample": args.sample,
        },
        jobs=args.jobs,
        seed=args.seed,
        out=args.out,
        format=args.format,
    )
    _guard_scale(args.a_max, args.n_max)
    report = run_sweep(
        args.a_max, args.b_max, args.n_max, jobs=args.jobs, sample=args.sample, seed=args.seed
    )

    violation_certs = []
    results = []
    for triple, witness in report.violations:
        cert = verify_triple(triple)
        traces = traces_for_modulus(triple, ModulusSide.TWO_BN_PLUS_1) + traces_for_modulus(
            triple, ModulusSide.TWO_BN_PLUS_3
        )
        violation_certs.append((triple, witness, cert))
        results.append(
            {
                "a": triple.a,
                "b": triple.b,
                "n": triple.n,
                "verdict": cert.verdict,
                "witness_prime": witness,
                "certificate": _certificate_dict(cert),
                "traces": [_trace_dict(tr) for tr in traces],
            }
        )

    if config.format == "json":
        text = _json_text(
            _report_doc(config, results, report.checked, len(report.violations), report.seconds)
        )
    elif config.format == "csv":
        text = _csv_text(
            [
                {
                    "a": r["a"],
                    "b": r["b"],
                    "n": r["n"],
                    "verdict": r["verdict"],
                    "witness_prime": r["witness_prime"],
                    "seconds": f"{report.seconds:.6f}",
                }
                for r in results
            ]
        )
    else:
        mode = "sampled" if args.sample is not None else "exhaustive"
        lines = [
            f"sweep: a <= {args.a_max}, b <= {args.b_max}, n <= {args.n_max} ({mode})",
            f"checked: {report.checked} triples",
            f"violations: {len(report.violations)}",
            f"wall time: {report.seconds:.3f}s",
        ]
        for triple, witness, cert in violation_certs:
            lines.append(f"VIOLATION a={triple.a} b={triple.b} n={triple.n} witness p={witness}")
            lines.extend(f"  {ln}" for ln in _certificate_lines(cert))
        text = "\n".join(lines) + "\n"
    _emit(
        text,
        config,
        f"sweep checked={report.checked} violations={len(report.violations)}",
    )
    return 0 if not report.violations else 1


def _cmd_trace(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="trace",
        params={"a": args.a, "b": args.b, "n": args.n, "modulus": args.modulus},
        out=args.out,
        format=args.format,
    )
    if config.format == "csv":
        raise ValueError("trace does not support csv output; use json or human")
    triple = ParamTriple(args.a, args.b, args.n)
    _guard_scale(args.a, args.n)
    side = ModulusSide(args.modulus)
    started = time.perf_counter()
    traces = traces_for_modulus(triple, side)
    seconds = time.perf_counter() - started
    all_satisfied = all(tr.satisfied for tr in traces)

    if config.format == "json":
        text = _json_text(
            _report_doc(
                config,
                [_trace_dict(tr) for tr in traces],
                len(traces),
                sum(not tr.satisfied for tr in traces),
                seconds,
            )
        )
    else:
        modulus_value = (2 * args.b * args.n + 3) if side is ModulusSide.TWO_BN_PLUS_3 else (2 * args.b * args.n + 1)
        lines = [
            f"trace: a={args.a} b={args.b} n={args.n}, modulus {side.value} = {modulus_value}"
        ]
        for tr in traces:
            lines.extend(_trace_lines(tr))
        lines.append(f"all satisfied: {all_satisfied}")
        text = "\n".join(lines) + "\n"
    _emit(text, config, f"trace {side.value}: {'satisfied' if all_satisfied else 'VIOLATION'}")
    return 0 if all_satisfied else 1


def _cmd_lemma_fuzz(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="lemma-fuzz",
        params={"samples": args.samples, "max_den": args.max_den},
        seed=args.seed,
        out=args.out,
        format=args.format,
    )
    if config.format == "csv":
        raise ValueError("lemma-fuzz does not support csv output; use json or human")
    started = time.perf_counter()
    report = lemma_fuzz(args.samples, args.max_den, seed=args.seed)
    seconds = time.perf_counter() - started

    if config.format == "json":
        results = [
            {
                "x": f"{x.numerator}/{x.denominator}",
                "y": f"{y.numerator}/{y.denominator}",
            }
            for x, y in report.violations
        ]
        text = _json_text(
            _report_doc(config, results, report.samples, len(report.violations), seconds)
        )
    else:
        # No timing line: identical seeds must give byte-identical output.
        lines = [
            f"lemma-fuzz: samples={report.samples} max_den={report.max_den} seed={report.seed}",
            f"violations: {len(report.violations)}",
        ]
        lines.extend(f"VIOLATION at x={x}, y={y}" for x, y in report.violations)
        text = "\n".join(lines) + "\n"
    _emit(text, config, f"lemma-fuzz violations={len(report.violations)}")
    return 0 if not report.violations else 1


def _parse_coefficients(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"{flag} expects a comma-separated integer list: {exc}") from None
    if not values:
        raise ValueError(f"{flag} must list at least one coefficient")
    if any(v < 1 for v in values):
        raise ValueError(f"{flag} coefficients must be >= 1")
    return values


def _cmd_integrality(args: argparse.Namespace) -> int:
    numerators = _parse_coefficients(args.num, "--num")
    denominators = _parse_coefficients(args.den, "--den")
    config = RunConfig(
        command="integrality",
        params={"num": numerators, "den": denominators, "n_max": args.n_max},
        out=args.out,
        format=args.format,
    )
    if sum(numerators) != sum(denominators):
        print(
            f"warning: coefficient sums differ ({sum(numerators)} vs {sum(denominators)}); "
            "such ratios are non-integral for all large n",
            file=sys.stderr,
        )
    ratio = FactorialRatio.from_terms(
        [(LinearForm(c, 0), 1) for c in numerators]
        + [(LinearForm(c, 0), -1) for c in denominators]
    )
    started = time.perf_counter()
    outcomes = [(n, is_integral_at(ratio, n)) for n in range(1, args.n_max + 1)]
    seconds = time.perf_counter() - started
    bad = [(n, res) for n, res in outcomes if not res.integral]

    if config.format == "json":
        results = [
            {"n": n, "integral": res.integral, "witness_prime": res.witness}
            for n, res in outcomes
        ]
        text = _json_text(_report_doc(config, results, len(outcomes), len(bad), seconds))
    elif config.format == "csv":
        text = _csv_text(
            [
                {
                    "a": "",
                    "b": "",
                    "n": n,
                    "verdict": "integral" if res.integral else "non-integral",
                    "witness_prime": "" if res.witness is None else res.witness,
                    "seconds": f"{seconds:.6f}",
                }
                for n, res in outcomes
            ]
        )
    else:
        lines = [f"ratio: {ratio}"]
        for n, res in outcomes:
            verdict = "integral" if res.integral else f"non-integral (witness p={res.witness})"
            lines.append(f"n={n}: {verdict}")
        lines.append(f"non-integral at {len(bad)} of {len(outcomes)} values of n")
        text = "\n".join(lines) + "\n"
    _emit(text, config, f"integrality non-integral={len(bad)}/{len(outcomes)}")
    return 0 if not bad else 1


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    config = RunConfig(
        command="oracle-check", seed=args.seed, out=args.out, format=args.format
    )
    if config.format == "csv":
        raise ValueError("oracle-check does not support csv output; use json or human")
    started = time.perf_counter()
    suites = run_all(seed=args.seed)
    seconds = time.perf_counter() - started
    failed = sum(not s.passed for s in suites)

    if config.format == "json":
        results = [
            {"suite": s.name, "checked": s.checked, "failures": list(s.failures)}
            for s in suites
        ]
        text = _json_text(
            _report_doc(config, results, sum(s.checked for s in suites), failed, seconds)
        )
    else:
        lines = []
        for s in suites:
            status = "ok" if s.passed else f"FAIL ({len(s.failures)} failures)"
            lines.append(f"{s.name:<28} {s.checked:>8} checks  {status}")
            lines.extend(f"    {msg}" for msg in s.failures[:10])
        lines.append(f"suites failed: {failed}/{len(suites)}")
        text = "\n".join(lines) + "\n"
    _emit(text, config, f"oracle-check failed-suites={failed}")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# parser

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _seed_value(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", type=str, default=None, help="write the report to this path")
    sub.add_argument(
        "--format",
        choices=("json", "csv", "human"),
        default="human",
        help="report format (default: human)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binomdiv",
        description=(
            "Exact, valuation-based verification of divisibility properties of "
            "products of binomial coefficients."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="verify one (a, b, n) instance")
    verify.add_argument("--a", type=_positive, required=True)
    verify.add_argument("--b", type=_positive, required=True)
    verify.add_argument("--n", type=_positive, required=True)
    _add_output_flags(verify)
    verify.set_defaults(handler=_cmd_verify)

    sweep = commands.add_parser("sweep", help="verify a whole (a, b, n) box")
    sweep.add_argument("--a-max", type=_positive, required=True)
    sweep.add_argument("--b-max", type=_positive, required=True)
    sweep.add_argument("--n-max", type=_positive, required=True)
    sweep.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    sweep.add_argument("--seed", type=_seed_value, default=DEFAULT_SEED)
    sweep.add_argument(
        "--sample",
        type=_positive,
        default=None,
        help="check only this many seeded-random triples from the box",
    )
    _add_output_flags(sweep)
    sweep.set_defaults(handler=_cmd_sweep)

    trace = commands.add_parser("trace", help="replay the per-prime case analysis")
    trace.add_argument("--a", type=_positive, required=True)
    trace.add_argument("--b", type=_positive, required=True)
    trace.add_argument("--n", type=_positive, required=True)
    trace.add_argument("--modulus", choices=("2bn+1", "2bn+3"), required=True)
    _add_output_flags(trace)
    trace.set_defaults(handler=_cmd_trace)

    fuzz = commands.add_parser("lemma-fuzz", help="fuzz the floor inequality")
    fuzz.add_argument("--samples", type=_positive, required=True)
    fuzz.add_argument("--max-den", type=_positive, default=10**6)
    fuzz.add_argument("--seed", type=_seed_value, default=DEFAULT_SEED)
    _add_output_flags(fuzz)
    fuzz.set_defaults(handler=_cmd_lemma_fuzz)

    integ = commands.add_parser(
        "integrality", help="per-n integrality of (a1 n)!...(ak n)! / (b1 n)!...(bj n)!"
    )
    integ.add_argument("--num", type=str, required=True, help="comma-separated numerator coefficients")
    integ.add_argument("--den", type=str, required=True, help="comma-separated denominator coefficients")
    integ.add_argument("--n-max", type=_positive, required=True)
    _add_output_flags(integ)
    integ.set_defaults(handler=_cmd_integrality)

    check = commands.add_parser("oracle-check", help="run the cross-validation suites")
    check.add_argument("--seed", type=_seed_value, default=DEFAULT_SEED)
    _add_output_flags(check)
    check.set_defaults(handler=_cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except IntegrityError as exc:
        print(f"integrity violation: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OverflowError, ResourceLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
