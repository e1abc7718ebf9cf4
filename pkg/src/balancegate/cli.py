"""Command line: analyze, expand, simulate, verify, check-rules.

Exit codes: 0 success/Accept, 1 I/O, 2 validation or parse, 3 Reject,
4 resource guard, 5 cross-validation disagreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .analyzer import (
    SEVERITY_GUARANTEE,
    AnalysisReport,
    VerdictPolicy,
    analyze,
    check_isolated_linear_term,
    heuristic_findings,
)
from .errors import (
    BalanceGateError,
    DisagreementError,
    ResourceLimitError,
    UnverifiedPolynomialError,
    ValidationError,
)
from .lfsr import (
    DEFAULT_SIMULATION_BUDGET,
    count_ones_simulated,
    count_ones_truthtable,
    generate_output,
    iter_output_chunks,
    verify_maximum_length,
)
from .minterms import (
    DEFAULT_MAX_SUM_ENTRIES,
    accumulate,
    exact_ones_multi,
    minterm_expansion,
    minterm_masks,
)
from .specfile import GeneratorSpec, load_spec

ENV_MAX_PERIOD = "BALANCEGATE_MAX_PERIOD"

# below this many steps the plain per-step path is cheaper than
# materializing register cycles
_STEPWISE_CUTOFF = 4096


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balancegate",
        description=(
            "Exact full-period balancedness analysis of LFSR-based keystream"
            " generators, from the combining function alone."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze_p = sub.add_parser(
        "analyze", help="exact ones count, verdict, and findings"
    )
    analyze_p.add_argument("spec", help="generator description file")
    analyze_p.add_argument("--json", action="store_true", help="machine-readable report")
    analyze_p.add_argument(
        "--tolerance",
        metavar="P/Q",
        help="accept tolerance as an exact fraction (overrides the file)",
    )
    _add_sum_cap(analyze_p)
    analyze_p.set_defaults(handler=_cmd_analyze)

    expand_p = sub.add_parser(
        "expand", help="list the minterms making up the function"
    )
    expand_p.add_argument("spec", help="generator description file")
    expand_p.set_defaults(handler=_cmd_expand)

    simulate_p = sub.add_parser(
        "simulate", help="generate output bits by clocking the registers"
    )
    simulate_p.add_argument("spec", help="generator description file")
    group = simulate_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--steps", type=int, metavar="N", help="number of bits")
    group.add_argument(
        "--full-period", action="store_true", help="run one whole period"
    )
    simulate_p.add_argument(
        "--dump", action="store_true", help="print the bits, 64 per line"
    )
    _add_trust(simulate_p)
    simulate_p.set_defaults(handler=_cmd_simulate)

    verify_p = sub.add_parser(
        "verify", help="cross-check the symbolic count against brute force"
    )
    verify_p.add_argument("spec", help="generator description file")
    _add_trust(verify_p)
    _add_sum_cap(verify_p)
    verify_p.set_defaults(handler=_cmd_verify)

    rules_p = sub.add_parser(
        "check-rules", help="structural guarantees and design-rule warnings"
    )
    rules_p.add_argument("spec", help="generator description file")
    rules_p.set_defaults(handler=_cmd_check_rules)

    return parser


def _add_sum_cap(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--max-h-entries",
        type=int,
        default=DEFAULT_MAX_SUM_ENTRIES,
        metavar="N",
        help="cap on tracked signed-sum entries (default %(default)s)",
    )


def _add_trust(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--trust-poly",
        action="store_true",
        help="accept polynomials without maximum-length verification",
    )


def _notice(message: str) -> None:
    print(f"notice: {message}", file=sys.stderr)


def _resolve_budget() -> int:
    raw = os.environ.get(ENV_MAX_PERIOD)
    if raw is None:
        return DEFAULT_SIMULATION_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(
            f"{ENV_MAX_PERIOD} must be an integer, got {raw!r}"
        ) from None
    if value < 1:
        raise ValidationError(f"{ENV_MAX_PERIOD} must be positive")
    return value


def _resolve_policy(args, spec: GeneratorSpec) -> VerdictPolicy:
    if getattr(args, "tolerance", None) is not None:
        try:
            tol = Fraction(args.tolerance.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(
                f"--tolerance must be a fraction like 1/100, got {args.tolerance!r}"
            ) from None
        return VerdictPolicy(tol)
    if spec.tolerance is not None:
        return VerdictPolicy(spec.tolerance)
    return VerdictPolicy()


def _check_polynomials(g) -> None:
    for cfg, reg in zip(g.lfsrs, g.layout.registers):
        try:
            ok = verify_maximum_length(cfg)
        except UnverifiedPolynomialError as exc:
            raise ValidationError(
                f"register {reg.name}: {exc}; pass --trust-poly to proceed"
            ) from exc
        if not ok:
            raise ValidationError(
                f"register {reg.name}: connection polynomial is not maximum-length"
            )


class _DumpWriter:
    def __init__(self, stream):
        self.stream = stream
        self.pending = ""

    def feed(self, bits: np.ndarray) -> None:
        self.pending += (bits + ord("0")).astype(np.uint8).tobytes().decode("ascii")
        while len(self.pending) >= 64:
            self.stream.write(self.pending[:64] + "\n")
            self.pending = self.pending[64:]

    def close(self) -> None:
        if self.pending:
            self.stream.write(self.pending + "\n")
            self.pending = ""


def _print_report(report: AnalysisReport) -> None:
    layout = report.layout
    registers = ", ".join(f"{r.name}({r.length})" for r in layout.registers)
    print(f"function:   {report.function_text}")
    print(f"registers:  {registers}")
    print(f"period:     {report.period}")
    print(f"ones:       {report.ones}")
    print(f"zeros:      {report.zeros}")
    print(f"expected:   {report.expected_ones}")
    print(f"deviation:  {report.deviation} of the period")
    print(f"magnitude:  {report.magnitude_label}")
    print(f"tolerance:  {report.tolerance}")
    print(f"verdict:    {report.verdict.upper()}")
    if report.findings:
        print("findings:")
        for finding in report.findings:
            evidence = ", ".join(finding.evidence)
            print(f"  [{finding.severity}] {finding.rule_id} ({evidence}):")
            print(f"      {finding.message}")
    if not report.final_sum.is_empty:
        print("final sum:")
        for mask, coeff in report.final_sum.sorted_items():
            sign = "+" if coeff > 0 else "-"
            print(f"  {sign}[{abs(coeff)}] {layout.format_mask(mask)}")


def _cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    policy = _resolve_policy(args, spec)
    report = analyze(spec.function(), policy, max_sum_entries=args.max_h_entries)
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        _print_report(report)
    return 0 if report.verdict == "accept" else 3


def _cmd_expand(args) -> int:
    spec = load_spec(args.spec)
    f = spec.function()
    layout = f.layout
    masks = sorted(minterm_expansion(f), reverse=True)
    if not masks:
        print("0 minterms")
        return 0
    listing = ", ".join(layout.format_mask(m) for m in masks)
    noun = "minterm" if len(masks) == 1 else "minterms"
    print(f"{listing} ({len(masks)} {noun})")
    return 0


def _cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    g = spec.instance(notice=_notice)
    budget = _resolve_budget()
    if args.full_period:
        if not args.trust_poly:
            _check_polynomials(g)
        steps = g.layout.period()
    else:
        if args.steps < 0:
            raise ValidationError("--steps must be non-negative")
        steps = args.steps
    if steps > budget:
        raise ResourceLimitError(
            f"{steps} steps exceed the simulation budget {budget}"
            f" (set {ENV_MAX_PERIOD} to raise it)"
        )

    writer = _DumpWriter(sys.stdout) if args.dump else None
    total = 0
    if steps <= _STEPWISE_CUTOFF:
        bits = np.array(generate_output(g, steps), dtype=np.uint8)
        total = int(bits.sum())
        if writer and steps:
            writer.feed(bits)
    else:
        for chunk in iter_output_chunks(g, steps):
            total += int(chunk.sum())
            if writer:
                writer.feed(chunk)
    if writer:
        writer.close()
    print(f"steps: {steps}")
    print(f"ones: {total}")
    return 0


def _cmd_verify(args) -> int:
    spec = load_spec(args.spec)
    f = spec.function()
    layout = f.layout
    period = layout.period()

    final_sum = accumulate(
        minterm_masks(f), layout.total_length, max_entries=args.max_h_entries
    )
    symbolic = exact_ones_multi(final_sum, layout)
    print(f"symbolic:    {symbolic}")

    results = [symbolic]
    try:
        truth = count_ones_truthtable(f)
    except ResourceLimitError as exc:
        print(f"truth-table: skipped ({exc})")
    else:
        results.append(truth)
        print(f"truth-table: {truth}")

    budget = _resolve_budget()
    if period > budget:
        print(
            f"simulated:   skipped (period {period} exceeds the simulation"
            f" budget {budget})"
        )
    else:
        g = spec.instance(notice=_notice)
        if not args.trust_poly:
            _check_polynomials(g)
        simulated = count_ones_simulated(
            g, max_steps=budget, verify_polynomials=False
        )
        results.append(simulated)
        print(f"simulated:   {simulated}")

    if len(results) < 2:
        raise ValidationError(
            "instance too large for any brute-force oracle; nothing to verify"
            " against"
        )
    if len(set(results)) == 1:
        print("agreement:   PASS")
        return 0
    print("agreement:   FAIL")
    raise DisagreementError(
        "independently computed ones counts disagree: "
        + ", ".join(str(r) for r in results)
    )


def _cmd_check_rules(args) -> int:
    spec = load_spec(args.spec)
    f = spec.function()
    findings = []
    isolated = check_isolated_linear_term(f)
    if isolated is not None and isolated.severity == SEVERITY_GUARANTEE:
        findings.append(isolated)
    findings.extend(heuristic_findings(f))
    if not findings:
        print("no findings")
        return 0
    for finding in findings:
        evidence = ", ".join(finding.evidence)
        print(f"[{finding.severity}] {finding.rule_id} ({evidence}): {finding.message}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BalanceGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
