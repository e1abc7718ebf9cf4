"""Verdict layer: exact counts into Accept/Reject plus structural findings.

All balancedness arithmetic is exact rational; no float ever touches a
decision boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .anf import AnfFunction, Register, RegisterLayout
from .errors import ValidationError
from .minterms import (
    DEFAULT_MAX_SUM_ENTRIES,
    MintermSum,
    accumulate,
    exact_ones_multi,
    minterm_masks,
)

__all__ = [
    "DEFAULT_TOLERANCE",
    "VerdictPolicy",
    "RuleFinding",
    "AnalysisReport",
    "verdict",
    "magnitude_label",
    "check_isolated_linear_term",
    "heuristic_findings",
    "analyze",
]

DEFAULT_TOLERANCE = Fraction(1, 100)

SEVERITY_GUARANTEE = "guarantee"
SEVERITY_WARNING = "warning"

RULE_ISOLATED_LINEAR_TERM = "ISOLATED_LINEAR_TERM"
RULE_ALL_LINEAR_TERMS = "ALL_LINEAR_TERMS"
RULE_COMMON_FACTOR = "COMMON_FACTOR"

# magnitude anchors in quarter-periods, with their display tags
_ANCHORS = (
    (0, "≈ 0"),
    (1, "≈ T/4"),
    (2, "≈ T/2"),
    (3, "≈ T/2 + T/4"),
    (4, "≈ T"),
)


@dataclass(frozen=True)
class VerdictPolicy:
    """Accept when |ones - T/2| <= tolerance * T, compared exactly."""

    relative_tolerance: Fraction = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        tol = Fraction(self.relative_tolerance)
        object.__setattr__(self, "relative_tolerance", tol)
        if not 0 <= tol <= Fraction(1, 2):
            raise ValidationError("tolerance must lie in [0, 1/2]")


@dataclass(frozen=True)
class RuleFinding:
    """One structural observation about a function, with concrete evidence."""

    rule_id: str
    severity: str
    message: str
    evidence: tuple[str, ...]


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the exact analysis produced, as plain data."""

    layout: RegisterLayout
    function_text: str
    period: int
    ones: int
    zeros: int
    expected_ones: int
    deviation: Fraction
    tolerance: Fraction
    verdict: str
    magnitude_label: str
    findings: tuple[RuleFinding, ...]
    final_sum: MintermSum

    def to_json_dict(self) -> dict:
        """JSON-ready dict; counts as decimal strings, rationals as p/q."""
        return {
            "function": self.function_text,
            "registers": [
                {"name": reg.name, "length": reg.length}
                for reg in self.layout.registers
            ],
            "period": str(self.period),
            "ones": str(self.ones),
            "zeros": str(self.zeros),
            "expected_ones": str(self.expected_ones),
            "deviation": str(self.deviation),
            "tolerance": str(self.tolerance),
            "verdict": self.verdict,
            "magnitude_label": self.magnitude_label,
            "findings": [
                {
                    "rule": f.rule_id,
                    "severity": f.severity,
                    "message": f.message,
                    "evidence": list(f.evidence),
                }
                for f in self.findings
            ],
            "sum": [
                {"mask": self.layout.format_mask(mask), "coefficient": str(coeff)}
                for mask, coeff in self.final_sum.sorted_items()
            ],
        }


def verdict(ones: int, period: int, policy: VerdictPolicy | None = None) -> str:
    """"accept" when the ones count sits within tolerance of half the period."""
    if period < 1:
        raise ValidationError("period must be positive")
    if not 0 <= ones <= period:
        raise ValidationError(f"ones count {ones} outside [0, {period}]")
    policy = policy or VerdictPolicy()
    deviation = Fraction(abs(2 * ones - period), 2 * period)
    return "accept" if deviation <= policy.relative_tolerance else "reject"


def magnitude_label(ones: int, period: int) -> str:
    """Coarse human tag: nearest quarter-period anchor within 5% of the
    period, otherwise "irregular"."""
    if period < 1:
        raise ValidationError("period must be positive")
    if not 0 <= ones <= period:
        raise ValidationError(f"ones count {ones} outside [0, {period}]")
    best = min(_ANCHORS, key=lambda a: abs(4 * ones - a[0] * period))
    # distance is |ones - anchor| = |4*ones - q*T| / 4; within T/20 keeps the tag
    if 5 * abs(4 * ones - best[0] * period) <= period:
        return best[1]
    return "irregular"


def _register_of(layout: RegisterLayout, bit: int) -> Register:
    for reg in layout.registers:
        if reg.offset <= bit < reg.offset + reg.length:
            return reg
    raise ValidationError(f"bit {bit} outside layout")


def check_isolated_linear_term(f: AnfFunction) -> RuleFinding | None:
    """Detect a standalone linear monomial whose variable appears nowhere else.

    For a single-register generator such a term forces exactly 2**(L-1) ones
    per period, whatever the rest of the function does, so the finding is a
    guarantee and needs no counting.  For multi-register generators the same
    shape only suggests near-balance, so it is reported as a warning-level
    note instead.
    """
    singles = sorted(t for t in f.terms if t.bit_count() == 1)
    for term in singles:
        if any(other != term and other & term for other in f.terms):
            continue
        name = f.layout.variable_name(term.bit_length() - 1)
        if len(f.layout.registers) == 1:
            length = f.layout.total_length
            return RuleFinding(
                rule_id=RULE_ISOLATED_LINEAR_TERM,
                severity=SEVERITY_GUARANTEE,
                message=(
                    f"variable {name} forms a monomial of its own and appears in"
                    f" no other monomial; the full-period output carries exactly"
                    f" 2^{length - 1} ones"
                ),
                evidence=(name,),
            )
        reg = _register_of(f.layout, term.bit_length() - 1)
        return RuleFinding(
            rule_id=RULE_ISOLATED_LINEAR_TERM,
            severity=SEVERITY_WARNING,
            message=(
                f"variable {name} of register {reg.name} forms a monomial of its"
                " own and appears in no other monomial; expect the ones count"
                " near half the period, though the exact-half guarantee only"
                " holds for single-register generators"
            ),
            evidence=(name,),
        )
    return None


def heuristic_findings(f: AnfFunction) -> list[RuleFinding]:
    """Design-rule warnings about likely imbalance; never override counting."""
    findings: list[RuleFinding] = []
    layout = f.layout
    if not f.terms:
        return findings

    singles = sorted(t for t in f.terms if t.bit_count() == 1)
    covered = {_register_of(layout, t.bit_length() - 1).name for t in singles}
    has_products = any(t.bit_count() >= 2 for t in f.terms)
    if has_products and covered == {reg.name for reg in layout.registers}:
        names = tuple(layout.variable_name(t.bit_length() - 1) for t in singles)
        findings.append(
            RuleFinding(
                rule_id=RULE_ALL_LINEAR_TERMS,
                severity=SEVERITY_WARNING,
                message=(
                    "every register contributes a standalone linear monomial"
                    " next to higher-order monomials; expansions barely cancel"
                    " and the ones count lands well above half the period"
                ),
                evidence=names,
            )
        )

    common = ~0
    for t in f.terms:
        common &= t
    if common:
        names = tuple(
            layout.variable_name(b)
            for b in range(layout.total_length)
            if common >> b & 1
        )
        findings.append(
            RuleFinding(
                rule_id=RULE_COMMON_FACTOR,
                severity=SEVERITY_WARNING,
                message=(
                    f"variable{'s' if len(names) > 1 else ''} {', '.join(names)}"
                    " appear in every monomial; expansions overlap heavily and"
                    " the ones count lands well below half the period"
                ),
                evidence=names,
            )
        )
    return findings


def analyze(
    f: AnfFunction,
    policy: VerdictPolicy | None = None,
    *,
    max_sum_entries: int = DEFAULT_MAX_SUM_ENTRIES,
) -> AnalysisReport:
    """Full exact analysis of a combining function over its layout.

    Counts the ones of one whole output period symbolically, renders the
    balancedness verdict under the policy, and attaches structural findings.
    No output bits are ever generated.
    """
    policy = policy or VerdictPolicy()
    layout = f.layout
    period = layout.period()
    final_sum = accumulate(
        minterm_masks(f), layout.total_length, max_entries=max_sum_entries
    )
    ones = exact_ones_multi(final_sum, layout)
    zeros = period - ones
    deviation = Fraction(abs(2 * ones - period), 2 * period)

    findings: list[RuleFinding] = []
    isolated = check_isolated_linear_term(f)
    if isolated is not None:
        findings.append(isolated)
    findings.extend(heuristic_findings(f))

    return AnalysisReport(
        layout=layout,
        function_text=f.to_text(),
        period=period,
        ones=ones,
        zeros=zeros,
        expected_ones=(period + 1) // 2,
        deviation=deviation,
        tolerance=policy.relative_tolerance,
        verdict="accept" if deviation <= policy.relative_tolerance else "reject",
        magnitude_label=magnitude_label(ones, period),
        findings=tuple(findings),
        final_sum=final_sum,
    )
