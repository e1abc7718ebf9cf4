"""Shift-register simulation: the brute-force ground truth for ones counting.

States are integers with bit i holding stage i, so stage 0 is both the output
stage and the least significant bit.  A clock emits stage 0, shifts every
stage down by one, and feeds the XOR of the tapped stages into stage L-1.
The taps come from the reciprocal of the connection polynomial: term x**e of
P(x) taps stage L-e (the constant term is the shift itself, not a tap).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .anf import AnfFunction, RegisterLayout
from .errors import (
    ResourceLimitError,
    UnverifiedPolynomialError,
    ValidationError,
)

__all__ = [
    "DEFAULT_SIMULATION_BUDGET",
    "DEFAULT_VERIFICATION_BOUND",
    "DEFAULT_TRUTHTABLE_BITS",
    "PRIMITIVE_POLYNOMIALS",
    "LfsrConfig",
    "GeneratorInstance",
    "lfsr_step",
    "state_cycle",
    "generate_output",
    "iter_output_chunks",
    "count_ones_simulated",
    "count_ones_truthtable",
    "verify_maximum_length",
    "monobit_statistic",
]

DEFAULT_SIMULATION_BUDGET = 1 << 31
DEFAULT_VERIFICATION_BOUND = 24
DEFAULT_TRUTHTABLE_BITS = 20

# Vectorized counting materializes one full state cycle per register.
_VECTOR_CYCLE_CAP = 1 << 24
_CHUNK = 1 << 20

# Two maximum-length connection polynomials per degree (only one exists for
# degree 2), as exponent tuples, smallest coefficient masks first.  Every
# entry is re-verified by the test suite.
PRIMITIVE_POLYNOMIALS: dict[int, tuple[tuple[int, ...], ...]] = {
    2: ((2, 1, 0),),
    3: ((3, 1, 0), (3, 2, 0)),
    4: ((4, 1, 0), (4, 3, 0)),
    5: ((5, 2, 0), (5, 3, 0)),
    6: ((6, 1, 0), (6, 4, 3, 1, 0)),
    7: ((7, 1, 0), (7, 3, 0)),
    8: ((8, 4, 3, 2, 0), (8, 5, 3, 1, 0)),
    9: ((9, 4, 0), (9, 4, 3, 1, 0)),
    10: ((10, 3, 0), (10, 4, 3, 1, 0)),
    11: ((11, 2, 0), (11, 4, 2, 1, 0)),
    12: ((12, 6, 4, 1, 0), (12, 6, 5, 3, 0)),
    13: ((13, 4, 3, 1, 0), (13, 5, 2, 1, 0)),
    14: ((14, 5, 3, 1, 0), (14, 5, 4, 3, 0)),
    15: ((15, 1, 0), (15, 4, 0)),
    16: ((16, 5, 3, 2, 0), (16, 5, 4, 3, 0)),
}


@dataclass(frozen=True)
class LfsrConfig:
    """One register: stage count, connection polynomial, starting state.

    The polynomial is the set of exponents with coefficient 1; it must have
    degree equal to the register length and a constant term.  The default
    starting state is all ones.
    """

    length: int
    polynomial: frozenset[int]
    initial_state: int | None = None

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValidationError("register length must be positive")
        exponents = frozenset(self.polynomial)
        object.__setattr__(self, "polynomial", exponents)
        if any(not 0 <= e <= self.length for e in exponents):
            raise ValidationError(
                f"polynomial exponents must lie in [0, {self.length}]"
            )
        if 0 not in exponents or self.length not in exponents:
            raise ValidationError(
                f"connection polynomial needs both the x^{self.length} term and"
                " a constant term"
            )
        if self.initial_state is None:
            object.__setattr__(self, "initial_state", (1 << self.length) - 1)
        if not 0 < self.initial_state < (1 << self.length):
            raise ValidationError(
                "initial state must be nonzero and fit the register"
            )

    @classmethod
    def standard(cls, length: int, initial_state: int | None = None) -> "LfsrConfig":
        """Config using the first built-in maximum-length polynomial."""
        if length not in PRIMITIVE_POLYNOMIALS:
            raise ValidationError(
                f"no built-in maximum-length polynomial for length {length};"
                " supply one explicitly"
            )
        exponents = PRIMITIVE_POLYNOMIALS[length][0]
        return cls(length, frozenset(exponents), initial_state)

    @property
    def tap_mask(self) -> int:
        mask = 0
        for e in self.polynomial:
            if e:
                mask |= 1 << (self.length - e)
        return mask

    @property
    def polynomial_as_int(self) -> int:
        return sum(1 << e for e in self.polynomial)


@dataclass(frozen=True)
class GeneratorInstance:
    """A layout, one configured register per layout entry, and the function
    combining the joint stage contents into the output bit."""

    layout: RegisterLayout
    lfsrs: tuple[LfsrConfig, ...]
    function: AnfFunction

    def __post_init__(self) -> None:
        if len(self.lfsrs) != len(self.layout.registers):
            raise ValidationError("one register config per layout entry required")
        for cfg, reg in zip(self.lfsrs, self.layout.registers):
            if cfg.length != reg.length:
                raise ValidationError(
                    f"register {reg.name}: config length {cfg.length} does not"
                    f" match layout length {reg.length}"
                )
        if self.function.layout != self.layout:
            raise ValidationError("function layout does not match generator layout")


def lfsr_step(state: int, config: LfsrConfig) -> tuple[int, int]:
    """One clock: return (output bit, next state)."""
    if not 0 < state < (1 << config.length):
        raise ValidationError("state must be nonzero and fit the register")
    output = state & 1
    feedback = (state & config.tap_mask).bit_count() & 1
    return output, (state >> 1) | (feedback << (config.length - 1))


def state_cycle(config: LfsrConfig) -> list[int]:
    """States visited over one nominal period, starting at the seed.

    The walk takes exactly 2**length - 1 steps and checks that it lands back
    on the seed, so a polynomial whose cycle length does not divide the
    nominal period is rejected here.
    """
    period = (1 << config.length) - 1
    states = []
    s = config.initial_state
    for _ in range(period):
        states.append(s)
        _, s = lfsr_step(s, config)
    if s != config.initial_state:
        raise ValidationError(
            "state walk does not return to the seed after"
            f" {period} steps; the connection polynomial does not sustain the"
            " nominal period"
        )
    return states


def generate_output(g: GeneratorInstance, steps: int) -> list[int]:
    """First `steps` output bits, all registers clocking simultaneously.

    Plain per-step reference path; the chunked path used for full-period
    counting is cross-checked against it.
    """
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    states = [cfg.initial_state for cfg in g.lfsrs]
    offsets = [reg.offset for reg in g.layout.registers]
    evaluate = g.function.evaluate
    out = []
    for _ in range(steps):
        joint = 0
        for s, off in zip(states, offsets):
            joint |= s << off
        out.append(evaluate(joint))
        for i, cfg in enumerate(g.lfsrs):
            _, states[i] = lfsr_step(states[i], cfg)
    return out


def iter_output_chunks(
    g: GeneratorInstance, steps: int, *, chunk: int = _CHUNK
) -> Iterator[np.ndarray]:
    """Output bits as uint8 arrays, built from the stepped per-register cycles.

    Register I repeats its own state cycle every 2**L_I - 1 steps, so the
    joint state at step t is a pure reindexing of the per-register walks; the
    combination is vectorized while each walk itself comes from lfsr_step.
    """
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    if g.layout.total_length > 62:
        raise ResourceLimitError(
            "layout too wide to pack joint states for vectorized output"
        )
    cycles = []
    for cfg, reg in zip(g.lfsrs, g.layout.registers):
        period = (1 << cfg.length) - 1
        if period > _VECTOR_CYCLE_CAP:
            raise ResourceLimitError(
                f"register {reg.name}: period {period} too large to materialize"
                " a state cycle"
            )
        cycles.append(np.array(state_cycle(cfg), dtype=np.int64))
    offsets = [reg.offset for reg in g.layout.registers]
    terms = sorted(g.function.terms)
    start = 0
    while start < steps:
        n = min(chunk, steps - start)
        idx = np.arange(start, start + n, dtype=np.int64)
        joint = np.zeros(n, dtype=np.int64)
        for cycle, offset in zip(cycles, offsets):
            joint |= cycle[idx % len(cycle)] << offset
        out = np.zeros(n, dtype=bool)
        for t in terms:
            out ^= (joint & t) == t
        yield out.astype(np.uint8)
        start += n


def count_ones_simulated(
    g: GeneratorInstance,
    *,
    max_steps: int | None = None,
    verify_polynomials: bool = True,
    verification_bound: int = DEFAULT_VERIFICATION_BOUND,
    chunk: int = _CHUNK,
) -> int:
    """Ones in exactly one full period of generated output.

    The count depends only on the combining function and the register
    lengths: seeds rotate the sequence and maximum-length polynomials permute
    the state order, neither changes the multiset of joint states visited.

    Raises:
        ResourceLimitError: if the full period exceeds the step budget.
        ValidationError: if a polynomial fails maximum-length verification.
        UnverifiedPolynomialError: if one cannot be verified and
            verify_polynomials was left on.
    """
    period = g.layout.period()
    budget = DEFAULT_SIMULATION_BUDGET if max_steps is None else max_steps
    if period > budget:
        raise ResourceLimitError(
            f"full period {period} exceeds the simulation budget {budget}"
        )
    if verify_polynomials:
        for cfg, reg in zip(g.lfsrs, g.layout.registers):
            if not verify_maximum_length(cfg, bound=verification_bound):
                raise ValidationError(
                    f"register {reg.name}: connection polynomial is not"
                    " maximum-length"
                )
    total = 0
    for bits in iter_output_chunks(g, period, chunk=chunk):
        total += int(bits.sum())
    return total


def count_ones_truthtable(
    f: AnfFunction, *, max_bits: int = DEFAULT_TRUTHTABLE_BITS
) -> int:
    """Ones per period counted assignment by assignment.

    Walks every joint assignment whose register segments are all nonzero
    (each register visits each of its nonzero states; the zero state never
    occurs) and counts those where f evaluates to 1.
    """
    layout = f.layout
    length = layout.total_length
    if not 1 <= max_bits <= 62:
        raise ValidationError("truth-table bound must lie in [1, 62]")
    if length > max_bits:
        raise ResourceLimitError(
            f"{length}-bit layout above the {max_bits}-bit truth-table guard"
        )
    x = np.arange(1 << length, dtype=np.int64)
    on = np.zeros(1 << length, dtype=bool)
    for t in sorted(f.terms):
        on ^= (x & t) == t
    valid = np.ones(1 << length, dtype=bool)
    for reg in layout.registers:
        valid &= ((x >> reg.offset) & ((1 << reg.length) - 1)) != 0
    return int(np.count_nonzero(on & valid))


def verify_maximum_length(
    config: LfsrConfig, *, bound: int = DEFAULT_VERIFICATION_BOUND
) -> bool:
    """True exactly when every nonzero seed walks a full 2**L - 1 state cycle.

    Decided through the multiplicative order of x modulo the polynomial,
    which equals the state cycle length; the equivalence is exercised against
    direct cycle enumeration in the tests.

    Raises:
        UnverifiedPolynomialError: degree above `bound`; such a polynomial can
            only be accepted by explicit trust, never silently.
    """
    if config.length > bound:
        raise UnverifiedPolynomialError(
            f"degree {config.length} is above the verification bound {bound};"
            " the polynomial can only be trusted explicitly"
        )
    return _is_primitive(config.polynomial_as_int, config.length)


def monobit_statistic(bits: Iterable[int]) -> tuple[int, Fraction]:
    """Ones count and exact ones proportion of a bit sequence."""
    ones = 0
    total = 0
    for b in bits:
        if b not in (0, 1):
            raise ValidationError(f"sequence holds non-bit value {b!r}")
        ones += b
        total += 1
    if total == 0:
        raise ValidationError("empty sequence has no monobit statistic")
    return ones, Fraction(ones, total)


# -- GF(2) polynomial arithmetic on integer masks ----------------------------


def _poly_mod(a: int, mod: int) -> int:
    deg = mod.bit_length() - 1
    while a.bit_length() - 1 >= deg and a:
        a ^= mod << (a.bit_length() - 1 - deg)
    return a


def _poly_mulmod(a: int, b: int, mod: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
    return _poly_mod(result, mod)


def _poly_powmod(base: int, exponent: int, mod: int) -> int:
    result = 1
    base = _poly_mod(base, mod)
    while exponent:
        if exponent & 1:
            result = _poly_mulmod(result, base, mod)
        base = _poly_mulmod(base, base, mod)
        exponent >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def _is_primitive(poly: int, degree: int) -> bool:
    # order of x modulo the polynomial must be exactly 2**degree - 1
    n = (1 << degree) - 1
    x = 0b10
    if _poly_powmod(x, n, poly) != 1:
        return False
    return all(_poly_powmod(x, n // p, poly) != 1 for p in _prime_factors(n))
