"""Boolean functions in algebraic normal form over the stages of shift registers.

A monomial is the integer mask of its variable set; a function is a set of
monomial masks combined by exclusive OR.  Bit 0 is the rightmost position.
Registers partition the global positions: the first register owns the lowest
bits, the second the bits directly above it, and so on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .errors import ExpressionError, ValidationError

__all__ = [
    "Register",
    "RegisterLayout",
    "AnfFunction",
    "parse_function",
]

_VAR_RE = re.compile(r"([A-Za-z])([0-9]+)")
_XOR_SPLIT = re.compile(r"[+^]")


@dataclass(frozen=True)
class Register:
    """One shift register: single-letter name, stage count, global bit offset."""

    name: str
    length: int
    offset: int


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered registers partitioning global bit positions 0 .. L-1."""

    registers: tuple[Register, ...]

    def __post_init__(self) -> None:
        if not self.registers:
            raise ValidationError("layout needs at least one register")
        seen = set()
        offset = 0
        for reg in self.registers:
            if len(reg.name) != 1 or not reg.name.isalpha():
                raise ValidationError(
                    f"register name must be a single letter, got {reg.name!r}"
                )
            if reg.name in seen:
                raise ValidationError(f"duplicate register name {reg.name!r}")
            seen.add(reg.name)
            if reg.length < 1:
                raise ValidationError(f"register {reg.name}: length must be positive")
            if reg.offset != offset:
                raise ValidationError(
                    f"register {reg.name}: offset {reg.offset} is not cumulative"
                    f" (expected {offset})"
                )
            offset += reg.length

    @classmethod
    def from_lengths(cls, items) -> "RegisterLayout":
        """Build a layout from (name, length) pairs or a name -> length mapping."""
        if isinstance(items, dict):
            items = list(items.items())
        regs = []
        offset = 0
        for name, length in items:
            regs.append(Register(name, length, offset))
            offset += length
        return cls(tuple(regs))

    @classmethod
    def single(cls, length: int, name: str = "m") -> "RegisterLayout":
        return cls((Register(name, length, 0),))

    @property
    def total_length(self) -> int:
        last = self.registers[-1]
        return last.offset + last.length

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise ValidationError(f"unknown register {name!r}")

    def has_coprime_lengths(self) -> bool:
        lengths = [r.length for r in self.registers]
        return all(
            gcd(lengths[i], lengths[j]) == 1
            for i in range(len(lengths))
            for j in range(i + 1, len(lengths))
        )

    def period(self) -> int:
        """Joint output period: the product of the per-register periods 2**len - 1.

        Raises:
            ValidationError: if the register lengths are not pairwise coprime,
                in which case the product formula does not apply.
        """
        if not self.has_coprime_lengths():
            raise ValidationError(
                "register lengths must be pairwise coprime for period computation"
            )
        t = 1
        for reg in self.registers:
            t *= (1 << reg.length) - 1
        return t

    def variable_name(self, bit: int) -> str:
        for reg in self.registers:
            if reg.offset <= bit < reg.offset + reg.length:
                return f"{reg.name}{bit - reg.offset}"
        raise ValidationError(f"bit {bit} outside layout")

    def segment_value(self, mask: int, reg: Register) -> int:
        return (mask >> reg.offset) & ((1 << reg.length) - 1)

    def format_mask(self, mask: int) -> str:
        """Grouped bit-string form, one group per register, first register rightmost."""
        if not 0 <= mask < (1 << self.total_length):
            raise ValidationError(f"mask {mask} outside layout of {self.total_length} bits")
        return " ".join(
            format(self.segment_value(mask, reg), f"0{reg.length}b")
            for reg in reversed(self.registers)
        )


@dataclass(frozen=True)
class AnfFunction:
    """Exclusive-OR combination of monomials, kept canonical.

    Canonical means: no duplicate monomials, no constant term, every mask
    nonzero and inside the layout.  The empty term set is legal and denotes
    the all-zero function.
    """

    layout: RegisterLayout
    terms: frozenset[int]

    def __post_init__(self) -> None:
        limit = 1 << self.layout.total_length
        for t in self.terms:
            if not 0 < t < limit:
                raise ValidationError(
                    f"term mask {t!r} outside layout of {self.layout.total_length} bits"
                )

    def evaluate(self, assignment: int) -> int:
        """Value at the given assignment; bit i of the integer is variable i."""
        if not 0 <= assignment < (1 << self.layout.total_length):
            raise ValidationError("assignment does not match layout width")
        acc = 0
        for t in self.terms:
            if assignment & t == t:
                acc ^= 1
        return acc

    def __xor__(self, other: "AnfFunction") -> "AnfFunction":
        if self.layout != other.layout:
            raise ValidationError("cannot combine functions over different layouts")
        return AnfFunction(self.layout, self.terms ^ other.terms)

    def to_text(self) -> str:
        """Render in the input grammar; round-trips through parse_function.

        The empty function renders as "0" for display, which is deliberately
        not re-parseable (constants are rejected on input).
        """
        if not self.terms:
            return "0"
        top = self.layout.total_length - 1
        monomials = []
        for mask in sorted(self.terms, reverse=True):
            variables = [
                self.layout.variable_name(b) for b in range(top, -1, -1) if mask >> b & 1
            ]
            monomials.append("*".join(variables))
        return " ^ ".join(monomials)


def parse_function(text: str, layout: RegisterLayout) -> AnfFunction:
    """Parse an ANF expression over the layout's variables.

    Grammar: variables are <register-letter><decimal-index> (m0, a12, ...);
    '*' joins variables into a monomial; '^' or '+' joins monomials, both
    meaning exclusive OR; whitespace is ignored.  In a single-register layout
    the letter may be dropped for indices 2 and up; bare "0" and "1" always
    read as the unsupported constants and are rejected (write m0 / m1).

    Duplicate variables inside a monomial collapse (x*x = x) and duplicate
    monomials cancel in pairs, so the result is canonical; cancelling down to
    the empty function is legal, empty input text is not.
    """
    if not text or not text.strip():
        raise ExpressionError("empty expression")
    terms: set[int] = set()
    for monomial_text in _XOR_SPLIT.split(text):
        monomial_text = monomial_text.strip()
        if not monomial_text:
            raise ExpressionError("empty monomial (stray '^' or '+')")
        mask = 0
        for token in monomial_text.split("*"):
            token = token.strip()
            if not token:
                raise ExpressionError(
                    f"empty variable (stray '*') in monomial {monomial_text!r}"
                )
            mask |= _variable_bit(token, layout)
        # self-inverse under XOR: adding a monomial twice removes it
        terms ^= {mask}
    return AnfFunction(layout, frozenset(terms))


def _variable_bit(token: str, layout: RegisterLayout) -> int:
    m = _VAR_RE.fullmatch(token)
    if m:
        name, index_text = m.group(1), m.group(2)
        reg = layout.register(name)
        index = int(index_text)
        if index >= reg.length:
            raise ExpressionError(
                f"variable {token}: index {index} out of range for register"
                f" {name} of length {reg.length}"
            )
        return 1 << (reg.offset + index)
    if token.isdigit():
        if token in ("0", "1"):
            raise ExpressionError(
                f"constant term {token!r} is not supported; functions must be"
                " constant-free"
            )
        if len(layout.registers) == 1:
            reg = layout.registers[0]
            index = int(token)
            if index >= reg.length:
                raise ExpressionError(
                    f"variable {token}: index {index} out of range for register"
                    f" {reg.name} of length {reg.length}"
                )
            return 1 << index
        raise ExpressionError(
            f"variable {token!r} needs a register letter in a multi-register layout"
        )
    raise ExpressionError(f"malformed variable {token!r}")
