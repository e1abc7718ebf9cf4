"""Signed minterm sums: exact ones counting without generating a single bit.

Each ANF monomial doubles as the mask of a minterm function, which emits
exactly one 1 per period.  XORing minterm functions makes their expansions
cancel pairwise; the engine tracks that cancellation symbolically as a signed
integer combination of minterm masks and converts the final combination into
the ones count of the full-period output sequence.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .anf import AnfFunction, RegisterLayout
from .errors import InternalCheckError, ResourceLimitError, ValidationError

__all__ = [
    "DEFAULT_MAX_SUM_ENTRIES",
    "DEFAULT_MAX_EXPANSION_TERMS",
    "MintermSum",
    "minterm_masks",
    "common_minterm",
    "common_development",
    "accumulate",
    "exact_ones_single",
    "exact_ones_multi",
    "superset_masks",
    "expand_minterm",
    "minterm_expansion",
]

DEFAULT_MAX_SUM_ENTRIES = 1_000_000
DEFAULT_MAX_EXPANSION_TERMS = 1 << 20


class MintermSum:
    """Finite map from minterm mask to a signed, unbounded integer coefficient.

    Zero coefficients are dropped eagerly, so two sums are equal exactly when
    they hold the same entries.  Instances are treated as immutable; all
    operations return fresh sums.
    """

    __slots__ = ("width", "_entries")

    def __init__(self, width: int, entries: Iterable[tuple[int, int]] | dict | None = None):
        if width < 1:
            raise ValidationError("sum width must be positive")
        self.width = width
        limit = 1 << width
        combined: dict[int, int] = {}
        if entries is not None:
            pairs = entries.items() if isinstance(entries, dict) else entries
            for mask, coeff in pairs:
                if not 0 <= mask < limit:
                    raise ValidationError(f"mask {mask} wider than {width} bits")
                if coeff:
                    total = combined.get(mask, 0) + coeff
                    if total:
                        combined[mask] = total
                    else:
                        combined.pop(mask, None)
        self._entries = combined

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._entries.items())

    def sorted_items(self) -> list[tuple[int, int]]:
        return sorted(self._entries.items())

    def coefficient(self, mask: int) -> int:
        return self._entries.get(mask, 0)

    def masks(self) -> set[int]:
        return set(self._entries)

    @property
    def is_empty(self) -> bool:
        return not self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MintermSum):
            return NotImplemented
        return self.width == other.width and self._entries == other._entries

    def __repr__(self) -> str:
        body = ", ".join(
            f"{mask:0{self.width}b}: {coeff:+d}" for mask, coeff in self.sorted_items()
        )
        return f"MintermSum({self.width}, {{{body}}})"


def minterm_masks(f: AnfFunction) -> list[int]:
    """Mask of the minterm paired with each monomial: the identical bit pattern.

    The pairing swaps monomial and minterm per index and is self-inverse, so
    at mask level this is the (deterministically ordered) term set itself.
    """
    return sorted(f.terms)


def common_minterm(a: int, b: int) -> int:
    """Mask of the minterm whose expansion is exactly the monomials shared by
    the expansions of the two inputs: the bitwise union."""
    if a < 0 or b < 0:
        raise ValidationError("masks must be non-negative")
    return a | b


def common_development(h: MintermSum, mask: int) -> MintermSum:
    """Signed sum of the common minterms of one mask with every entry of h.

    Coefficients carry over to the merged masks and collapse when different
    entries land on the same union.
    """
    if not 0 <= mask < (1 << h.width):
        raise ValidationError(f"mask {mask} wider than {h.width} bits")
    merged: dict[int, int] = {}
    for m, coeff in h.items():
        union = m | mask
        merged[union] = merged.get(union, 0) + coeff
    return MintermSum(h.width, merged)


def accumulate(
    masks: Iterable[int],
    width: int,
    *,
    max_entries: int = DEFAULT_MAX_SUM_ENTRIES,
) -> MintermSum:
    """Fold minterm masks into the signed sum describing their XOR combination.

    Each step adds the new mask with coefficient +1 and subtracts twice the
    common development with the sum built so far, which is exactly the pairwise
    cancellation of the underlying expansions.  The result is independent of
    the input order.

    Raises:
        ResourceLimitError: if the tracked entry count ever exceeds max_entries.
    """
    if width < 1:
        raise ValidationError("sum width must be positive")
    limit = 1 << width
    entries: dict[int, int] = {}
    for mask in masks:
        if not 0 <= mask < limit:
            raise ValidationError(f"mask {mask} wider than {width} bits")
        delta: dict[int, int] = {mask: 1}
        for prev, coeff in entries.items():
            union = prev | mask
            delta[union] = delta.get(union, 0) - 2 * coeff
        for union, d in delta.items():
            total = entries.get(union, 0) + d
            if total:
                entries[union] = total
            else:
                entries.pop(union, None)
        if len(entries) > max_entries:
            raise ResourceLimitError(
                f"signed sum grew past {max_entries} entries; raise the cap to"
                " continue"
            )
    return MintermSum(width, entries)


def exact_ones_single(h: MintermSum, length: int) -> int:
    """Ones count per period of a single-register generator from its final sum.

    Every mask contributes its coefficient times 2**(length - weight), the
    size of its expansion.  The result is range-checked against the period;
    a violation means an engine bug, never bad input.
    """
    if h.width != length:
        raise ValidationError(f"sum width {h.width} does not match length {length}")
    total = 0
    for mask, coeff in h.items():
        if mask == 0:
            raise InternalCheckError("zero mask in a final signed sum")
        total += coeff << (length - mask.bit_count())
    period = (1 << length) - 1
    if not 0 <= total <= period:
        raise InternalCheckError(
            f"ones count {total} outside [0, {period}]; signed sum is inconsistent"
        )
    return total


def exact_ones_multi(h: MintermSum, layout: RegisterLayout) -> int:
    """Ones count per joint period for a multi-register generator.

    Register segments with weight d >= 1 contribute a factor 2**(len - d);
    an all-zero segment means the register contributes no variable of its
    own, and the factor is its whole period 2**len - 1 (every nonzero state,
    zero state excluded).  Lengths must be pairwise coprime.
    """
    if h.width != layout.total_length:
        raise ValidationError(
            f"sum width {h.width} does not match layout of {layout.total_length} bits"
        )
    period = layout.period()
    total = 0
    for mask, coeff in h.items():
        if mask == 0:
            raise InternalCheckError("zero mask in a final signed sum")
        factor = 1
        for reg in layout.registers:
            d = layout.segment_value(mask, reg).bit_count()
            factor *= (1 << (reg.length - d)) if d else ((1 << reg.length) - 1)
        total += coeff * factor
    if not 0 <= total <= period:
        raise InternalCheckError(
            f"ones count {total} outside [0, {period}]; signed sum is inconsistent"
        )
    return total


def superset_masks(
    mask: int,
    length: int,
    *,
    max_terms: int = DEFAULT_MAX_EXPANSION_TERMS,
) -> set[int]:
    """Monomial masks of the minterm's expansion: every superset of the mask.

    A minterm of weight d over length variables expands into exactly
    2**(length - d) monomials.
    """
    if not 0 < mask < (1 << length):
        raise ValidationError(
            f"mask {mask} must be nonzero and fit in {length} bits"
        )
    free = ((1 << length) - 1) ^ mask
    count = 1 << free.bit_count()
    if count > max_terms:
        raise ResourceLimitError(
            f"expansion of a weight-{mask.bit_count()} minterm over {length} bits"
            f" has {count} terms, above the {max_terms} guard"
        )
    out = set()
    sub = free
    while True:
        out.add(mask | sub)
        if sub == 0:
            break
        sub = (sub - 1) & free
    return out


def expand_minterm(
    mask: int,
    length: int,
    *,
    max_terms: int = DEFAULT_MAX_EXPANSION_TERMS,
) -> AnfFunction:
    """ANF of the minterm function for the mask, over a length-bit register."""
    layout = RegisterLayout.single(length)
    return AnfFunction(layout, frozenset(superset_masks(mask, length, max_terms=max_terms)))


def minterm_expansion(
    f: AnfFunction,
    *,
    max_terms: int = DEFAULT_MAX_EXPANSION_TERMS,
) -> frozenset[int]:
    """Masks of the minterms making up f: expand every paired minterm function
    and cancel the shared monomials pairwise.

    Equivalent, and tested against: mask b is present exactly when f
    evaluates to 1 at assignment b.
    """
    length = f.layout.total_length
    acc: set[int] = set()
    for mask in minterm_masks(f):
        acc ^= superset_masks(mask, length, max_terms=max_terms)
        if len(acc) > max_terms:
            raise ResourceLimitError(
                f"minterm expansion grew past {max_terms} entries"
            )
    return frozenset(acc)
