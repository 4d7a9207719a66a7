"""Ordinals below w^w in Cantor normal form.

An ordinal here is a finite sum w^e1*c1 + ... + w^ek*ck with strictly
decreasing natural exponents and positive coefficients, stored as a
tuple of (exponent, coefficient) pairs; the empty tuple is 0.  That
normal form is unique, so structural equality is ordinal equality, and
because exponents descend, tuple order agrees with ordinal order.

Only comparison, addition, successor, and the w^k constructors exist:
enumerating and ordering small index sets needs nothing else.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class OrdinalCNF:
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for exponent, coefficient in self.terms:
            if exponent < 0 or coefficient < 1:
                raise ValueError(f"bad CNF term (w^{exponent})*{coefficient}")
            if prev is not None and exponent >= prev:
                raise ValueError("CNF exponents must strictly decrease")
            prev = exponent

    def __lt__(self, other: "OrdinalCNF") -> bool:
        return self.terms < other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def successor(self) -> "OrdinalCNF":
        return ord_add(self, from_int(1))

    def __str__(self) -> str:
        return render_ordinal(self)


ZERO = OrdinalCNF()


def from_int(n: int) -> OrdinalCNF:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return OrdinalCNF(((0, n),)) if n else ZERO


def omega_power(k: int, coefficient: int = 1) -> OrdinalCNF:
    """w^k * coefficient; omega_power(0, c) is the finite ordinal c."""
    if k < 0:
        raise ValueError("exponent must be a natural number")
    if coefficient < 0:
        raise ValueError("coefficient must be non-negative")
    return OrdinalCNF(((k, coefficient),)) if coefficient else ZERO


OMEGA = omega_power(1)


def ord_compare(a: OrdinalCNF, b: OrdinalCNF) -> int:
    """-1, 0, or 1 as a is below, equal to, or above b."""
    if a.terms == b.terms:
        return 0
    return -1 if a.terms < b.terms else 1


def ord_add(a: OrdinalCNF, b: OrdinalCNF) -> OrdinalCNF:
    """Ordinal sum: the leading exponent of b absorbs every strictly
    smaller tail of a, so addition is not commutative (1 + w = w)."""
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    kept = [t for t in a.terms if t[0] > lead]
    merged_coeff = b.terms[0][1] + sum(c for e, c in a.terms if e == lead)
    return OrdinalCNF(tuple(kept) + ((lead, merged_coeff),) + b.terms[1:])


def render_ordinal(a: OrdinalCNF) -> str:
    """`w^k*c` terms joined by ` + `, with `w^1` shortened to `w`,
    coefficient 1 dropped on infinite terms, and exponent 0 printed as
    the bare coefficient.  Zero renders as `0`."""
    if a.is_zero():
        return "0"
    parts = []
    for exponent, coefficient in a.terms:
        if exponent == 0:
            parts.append(str(coefficient))
            continue
        base = "w" if exponent == 1 else f"w^{exponent}"
        parts.append(base if coefficient == 1 else f"{base}*{coefficient}")
    return " + ".join(parts)


_TERM_RE = re.compile(
    r"""^(?:
          (?P<finite>\d+)
        | (?P<base>w(?:\^(?P<exp>\d+))?)(?:\*(?P<coeff>\d+))?
        )$""",
    re.VERBOSE,
)


def parse_ordinal(text: str) -> OrdinalCNF:
    """Inverse of render_ordinal on its exact output; also tolerant of
    extra whitespace around `+`.  Raises ValueError on anything that is
    not a strictly decreasing CNF."""
    stripped = text.strip()
    if stripped == "0":
        return ZERO
    terms = []
    for chunk in stripped.split("+"):
        match = _TERM_RE.match(chunk.strip())
        if match is None:
            raise ValueError(f"unreadable ordinal term {chunk.strip()!r}")
        if match.group("finite") is not None:
            terms.append((0, int(match.group("finite"))))
        else:
            exponent = int(match.group("exp") or 1)
            coefficient = int(match.group("coeff") or 1)
            terms.append((exponent, coefficient))
    return OrdinalCNF(tuple(terms))


def ordinals_below(limit: OrdinalCNF, count: int) -> list[OrdinalCNF]:
    """The first min(count, |limit|) ordinals below ``limit`` in order,
    starting from 0.  Useful for choosing small stretch index sets."""
    out: list[OrdinalCNF] = []
    current = ZERO
    while len(out) < count and ord_compare(current, limit) < 0:
        out.append(current)
        current = current.successor()
    return out
