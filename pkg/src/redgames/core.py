"""Finite-approximation substrate: prefixes, monotone maps, verdicts.

Everything downstream manipulates finite initial segments of streams over
the naturals extended with a "no information yet" symbol (written ``_`` in
text form, ``None`` in memory).  A map between streams is represented by a
total procedure on prefixes; continuity is the contract that longer inputs
can only extend the output, never retract it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

BOTTOM = None

DEFAULT_FUEL = 4096

Entry = Optional[int]


def _check_entry(e):
    if e is BOTTOM:
        return e
    if not isinstance(e, int) or isinstance(e, bool) or e < 0:
        raise ValueError("prefix entries are naturals or bottom, got %r" % (e,))
    return e


@dataclass(frozen=True)
class Prefix:
    """A finite initial segment of a point of Baire space.

    Entries are naturals, with ``None`` standing for the bottom symbol
    (information withheld at that position).  The order ``p <= q`` is plain
    initial-segment extension over the enlarged alphabet; bottom is a
    genuine symbol there, not a wildcard.
    """

    entries: Tuple[Entry, ...] = ()

    @staticmethod
    def of(items: Iterable[Entry]) -> "Prefix":
        return Prefix(tuple(_check_entry(e) for e in items))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def is_prefix_of(self, other: "Prefix") -> bool:
        if len(self.entries) > len(other.entries):
            return False
        return other.entries[: len(self.entries)] == self.entries

    def extend(self, *items: Entry) -> "Prefix":
        return Prefix(self.entries + tuple(_check_entry(e) for e in items))

    def truncate(self, n: int) -> "Prefix":
        if n < 0:
            n = 0
        return Prefix(self.entries[:n])

    def defined_at(self, i: int) -> bool:
        """True when position i has been delivered and is not bottom."""
        return i < len(self.entries) and self.entries[i] is not BOTTOM

    def value_at(self, i: int) -> Optional[int]:
        if self.defined_at(i):
            return self.entries[i]
        return None

    def defined_through(self, n: int) -> bool:
        """True when positions 0..n-1 are all delivered and non-bottom."""
        return all(self.defined_at(i) for i in range(n))

    def known(self) -> Tuple[int, ...]:
        """The non-bottom entries in order (positions collapse away)."""
        return tuple(e for e in self.entries if e is not BOTTOM)

    def to_text(self) -> str:
        return ",".join("_" if e is BOTTOM else str(e) for e in self.entries)

    @staticmethod
    def from_text(text: str) -> "Prefix":
        text = text.strip()
        if not text:
            return Prefix()
        out = []
        for tok in text.split(","):
            tok = tok.strip()
            out.append(BOTTOM if tok == "_" else int(tok))
        return Prefix.of(out)


EMPTY = Prefix()


def prefix_le(p: Prefix, q: Prefix) -> bool:
    return p.is_prefix_of(q)


def common_prefix(p: Prefix, q: Prefix) -> Prefix:
    out = []
    for a, b in zip(p.entries, q.entries):
        if a != b:
            break
        out.append(a)
    return Prefix(tuple(out))


# -- interleaving -------------------------------------------------------------
#
# The paired-prefix encoding consumed by outer reductions K is the 2-lane
# interleave <x(0), y(0), x(1), y(1), ...> padded with bottom, so a K built
# against this layout is portable: it never learns more of x or y than the
# caller delivered.


def interleave(parts: Sequence[Prefix], lanes: Optional[int] = None) -> Prefix:
    k = lanes if lanes is not None else len(parts)
    if k == 0:
        return EMPTY
    rounds = max((len(p) for p in parts), default=0)
    out = []
    for i in range(rounds):
        for j in range(k):
            p = parts[j] if j < len(parts) else EMPTY
            out.append(p.entries[i] if i < len(p) else BOTTOM)
    return Prefix(tuple(out))


def lane(p: Prefix, j: int, lanes: int) -> Prefix:
    """Project lane j out of a k-lane interleaved prefix."""
    return Prefix(tuple(p.entries[i] for i in range(j, len(p), lanes)))


def pair_prefixes(x: Prefix, y: Prefix) -> Prefix:
    return interleave((x, y), 2)


def unpair_prefix(p: Prefix) -> Tuple[Prefix, Prefix]:
    return lane(p, 0, 2), lane(p, 1, 2)


# -- nat coding ---------------------------------------------------------------


def pair_nat(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair_nat(n: int) -> Tuple[int, int]:
    s = (math.isqrt(8 * n + 1) - 1) // 2
    while s * (s + 1) // 2 > n:
        s -= 1
    while (s + 1) * (s + 2) // 2 <= n:
        s += 1
    b = n - s * (s + 1) // 2
    return s - b, b


def zigzag(z: int) -> int:
    return 2 * z if z >= 0 else -2 * z - 1


def unzigzag(n: int) -> int:
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def encode_nat_list(xs: Sequence[int]) -> int:
    """Length-prefixed right fold of Cantor pairs; empty list is 0."""
    acc = 0
    for x in reversed(xs):
        acc = pair_nat(x, acc)
    return pair_nat(len(xs), acc)


def decode_nat_list(n: int) -> Tuple[int, ...]:
    k, acc = unpair_nat(n)
    out = []
    for _ in range(k):
        x, acc = unpair_nat(acc)
        out.append(x)
    return tuple(out)


def encode_rational(q: Fraction) -> int:
    q = Fraction(q)
    return pair_nat(zigzag(q.numerator), q.denominator)


def decode_rational(n: int) -> Fraction:
    zn, d = unpair_nat(n)
    if d == 0:
        raise ValueError("zero denominator in encoded rational")
    return Fraction(unzigzag(zn), d)


# -- verdicts -----------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a finite-depth check.

    A Fail is a genuine refutation and records the first depth at which the
    refuted condition became visible.  A Pass is provisional up to the depth
    tested.  Indeterminate means the budget (fuel, delivered information)
    ran out before either could be established; it is never a Fail.
    """

    outcome: str
    reason: str = ""
    depth: int = -1

    @staticmethod
    def passed() -> "Verdict":
        return Verdict(PASS)

    @staticmethod
    def failed(reason: str, depth: int) -> "Verdict":
        return Verdict(FAIL, reason, depth)

    @staticmethod
    def indeterminate(reason: str = "fuel exhausted") -> "Verdict":
        return Verdict(INDETERMINATE, reason)

    @property
    def is_pass(self) -> bool:
        return self.outcome == PASS

    @property
    def is_fail(self) -> bool:
        return self.outcome == FAIL

    @property
    def is_indeterminate(self) -> bool:
        return self.outcome == INDETERMINATE

    def describe(self) -> str:
        if self.is_pass:
            return "Pass"
        if self.is_fail:
            return "Fail(%s, depth=%d)" % (self.reason, self.depth)
        return "Indeterminate(%s)" % self.reason


def combine_verdicts(verdicts: Iterable[Verdict]) -> Verdict:
    """First Fail wins; otherwise any Indeterminate; otherwise Pass."""
    pending = None
    for v in verdicts:
        if v.is_fail:
            return v
        if v.is_indeterminate and pending is None:
            pending = v
    return pending if pending is not None else Verdict.passed()


# -- monotone maps ------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A partial continuous function presented on finite prefixes.

    ``evaluator`` is a total procedure from prefix to prefix; the fuel caps
    the output length per call, so raising fuel can only lengthen outputs.
    Monotonicity (p <= q implies m(p) <= m(q)) is a contract on the
    evaluator, enforced by check_monotonicity sweeps rather than by types.
    """

    name: str
    evaluator: Callable[[Prefix], Prefix]
    fuel: int = DEFAULT_FUEL

    def with_fuel(self, fuel: int) -> "MonotoneMap":
        return MonotoneMap(self.name, self.evaluator, fuel)


def apply_map(m: MonotoneMap, p: Prefix) -> Prefix:
    """Evaluate m on p within m's fuel.

    Insufficient information never errors: it yields a shorter (possibly
    empty) output prefix.
    """
    out = m.evaluator(p)
    if not isinstance(out, Prefix):
        out = Prefix.of(out)
    return out.truncate(m.fuel)


def compose_maps(m1: MonotoneMap, m2: MonotoneMap) -> MonotoneMap:
    def run(p: Prefix) -> Prefix:
        return apply_map(m2, apply_map(m1, p))

    return MonotoneMap("%s;%s" % (m1.name, m2.name), run, m2.fuel)


def identity_map(fuel: int = DEFAULT_FUEL) -> MonotoneMap:
    return MonotoneMap("identity", lambda p: p, fuel)


def constant_map(value: Prefix, fuel: int = DEFAULT_FUEL) -> MonotoneMap:
    return MonotoneMap("constant", lambda p: value, fuel)


def check_monotonicity(m: MonotoneMap, samples: Sequence[Tuple[Prefix, Prefix]]) -> Verdict:
    """Check m(p) <= m(q) over sample pairs p <= q.

    Rejects sample pairs that are not themselves ordered; records the
    first depth at which an output retraction is visible.
    """
    for p, q in samples:
        if not p.is_prefix_of(q):
            raise ValueError("sample pair is not in the prefix order")
        mp = apply_map(m, p)
        mq = apply_map(m, q)
        if not mp.is_prefix_of(mq):
            bad = len(mq) + 1
            for i in range(min(len(mp), len(mq))):
                if mp.entries[i] != mq.entries[i]:
                    bad = i + 1
                    break
            else:
                if len(mp) > len(mq):
                    bad = len(mq) + 1
            return Verdict.failed("output retracted under input extension", bad)
    return Verdict.passed()
