"""Level-indexed binary trees, the five tree classes, validators, generators.

A tree is stored one level at a time; level k holds the length-k nodes.
Node sets are kept as sorted disjoint intervals of node *values* (the
integer a bit-string denotes), because the classes in play (2-trees,
all-or-unique, convex, clopen) are all unions of very few lexicographic
runs while the runs themselves can be exponentially large.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .core import (
    Prefix,
    Verdict,
    decode_nat_list,
    encode_nat_list,
)

TWO = "two"
RATIONAL_TWO = "rational-two"
AOU = "aou"
CONVEX = "convex"
CLOPEN = "clopen"
BASIC_CLOPEN = "basic-clopen"
UNRESTRICTED = "unrestricted"

TREE_CLASSES = (TWO, RATIONAL_TWO, AOU, CONVEX, CLOPEN, BASIC_CLOPEN, UNRESTRICTED)

ENUMERATION_CAP = 4096


def node_str(length: int, value: int) -> str:
    """Bit-string of the node with the given length and value."""
    if length == 0:
        return ""
    return format(value, "0%db" % length)


def node_val(s: str) -> int:
    return int(s, 2) if s else 0


@dataclass(frozen=True)
class LevelSet:
    """Nonoverlapping sorted value intervals of equal-length nodes."""

    width: int  # node length k
    intervals: Tuple[Tuple[int, int], ...]

    @staticmethod
    def make(width: int, intervals: Iterable[Tuple[int, int]]) -> "LevelSet":
        limit = (1 << width) - 1
        cleaned = []
        for lo, hi in intervals:
            if lo > hi:
                continue
            if lo < 0 or hi > limit:
                raise ValueError("interval out of range for width %d" % width)
            cleaned.append((lo, hi))
        cleaned.sort()
        merged: List[Tuple[int, int]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return LevelSet(width, tuple(merged))

    @staticmethod
    def full(width: int) -> "LevelSet":
        return LevelSet(width, ((0, (1 << width) - 1),))

    @staticmethod
    def singleton(width: int, value: int) -> "LevelSet":
        return LevelSet(width, ((value, value),))

    @staticmethod
    def of_nodes(width: int, nodes: Iterable[str]) -> "LevelSet":
        return LevelSet.make(width, [(node_val(n), node_val(n)) for n in nodes])

    def count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return self.intervals == ((0, (1 << self.width) - 1),)

    def contains(self, value: int) -> bool:
        for lo, hi in self.intervals:
            if lo <= value <= hi:
                return True
        return False

    def contains_node(self, node: str) -> bool:
        return len(node) == self.width and self.contains(node_val(node))

    def min_value(self) -> int:
        return self.intervals[0][0]

    def max_value(self) -> int:
        return self.intervals[-1][1]

    def values(self, cap: int = ENUMERATION_CAP) -> Tuple[int, ...]:
        if self.count() > cap:
            raise ValueError("level too large to enumerate (%d nodes)" % self.count())
        out: List[int] = []
        for lo, hi in self.intervals:
            out.extend(range(lo, hi + 1))
        return tuple(out)

    def nodes(self, cap: int = ENUMERATION_CAP) -> Tuple[str, ...]:
        return tuple(node_str(self.width, v) for v in self.values(cap))

    def children_set(self) -> "LevelSet":
        return LevelSet.make(self.width + 1, [(2 * lo, 2 * hi + 1) for lo, hi in self.intervals])

    def parent_set(self) -> "LevelSet":
        if self.width == 0:
            raise ValueError("root has no parent")
        return LevelSet.make(self.width - 1, [(lo >> 1, hi >> 1) for lo, hi in self.intervals])

    def subset_of(self, other: "LevelSet") -> bool:
        for lo, hi in self.intervals:
            ok = False
            for olo, ohi in other.intervals:
                if olo <= lo and hi <= ohi:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def intersect(self, other: "LevelSet") -> "LevelSet":
        out = []
        for lo, hi in self.intervals:
            for olo, ohi in other.intervals:
                nlo, nhi = max(lo, olo), min(hi, ohi)
                if nlo <= nhi:
                    out.append((nlo, nhi))
        return LevelSet.make(self.width, out)

    def dyadic_stem(self) -> Optional[str]:
        """The σ with this level equal to all width-length extensions of σ, if any."""
        if len(self.intervals) != 1:
            return None
        lo, hi = self.intervals[0]
        size = hi - lo + 1
        if size & (size - 1):
            return None
        shift = size.bit_length() - 1
        if lo % size:
            return None
        return node_str(self.width - shift, lo >> shift)

    def common_stem(self) -> str:
        """Longest σ with every member extending σ (the min/max common prefix)."""
        if self.is_empty():
            return ""
        lo = node_str(self.width, self.min_value())
        hi = node_str(self.width, self.max_value())
        i = 0
        while i < len(lo) and lo[i] == hi[i]:
            i += 1
        return lo[:i]


@dataclass(frozen=True)
class LevelTree:
    """A binary tree delivered level by level; levels[k] holds length-k nodes."""

    levels: Tuple[LevelSet, ...]

    def depth(self) -> int:
        """Index of the deepest delivered level."""
        return len(self.levels) - 1

    def level(self, k: int) -> LevelSet:
        return self.levels[k]

    def has_level(self, k: int) -> bool:
        return 0 <= k < len(self.levels)

    def extended(self, level: LevelSet) -> "LevelTree":
        if level.width != len(self.levels):
            raise ValueError("level width %d does not continue depth %d" % (level.width, self.depth()))
        return LevelTree(self.levels + (level,))

    @staticmethod
    def from_node_lists(levels: Sequence[Iterable[str]]) -> "LevelTree":
        return LevelTree(tuple(LevelSet.of_nodes(k, nodes) for k, nodes in enumerate(levels)))

    def to_text(self, cap: int = 1 << 20) -> str:
        lines = []
        for k, lv in enumerate(self.levels):
            if lv.count() > cap:
                raise ValueError("level %d too large for the text format" % k)
            names = ["-" if n == "" else n for n in lv.nodes(cap)]
            lines.append("%d: %s" % (k, ",".join(names)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "LevelTree":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            head, _, body = line.partition(":")
            k = int(head.strip())
            nodes = [tok.strip() for tok in body.split(",") if tok.strip()]
            nodes = ["" if n == "-" else n for n in nodes]
            for n in nodes:
                if len(n) != k or any(c not in "01" for c in n):
                    raise ValueError("node %r does not belong to level %d" % (n, k))
            rows.append((k, nodes))
        rows.sort()
        if [k for k, _ in rows] != list(range(len(rows))):
            raise ValueError("levels must be 0..d with no gaps")
        return LevelTree.from_node_lists([nodes for _, nodes in rows])


ROOT_LEVEL = LevelSet.full(0)


# -- prefix encoding ----------------------------------------------------------


def level_to_nat(level: LevelSet) -> int:
    flat: List[int] = []
    for lo, hi in level.intervals:
        flat.append(lo)
        flat.append(hi)
    return encode_nat_list(flat)


def nat_to_level(width: int, n: int) -> LevelSet:
    flat = decode_nat_list(n)
    if len(flat) % 2:
        raise ValueError("odd-length interval encoding")
    pairs = [(flat[i], flat[i + 1]) for i in range(0, len(flat), 2)]
    for lo, hi in pairs:
        if lo > hi or lo < 0 or hi >= (1 << width):
            raise ValueError("bad interval (%d,%d) at width %d" % (lo, hi, width))
    return LevelSet.make(width, pairs)


def tree_to_prefix(t: LevelTree) -> Prefix:
    return Prefix.of([level_to_nat(lv) for lv in t.levels])


def prefix_to_tree(p: Prefix) -> LevelTree:
    """Decode delivered levels, stopping at the first gap.

    Raises ValueError on a malformed level encoding, which instance
    validators convert into a genuine Fail.
    """
    levels = []
    for k in range(len(p)):
        if not p.defined_at(k):
            break
        levels.append(nat_to_level(k, p[k]))
    return LevelTree(tuple(levels))


# -- validation ---------------------------------------------------------------


def _level_class_error(cls: str, lv: LevelSet) -> Optional[str]:
    k = lv.width
    if k == 0:
        if lv.intervals != ((0, 0),):
            return "level 0 must be exactly the root"
        return None
    if lv.is_empty():
        return "empty level"
    if cls in (TWO, RATIONAL_TWO):
        if lv.count() != 2:
            return "2-tree level must have exactly two nodes, has %d" % lv.count()
    elif cls == AOU:
        if not (lv.count() == 1 or lv.is_full()):
            return "aou level must be full or a singleton, has %d nodes" % lv.count()
    elif cls in (CONVEX, CLOPEN):
        if len(lv.intervals) != 1:
            return "level is not a contiguous block"
    elif cls == BASIC_CLOPEN:
        if lv.dyadic_stem() is None:
            return "level is not the full extension set of one stem"
    elif cls == UNRESTRICTED:
        pass
    else:
        raise ValueError("unknown tree class %r" % cls)
    return None


def validate_class(t: LevelTree, cls: str, depth: int) -> Verdict:
    """Check the finitely-refutable part of a class up to the given depth.

    Promise components (finitely many branchings for rational 2-trees,
    eventual stem stability for clopen trees) are generator-side and not
    examined here; a Pass is provisional in exactly that sense.
    """
    if cls not in TREE_CLASSES:
        raise ValueError("unknown tree class %r" % cls)
    if t.depth() < depth:
        return Verdict.indeterminate("levels 0..%d not delivered (have %d)" % (depth, t.depth()))
    for k in range(depth + 1):
        lv = t.level(k)
        err = _level_class_error(cls, lv)
        if err:
            return Verdict.failed(err, k)
        if k > 0 and not lv.subset_of(t.level(k - 1).children_set()):
            return Verdict.failed("level not closed under taking initial segments", k)
    return Verdict.passed()


def level_paths(t: LevelTree, depth: int) -> LevelSet:
    """The depth-level node set: every genuine infinite path extends one."""
    if t.depth() < depth:
        raise ValueError("level %d not delivered" % depth)
    return t.level(depth)


def last_branching(t: LevelTree, depth: int) -> str:
    """Deepest node with both children visible in levels <= depth (as bits).

    Precondition: the tree validates as a 2-tree to this depth.  At depth 0
    only the root is visible and the answer is the root.
    """
    v = validate_class(t, TWO, depth)
    if not v.is_pass:
        raise ValueError("not a 2-tree to depth %d: %s" % (depth, v.describe()))
    best = ""
    for k in range(1, depth + 1):
        vals = t.level(k).values(cap=2)
        if len(vals) == 2 and vals[0] >> 1 == vals[1] >> 1:
            best = node_str(k - 1, vals[0] >> 1)
    return best


@dataclass(frozen=True)
class BranchRecord:
    """Branching bookkeeping for a 2-tree at some depth."""

    branching_nodes: Tuple[str, ...]
    last_branching: str
    left: str
    right: str

    @property
    def meet(self) -> str:
        return self.last_branching


def branch_record(t: LevelTree, depth: int) -> BranchRecord:
    v = validate_class(t, TWO, depth)
    if not v.is_pass:
        raise ValueError("not a 2-tree to depth %d: %s" % (depth, v.describe()))
    branchings: List[str] = []
    for k in range(1, depth + 1):
        vals = t.level(k).values(cap=2)
        if len(vals) == 2 and vals[0] >> 1 == vals[1] >> 1:
            branchings.append(node_str(k - 1, vals[0] >> 1))
    vals = t.level(depth).values(cap=2) if depth >= 1 else (0,)
    if depth == 0:
        left = right = ""
    else:
        left = node_str(depth, vals[0])
        right = node_str(depth, vals[-1])
    last = branchings[-1] if branchings else ""
    return BranchRecord(tuple(branchings), last, left, right)


# -- generators ---------------------------------------------------------------


def _rng(cls: str, seed: int) -> random.Random:
    return random.Random("tree:%s:%d" % (cls, seed))


def _gen_two(seed: int, depth: int, rational: bool) -> LevelTree:
    rng = _rng(RATIONAL_TWO if rational else TWO, seed)
    horizon = depth // 2 if rational else depth
    merges = sorted(rng.sample(range(2, max(3, horizon + 1)), k=min(rng.randrange(0, 4), max(0, horizon - 2))))
    levels = [ROOT_LEVEL]
    if depth == 0:
        return LevelTree(tuple(levels))
    left, right = 0, 1
    levels.append(LevelSet.make(1, [(0, 0), (1, 1)]))
    for k in range(2, depth + 1):
        if k in merges:
            keep = left if rng.random() < 0.5 else right
            left, right = 2 * keep, 2 * keep + 1
        else:
            left = 2 * left + rng.randrange(2)
            right = 2 * right + rng.randrange(2)
            if left > right:
                left, right = right, left
        levels.append(LevelSet.make(k, [(left, left), (right, right)]))
    return LevelTree(tuple(levels))


def _gen_aou(seed: int, depth: int) -> LevelTree:
    rng = _rng(AOU, seed)
    collapse = rng.choice([None] + list(range(1, max(2, depth // 2 + 1))))
    levels = [ROOT_LEVEL]
    node = 0
    for k in range(1, depth + 1):
        if collapse is None or k < collapse:
            levels.append(LevelSet.full(k))
        elif k == collapse:
            node = rng.randrange(1 << k)
            levels.append(LevelSet.singleton(k, node))
        else:
            node = 2 * node + rng.randrange(2)
            levels.append(LevelSet.singleton(k, node))
    return LevelTree(tuple(levels))


def _gen_convex(seed: int, depth: int) -> LevelTree:
    rng = _rng(CONVEX, seed)
    levels = [ROOT_LEVEL]
    lo, hi = 0, 0
    for k in range(1, depth + 1):
        lo, hi = 2 * lo, 2 * hi + 1
        if hi > lo and rng.random() < 0.4:
            span = hi - lo
            cut_lo = rng.randrange(0, span // 2 + 1)
            cut_hi = rng.randrange(0, span // 2 + 1)
            lo, hi = lo + cut_lo, hi - cut_hi
        levels.append(LevelSet.make(k, [(lo, hi)]))
    return LevelTree(tuple(levels))


def _gen_clopen(seed: int, depth: int, basic: bool) -> LevelTree:
    rng = _rng(BASIC_CLOPEN if basic else CLOPEN, seed)
    horizon = max(1, depth // 2)
    n_updates = 1 if basic else rng.randrange(1, 4)
    update_levels = sorted(rng.sample(range(1, horizon + 1), k=min(n_updates, horizon)))
    levels = [ROOT_LEVEL]
    stem_len, stem_val = 0, 0
    for k in range(1, depth + 1):
        if k in update_levels:
            grow = rng.randrange(1, k - stem_len + 1) if k > stem_len else 0
            if grow:
                stem_val = (stem_val << grow) | rng.randrange(1 << grow)
                stem_len += grow
        lo = stem_val << (k - stem_len)
        hi = lo + (1 << (k - stem_len)) - 1
        levels.append(LevelSet.make(k, [(lo, hi)]))
    return LevelTree(tuple(levels))


def _gen_unrestricted(seed: int, depth: int) -> LevelTree:
    rng = _rng(UNRESTRICTED, seed)
    levels = [ROOT_LEVEL]
    current = ROOT_LEVEL
    for k in range(1, depth + 1):
        child = current.children_set()
        pieces = []
        for lo, hi in child.intervals:
            span = hi - lo
            a = lo + rng.randrange(0, max(1, span // 3 + 1))
            b = hi - rng.randrange(0, max(1, span // 3 + 1))
            if a > b:
                a = b = lo
            pieces.append((a, b))
        current = LevelSet.make(k, pieces)
        if current.is_empty():
            current = LevelSet.make(k, [child.intervals[0][:1] * 2])
        levels.append(current)
    return LevelTree(tuple(levels))


def generate_tree(cls: str, seed: int, depth: int) -> LevelTree:
    """Deterministic seeded tree of the given class, valid to the given depth.

    For RATIONAL_TWO and CLOPEN the promise component is honored too:
    merges / stem updates stop at a seed-derived stage <= depth // 2.
    """
    if cls == TWO:
        return _gen_two(seed, depth, rational=False)
    if cls == RATIONAL_TWO:
        return _gen_two(seed, depth, rational=True)
    if cls == AOU:
        return _gen_aou(seed, depth)
    if cls == CONVEX:
        return _gen_convex(seed, depth)
    if cls == CLOPEN:
        return _gen_clopen(seed, depth, basic=False)
    if cls == BASIC_CLOPEN:
        return _gen_clopen(seed, depth, basic=True)
    if cls == UNRESTRICTED:
        return _gen_unrestricted(seed, depth)
    raise ValueError("unknown tree class %r" % cls)
