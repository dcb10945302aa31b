"""The problem catalog: partial multifunctions as finite-depth validators.

Every problem works on Prefix-encoded instances and solutions so the game
engine can move them around uniformly.  A problem supplies

  instance_valid(instance, depth)            refute the domain promise
  solution_valid(instance, solution, depth)  refute a claimed solution
  generate(seed, depth)                      seeded promise-true instance
  candidates(instance, depth)                finite solution enumeration

Validator semantics are safety at depth d: Fail is a refutation visible in
the delivered data (under the instance's promise where the promise is what
makes refutation meaningful); Pass is provisional; Indeterminate means the
needed data has not been delivered.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from . import mapcodes, plfun
from .core import (
    BOTTOM,
    Prefix,
    Verdict,
    apply_map,
    combine_verdicts,
    decode_rational,
    encode_rational,
    interleave,
    lane,
    pair_nat,
    pair_prefixes,
    unpair_nat,
)
from .trees import (
    AOU,
    BASIC_CLOPEN,
    CLOPEN,
    CONVEX,
    RATIONAL_TWO,
    TWO,
    LevelSet,
    LevelTree,
    generate_tree,
    node_str,
    prefix_to_tree,
    tree_to_prefix,
    validate_class,
)

CANDIDATE_CAP = 64


@dataclass(frozen=True)
class CandidateSet:
    """A finite batch of solution prefixes; exhaustive when it provably
    covers every rule-obeying continuation at the tested depth."""

    prefixes: Tuple[Prefix, ...]
    exhaustive: bool


@dataclass(frozen=True)
class Problem:
    name: str
    instance_valid: Callable[[Prefix, int], Verdict]
    solution_valid: Callable[[Prefix, Prefix, int], Verdict]
    generate: Callable[[int, int], Prefix]
    candidates: Callable[[Prefix, int], Optional[CandidateSet]]


def constant_stream(value: int, length: int) -> Prefix:
    return Prefix.of([value] * max(1, length))


def _constant_answer(sol: Prefix, what: str):
    """Read a natural announced as a constant stream; None while empty."""
    vals = [e for e in sol.entries if e is not BOTTOM]
    if not vals:
        return None, Verdict.indeterminate("no %s delivered" % what)
    if any(v != vals[0] for v in vals):
        return None, Verdict.failed("%s stream is not constant" % what, len(sol))
    return vals[0], None


def _rng(name: str, seed: int) -> random.Random:
    return random.Random("problem:%s:%d" % (name, seed))


def _filter_candidates(problem_solution_valid, instance, depth, prefixes, exhaustive) -> CandidateSet:
    keep = []
    for y in prefixes:
        if not problem_solution_valid(instance, y, depth).is_fail:
            keep.append(y)
    return CandidateSet(tuple(keep), exhaustive)


# -- LLPO ----------------------------------------------------------------------


def _llpo() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        hits = [i for i in range(min(len(p), depth)) if p.defined_at(i) and p[i] != 0]
        if len(hits) >= 2:
            return Verdict.failed("more than one nonzero entry", hits[1] + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        i, err = _constant_answer(sol, "answer")
        if err:
            return err
        if i not in (0, 1):
            return Verdict.failed("answer must be 0 or 1", 1)
        n = 0
        while 2 * n + i < min(len(p), depth):
            pos = 2 * n + i
            if p.defined_at(pos) and p[pos] != 0:
                return Verdict.failed("nonzero entry on the chosen parity", pos + 1)
            n += 1
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("llpo", seed)
        entries = [0] * max(1, depth)
        if rng.random() < 0.7 and depth > 0:
            entries[rng.randrange(depth)] = rng.randrange(1, 5)
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        cands = [constant_stream(0, depth), constant_stream(1, depth)]
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("llpo", instance_valid, solution_valid, generate, candidates)


# -- LPO -----------------------------------------------------------------------


def _lpo() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        if len(sol) == 0 or not sol.defined_at(0):
            return Verdict.indeterminate("no answer delivered")
        claim = sol[0]
        if claim == 0:
            for i in range(min(len(p), depth)):
                if p.defined_at(i) and p[i] != 0:
                    return Verdict.failed("claimed all-zero but a nonzero entry exists", i + 1)
            return Verdict.passed()
        if claim == 1:
            if not sol.defined_at(1):
                return Verdict.indeterminate("witness position not delivered")
            w = sol[1]
            if not p.defined_at(w):
                return Verdict.indeterminate("witness position beyond delivered instance")
            if p[w] == 0:
                return Verdict.failed("witness position holds a zero", w + 1)
            return Verdict.passed()
        return Verdict.failed("answer must start with 0 or 1", 1)

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("lpo", seed)
        entries = [0] * max(1, depth)
        if rng.random() < 0.6 and depth > 0:
            entries[rng.randrange(depth)] = rng.randrange(1, 4)
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        cands = [constant_stream(0, depth)]
        for i in range(min(len(p), depth)):
            if p.defined_at(i) and p[i] != 0:
                cands.append(Prefix.of([1, i]))
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("lpo", instance_valid, solution_valid, generate, candidates)


# -- Lim_N ---------------------------------------------------------------------


def _limn() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        v, err = _constant_answer(sol, "limit")
        if err:
            return err
        last = None
        last_pos = -1
        for i in range(min(len(p), depth)):
            if p.defined_at(i):
                last, last_pos = p[i], i
        if last is None:
            return Verdict.indeterminate("no instance entries delivered")
        # reads the final delivered entry as the stabilized value; genuine
        # under the generator's promise that stabilization is visible
        if v != last:
            return Verdict.failed("limit differs from the stabilized value", last_pos + 1)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("limn", seed)
        depth = max(2, depth)
        stab = rng.randrange(0, max(1, depth // 2))
        v = rng.randrange(0, 8)
        entries = [rng.randrange(0, 8) for _ in range(stab)] + [v] * (depth - stab)
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        seen = sorted({e for e in p.entries[:depth] if e is not BOTTOM})
        cands = [constant_stream(v, depth) for v in seen]
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("limn", instance_valid, solution_valid, generate, candidates)


# -- RT^1_2 ----------------------------------------------------------------------


def _rt12() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        for i in range(min(len(p), depth)):
            if p.defined_at(i) and p[i] not in (0, 1):
                return Verdict.failed("coloring entry is not a bit", i + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        horizon = min(len(sol), depth)
        color = None
        selected = 0
        for n in range(horizon):
            if not sol.defined_at(n):
                continue
            if sol[n] not in (0, 1):
                return Verdict.failed("selection entry is not a bit", n + 1)
            if sol[n] == 1:
                selected += 1
                if p.defined_at(n):
                    if color is None:
                        color = p[n]
                    elif p[n] != color:
                        return Verdict.failed("coloring is not constant on the selected set", n + 1)
        if len(sol) >= depth and selected < depth // 4:
            return Verdict.failed("selected set too sparse to be infinite", depth)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("rt12", seed)
        style = rng.randrange(3)
        depth = max(4, depth)
        if style == 0:
            entries = [n % 2 for n in range(depth)]
        elif style == 1:
            v = rng.randrange(2)
            entries = [v] * depth
        else:
            entries = [rng.randrange(2) for _ in range(depth)]
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        horizon = min(len(p), depth)
        outs = []
        for color in (0, 1):
            h = [1 if (p.defined_at(n) and p[n] == color) else 0 for n in range(horizon)]
            outs.append(Prefix.of(h))
        return _filter_candidates(solution_valid, p, depth, outs, True)

    return Problem("rt12", instance_valid, solution_valid, generate, candidates)


# -- K_N -----------------------------------------------------------------------


def _kn() -> Problem:
    def _bound(p: Prefix) -> Optional[int]:
        return p[0] if p.defined_at(0) else None

    def _excluded(p: Prefix, depth: int):
        return {p[i] for i in range(1, min(len(p), depth + 1)) if p.defined_at(i)}

    def instance_valid(p: Prefix, depth: int) -> Verdict:
        b = _bound(p)
        if b is None:
            return Verdict.indeterminate("bound not delivered")
        excl = _excluded(p, depth)
        if all(n in excl for n in range(b)):
            return Verdict.failed("every candidate below the bound is excluded", depth)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        n, err = _constant_answer(sol, "choice")
        if err:
            return err
        b = _bound(p)
        if b is None:
            return Verdict.indeterminate("bound not delivered")
        if n >= b:
            return Verdict.failed("choice is not below the bound", 1)
        for i in range(1, min(len(p), depth + 1)):
            if p.defined_at(i) and p[i] == n:
                return Verdict.failed("choice was enumerated out", i + 1)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("kn", seed)
        b = rng.randrange(2, 7)
        keep = set(rng.sample(range(b), k=rng.randrange(1, b + 1)))
        banned = [n for n in range(b) if n not in keep]
        entries = [b]
        for i in range(max(1, depth)):
            entries.append(banned[i % len(banned)] if banned else b)
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        b = _bound(p)
        if b is None:
            return CandidateSet((), False)
        cands = [constant_stream(n, depth) for n in range(b)]
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("kn", instance_valid, solution_valid, generate, candidates)


# -- Sigma^0_2 double negation elimination --------------------------------------
#
# Instances stream a bit matrix cell by cell, cell (n, m) at stream index
# pair_nat(n, m); the promise is a fully-true row.  A solution names such a
# row as a constant stream.


def _dne_cells(p: Prefix, depth: int):
    cells = {}
    for t in range(min(len(p), depth)):
        if p.defined_at(t):
            n, m = unpair_nat(t)
            cells[(n, m)] = (p[t], t)
    return cells


def _dne2() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        for t in range(min(len(p), depth)):
            if p.defined_at(t) and p[t] not in (0, 1):
                return Verdict.failed("matrix entry is not a bit", t + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        n, err = _constant_answer(sol, "row")
        if err:
            return err
        cells = _dne_cells(p, depth)
        row = [(m, v, t) for (rn, m), (v, t) in cells.items() if rn == n]
        if not row:
            return Verdict.indeterminate("no cells of the named row delivered")
        for m, v, t in sorted(row):
            if v == 0:
                return Verdict.failed("named row is refuted", t + 1)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("dne2", seed)
        true_row = rng.randrange(0, 3)
        refut = {n: rng.randrange(0, max(1, n + 1)) for n in range(true_row)}
        entries = []
        for t in range(max(4, depth)):
            n, m = unpair_nat(t)
            if n == true_row:
                entries.append(1)
            elif n < true_row:
                entries.append(0 if m >= refut[n] else 1)
            else:
                entries.append(rng.randrange(2))
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        cells = _dne_cells(p, depth)
        rows = sorted({n for (n, _m) in cells})
        cands = [constant_stream(n, depth) for n in rows]
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("dne2", instance_valid, solution_valid, generate, candidates)


# -- Sigma^0_2 de Morgan law -----------------------------------------------------
#
# Two matrices interleaved: stream index 2*pair_nat(a, b) + j holds matrix
# j's cell (a, b).  Promise: they are not both satisfiable (not both have a
# fully-true row).  Solution j claims every row of matrix j is falsified.
# Refutation threshold: a row a with cells b <= a+1 all delivered and all
# true counts as persistent; generated instances falsify every row of the
# correct matrix within that window.


def _dml_cells(p: Prefix, j: int, depth: int):
    cells = {}
    for t in range(min(len(p), depth)):
        if p.defined_at(t) and t % 2 == j:
            a, b = unpair_nat(t // 2)
            cells[(a, b)] = (p[t], t)
    return cells


def _dml2() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        for t in range(min(len(p), depth)):
            if p.defined_at(t) and p[t] not in (0, 1):
                return Verdict.failed("matrix entry is not a bit", t + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        j, err = _constant_answer(sol, "side")
        if err:
            return err
        if j not in (0, 1):
            return Verdict.failed("side must be 0 or 1", 1)
        cells = _dml_cells(p, j, depth)
        rows = sorted({a for (a, _b) in cells})
        for a in rows:
            window = [(b, v, t) for (ra, b), (v, t) in cells.items() if ra == a and b <= a + 1]
            if len(window) == a + 2 and all(v == 1 for _b, v, _t in window):
                worst = max(t for _b, _v, t in window)
                return Verdict.failed("row %d of matrix %d persists" % (a, j), worst + 1)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("dml2", seed)
        true_j = rng.randrange(2)
        witness_row = 0
        entries = []
        for idx in range(max(8, depth)):
            j, t = idx % 2, idx // 2
            a, b = unpair_nat(t)
            if j == true_j:
                zero_at = a % (a + 2)
                entries.append(0 if b == zero_at else 1)
            else:
                if a == witness_row:
                    entries.append(1)
                else:
                    entries.append(0 if b == (a % (a + 2)) else 1)
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        cands = [constant_stream(0, depth), constant_stream(1, depth)]
        return _filter_candidates(solution_valid, p, depth, cands, True)

    return Problem("dml2", instance_valid, solution_valid, generate, candidates)


# -- weak König's lemma family ----------------------------------------------------


def _decode_tree(p: Prefix):
    try:
        return prefix_to_tree(p), None
    except ValueError as e:
        return None, str(e)


def _path_prefix(bits: str) -> Prefix:
    return Prefix.of([int(c) for c in bits])


def tree_candidates(t: LevelTree, depth: int, seed_salt: str = "") -> CandidateSet:
    level_index = min(depth, t.depth())
    lv = t.level(level_index)
    count = lv.count()
    if count <= CANDIDATE_CAP:
        outs = tuple(_path_prefix(node_str(level_index, v)) for v in lv.values(CANDIDATE_CAP))
        return CandidateSet(outs, True)
    rng = random.Random("tree-candidates:%s:%d" % (seed_salt, level_index))
    picks = {lv.min_value(), lv.max_value()}
    lo, hi = lv.min_value(), lv.max_value()
    while len(picks) < CANDIDATE_CAP // 2:
        v = rng.randrange(lo, hi + 1)
        if lv.contains(v):
            picks.add(v)
    outs = tuple(_path_prefix(node_str(level_index, v)) for v in sorted(picks))
    return CandidateSet(outs, False)


def _wkl(name: str, cls: str) -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        t, err = _decode_tree(p)
        if err:
            return Verdict.failed("malformed level: %s" % err, len(p))
        if t.depth() < 0:
            return Verdict.indeterminate("no levels delivered")
        return validate_class(t, cls, min(depth, t.depth()))

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        t, err = _decode_tree(p)
        if err:
            return Verdict.failed("malformed level: %s" % err, len(p))
        value = 0
        horizon = min(len(sol), depth, t.depth())
        for k in range(horizon):
            if not sol.defined_at(k):
                break
            bit = sol[k]
            if bit not in (0, 1):
                return Verdict.failed("path entry is not a bit", k + 1)
            value = 2 * value + bit
            if not t.level(k + 1).contains(value):
                return Verdict.failed("path leaves the tree", k + 1)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        return tree_to_prefix(generate_tree(cls, seed, depth))

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        t, err = _decode_tree(p)
        if err or t.depth() < 0:
            return CandidateSet((), False)
        return tree_candidates(t, depth, seed_salt=name)

    return Problem(name, instance_valid, solution_valid, generate, candidates)


# -- binary expansion for regular Cauchy rationals --------------------------------


def cauchy_entries(p: Prefix, depth: int) -> List[Tuple[int, Fraction]]:
    out = []
    for i in range(min(len(p), depth)):
        if p.defined_at(i):
            out.append((i, decode_rational(p[i])))
    return out


def rational_name(x: Fraction, length: int) -> Prefix:
    return Prefix.of([encode_rational(Fraction(x))] * max(1, length))


def _beq() -> Problem:
    def instance_valid(p: Prefix, depth: int) -> Verdict:
        try:
            qs = cauchy_entries(p, depth)
        except ValueError as e:
            return Verdict.failed("malformed rational: %s" % e, len(p))
        for i, (n, qn) in enumerate(qs):
            for m, qm in qs[i + 1 :]:
                if abs(qn - qm) >= Fraction(1, 2 ** n):
                    return Verdict.failed("regularity violated between %d and %d" % (n, m), m + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        try:
            qs = cauchy_entries(p, depth)
        except ValueError as e:
            return Verdict.failed("malformed rational: %s" % e, len(p))
        if not qs:
            return Verdict.indeterminate("no approximations delivered")
        digits = []
        for i in range(min(len(sol), depth)):
            if not sol.defined_at(i):
                break
            if sol[i] not in (0, 1):
                return Verdict.failed("digit is not a bit", i + 1)
            digits.append(sol[i])
        if not digits:
            return Verdict.indeterminate("no digits delivered")
        index = {n: q for n, q in qs}
        j = min(len(digits), max(index))
        while j not in index and j > 0:
            j -= 1
        q = index[j]
        lo = sum(Fraction(d, 2 ** (i + 1)) for i, d in enumerate(digits[:j] if j else digits[:1]))
        width = Fraction(1, 2 ** (j if j else 1))
        eps = Fraction(1, 2 ** j) if j else Fraction(1)
        if lo + width < q - eps or lo > q + eps:
            return Verdict.failed("digit interval misses the Cauchy ball", j)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("beq", seed)
        style = rng.randrange(3)
        if style == 0:
            k = rng.randrange(1, 5)
            x = Fraction(rng.randrange(1, 2 ** k), 2 ** k)
        elif style == 1:
            x = Fraction(rng.randrange(1, 6), rng.choice([3, 5, 6, 7, 9]))
            x = x - int(x)
            if x == 0:
                x = Fraction(1, 3)
        else:
            x = Fraction(rng.randrange(0, 2))
        entries = []
        for n in range(max(2, depth)):
            jitter = Fraction(rng.randrange(-1, 2), 2 ** (n + 2))
            q = x + jitter
            entries.append(encode_rational(q))
        return Prefix.of(entries)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        try:
            qs = cauchy_entries(p, depth)
        except ValueError:
            return CandidateSet((), False)
        if not qs:
            return CandidateSet((), False)
        index = {n: q for n, q in qs}
        top = max(index)
        frontier = [()]
        horizon = min(depth, top + 1)
        for i in range(horizon):
            j = i if i in index else max(n for n in index if n <= i) if any(n <= i for n in index) else top
            q = index[j]
            eps = Fraction(1, 2 ** j)
            nxt = []
            for digits in frontier:
                for b in (0, 1):
                    cand = digits + (b,)
                    lo = sum(Fraction(d, 2 ** (k + 1)) for k, d in enumerate(cand))
                    width = Fraction(1, 2 ** len(cand))
                    if not (lo + width < q - eps or lo > q + eps):
                        nxt.append(cand)
            frontier = nxt
            if not frontier or len(frontier) > CANDIDATE_CAP:
                break
        outs = tuple(Prefix.of(list(d)) for d in frontier)
        return _filter_candidates(solution_valid, p, depth, outs, True)

    return Problem("beq", instance_valid, solution_valid, generate, candidates)


# -- intermediate value theorem for stabilizing piecewise linear maps -------------


def _ivtlin() -> Problem:
    def _stages(p: Prefix):
        try:
            return plfun.prefix_to_stages(p), None
        except ValueError as e:
            return None, str(e)

    def instance_valid(p: Prefix, depth: int) -> Verdict:
        stages, err = _stages(p.truncate(depth))
        if err:
            return Verdict.failed("malformed stage: %s" % err, len(p))
        for s, stage in enumerate(stages):
            if not (stage[0][1] < 0 < stage[-1][1]):
                return Verdict.failed("stage does not satisfy f(0) < 0 < f(1)", s + 1)
            if s > 0:
                radius = Fraction(1, 2 ** s)
                if not plfun.within_graph_neighborhood(stages[s - 1], stage, radius):
                    return Verdict.failed("stage leaves the previous graph neighborhood", s + 1)
        return Verdict.passed()

    def solution_valid(p: Prefix, sol: Prefix, depth: int) -> Verdict:
        stages, err = _stages(p.truncate(depth))
        if err:
            return Verdict.failed("malformed stage: %s" % err, len(p))
        if not stages:
            return Verdict.indeterminate("no stages delivered")
        try:
            qs = cauchy_entries(sol, depth)
        except ValueError as e:
            return Verdict.failed("malformed rational in name: %s" % e, len(sol))
        if not qs:
            return Verdict.indeterminate("no approximations delivered")
        for i, (n, qn) in enumerate(qs):
            for m, qm in qs[i + 1 :]:
                if abs(qn - qm) >= Fraction(1, 2 ** n):
                    return Verdict.failed("name regularity violated", m + 1)
        final = stages[-1]
        lip = plfun.lipschitz_bound(final)
        j, q = qs[-1]
        tol = (1 + lip) * Fraction(1, 2 ** j)
        if abs(plfun.evaluate(final, min(max(q, Fraction(0)), Fraction(1)))) > tol:
            return Verdict.failed("name is bounded away from the zero set", j)
        return Verdict.passed()

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("ivtlin", seed)
        depth = max(3, depth)
        if rng.random() < 0.5:
            z1 = Fraction(rng.randrange(1, 4), 8)
            z2 = z1 + Fraction(rng.randrange(1, 3), 8)
            final = plfun.make_stage(
                [
                    (Fraction(0), Fraction(-1)),
                    (z1, Fraction(0)),
                    (z2, Fraction(0)),
                    (Fraction(1), Fraction(1)),
                ]
            )
        else:
            a = Fraction(rng.randrange(1, 8), 8)
            final = plfun.make_stage(
                [(Fraction(0), Fraction(-1)), (a, Fraction(0)), (Fraction(1), Fraction(1))]
            )
        stab = rng.randrange(1, max(2, depth // 2))
        stages = []
        for s in range(depth):
            if s >= stab:
                stages.append(final)
            else:
                wobble = Fraction(1, 2 ** (s + 3))
                stages.append(tuple((x, y + wobble) for x, y in final))
        return plfun.stages_to_prefix(stages)

    def candidates(p: Prefix, depth: int) -> CandidateSet:
        stages, err = _stages(p.truncate(depth))
        if err or not stages:
            return CandidateSet((), False)
        zs = plfun.zero_set(stages[-1])
        if zs is None:
            return CandidateSet((), False)
        lo, hi = zs
        picks = sorted({lo, hi, (lo + hi) / 2})
        outs = tuple(rational_name(x, depth) for x in picks)
        return _filter_candidates(solution_valid, p, depth, outs, False)

    return Problem("ivtlin", instance_valid, solution_valid, generate, candidates)


# -- combinators -------------------------------------------------------------------


def product(p: Problem, q: Problem) -> Problem:
    name = "(%s x %s)" % (p.name, q.name)

    def instance_valid(inst: Prefix, depth: int) -> Verdict:
        a, b = lane(inst, 0, 2), lane(inst, 1, 2)
        return combine_verdicts([p.instance_valid(a, depth), q.instance_valid(b, depth)])

    def solution_valid(inst: Prefix, sol: Prefix, depth: int) -> Verdict:
        a, b = lane(inst, 0, 2), lane(inst, 1, 2)
        sa, sb = lane(sol, 0, 2), lane(sol, 1, 2)
        return combine_verdicts(
            [p.solution_valid(a, sa, depth), q.solution_valid(b, sb, depth)]
        )

    def generate(seed: int, depth: int) -> Prefix:
        return interleave((p.generate(2 * seed, depth), q.generate(2 * seed + 1, depth)), 2)

    def candidates(inst: Prefix, depth: int) -> Optional[CandidateSet]:
        a, b = lane(inst, 0, 2), lane(inst, 1, 2)
        ca, cb = p.candidates(a, depth), q.candidates(b, depth)
        if ca is None or cb is None:
            return None
        outs = []
        for ya in ca.prefixes:
            for yb in cb.prefixes:
                outs.append(interleave((ya, yb), 2))
                if len(outs) > CANDIDATE_CAP:
                    return CandidateSet(tuple(outs), False)
        return CandidateSet(tuple(outs), ca.exhaustive and cb.exhaustive)

    return Problem(name, instance_valid, solution_valid, generate, candidates)


def _par_count(inst: Prefix) -> Optional[int]:
    return inst[0] if inst.defined_at(0) else None


def _par_component(inst: Prefix, j: int, n: int) -> Prefix:
    body = Prefix(tuple(inst.entries[1:]))
    return lane(body, j, n)


def finite_parallelization(p: Problem) -> Problem:
    name = "(%s)*" % p.name

    def instance_valid(inst: Prefix, depth: int) -> Verdict:
        n = _par_count(inst)
        if n is None:
            return Verdict.indeterminate("component count not delivered")
        if n == 0:
            return Verdict.passed()
        return combine_verdicts(
            [p.instance_valid(_par_component(inst, j, n), depth) for j in range(n)]
        )

    def solution_valid(inst: Prefix, sol: Prefix, depth: int) -> Verdict:
        n = _par_count(inst)
        if n is None:
            return Verdict.indeterminate("component count not delivered")
        if n == 0:
            return Verdict.passed()
        return combine_verdicts(
            [
                p.solution_valid(_par_component(inst, j, n), lane(sol, j, n), depth)
                for j in range(n)
            ]
        )

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("par", seed)
        n = rng.randrange(1, 4)
        parts = [p.generate(seed * 7 + j, depth) for j in range(n)]
        return Prefix.of([n]).extend(*interleave(parts, n).entries)

    def candidates(inst: Prefix, depth: int) -> Optional[CandidateSet]:
        n = _par_count(inst)
        if n is None:
            return CandidateSet((), False)
        if n == 0:
            return CandidateSet((Prefix(),), True)
        per = []
        for j in range(n):
            c = p.candidates(_par_component(inst, j, n), depth)
            if c is None:
                return None
            per.append(c)
        outs = [()]
        for c in per:
            outs = [prev + (y,) for prev in outs for y in c.prefixes]
            if len(outs) > CANDIDATE_CAP:
                break
        tuples = [interleave(list(combo), n) for combo in outs[: CANDIDATE_CAP + 1]]
        exhaustive = all(c.exhaustive for c in per) and len(outs) <= CANDIDATE_CAP
        return CandidateSet(tuple(tuples), exhaustive)

    return Problem(name, instance_valid, solution_valid, generate, candidates)


def make_parallel_instance(n: int, parts: Sequence[Prefix]) -> Prefix:
    return Prefix.of([n]).extend(*interleave(list(parts), n).entries)


def jump_combinator(d: Problem) -> Problem:
    """The jump of a degree as a problem combinator.

    An instance packs two map codes (an inner h and an outer k) beside a
    base point x; solutions are exactly the k-images of d-solutions of the
    h-image of x, brute-forced over d's candidate enumeration.
    """

    name = "jump(%s)" % d.name

    def _parts(inst: Prefix, depth: int):
        codes_lane = lane(inst, 0, 2)
        x = lane(inst, 1, 2)
        try:
            codes = mapcodes.stream_to_codes(codes_lane)
        except LookupError:
            return None, None, None, Verdict.indeterminate("map codes not yet delivered")
        except (ValueError, UnicodeDecodeError) as e:
            return None, None, None, Verdict.failed("malformed map codes: %s" % e, len(inst))
        if len(codes) != 2:
            return None, None, None, Verdict.failed("expected two map codes", len(inst))
        try:
            hp = mapcodes.to_map(codes[0])
            kq = mapcodes.to_map(codes[1])
        except ValueError as e:
            return None, None, None, Verdict.failed("bad map code: %s" % e, len(inst))
        return hp, kq, x, None

    def instance_valid(inst: Prefix, depth: int) -> Verdict:
        hp, kq, x, err = _parts(inst, depth)
        if err:
            return err
        return d.instance_valid(apply_map(hp, x), depth)

    def solution_valid(inst: Prefix, sol: Prefix, depth: int) -> Verdict:
        hp, kq, x, err = _parts(inst, depth)
        if err:
            return err
        inner = apply_map(hp, x)
        cset = d.candidates(inner, depth)
        if cset is None:
            return Verdict.indeterminate("no candidate enumeration for %s" % d.name)
        matched_depth = 0
        for y in cset.prefixes:
            w = apply_map(kq, pair_prefixes(x, y))
            horizon = min(len(w), len(sol), depth)
            if horizon == 0:
                continue
            if sol.entries[:horizon] == w.entries[:horizon]:
                return Verdict.passed()
            matched_depth = max(matched_depth, horizon)
        if not cset.prefixes:
            return Verdict.indeterminate("no surviving candidates")
        if matched_depth == 0:
            return Verdict.indeterminate("outer map delivered nothing to compare")
        if not cset.exhaustive:
            return Verdict.indeterminate("candidate enumeration not exhaustive")
        return Verdict.failed("matches no image of a valid solution", matched_depth)

    def generate(seed: int, depth: int) -> Prefix:
        rng = _rng("jump", seed)
        x = d.generate(seed, depth)
        style = rng.randrange(2)
        if style == 0:
            codes = [mapcodes.identity_code(), mapcodes.lane_code(1, 2)]
        else:
            codes = [mapcodes.identity_code(), mapcodes.compose_code(mapcodes.lane_code(1, 2), mapcodes.take_code(max(1, depth // 2)))]
        code_stream = mapcodes.codes_to_stream(codes, len(x))
        return interleave((code_stream, x), 2)

    def candidates(inst: Prefix, depth: int) -> Optional[CandidateSet]:
        hp, kq, x, err = _parts(inst, depth)
        if err:
            return None
        inner = apply_map(hp, x)
        cset = d.candidates(inner, depth)
        if cset is None:
            return None
        outs = tuple(apply_map(kq, pair_prefixes(x, y)) for y in cset.prefixes)
        return CandidateSet(outs, cset.exhaustive)

    return Problem(name, instance_valid, solution_valid, generate, candidates)


def make_jump_instance(inner_code: dict, outer_code: dict, x: Prefix) -> Prefix:
    stream = mapcodes.codes_to_stream([inner_code, outer_code], max(1, len(x)))
    return interleave((stream, x), 2)


# -- catalog -----------------------------------------------------------------------

_BUILDERS = {
    "llpo": _llpo,
    "lpo": _lpo,
    "limn": _limn,
    "rt12": _rt12,
    "kn": _kn,
    "dne2": _dne2,
    "dml2": _dml2,
    "wkl2": lambda: _wkl("wkl2", TWO),
    "wkl2r": lambda: _wkl("wkl2r", RATIONAL_TWO),
    "wklaou": lambda: _wkl("wklaou", AOU),
    "wklconv": lambda: _wkl("wklconv", CONVEX),
    "wklclop": lambda: _wkl("wklclop", CLOPEN),
    "beq": _beq,
    "ivtlin": _ivtlin,
}

_ALIASES = {
    "wkl-le2": "wkl2",
    "wkl-eq2": "wkl2r",
    "wkl-aou": "wklaou",
    "wkl-conv": "wklconv",
    "wkl-clop": "wklclop",
    "lim": "limn",
}

CATALOG_NAMES = tuple(sorted(_BUILDERS))


def catalog_problem(name: str) -> Problem:
    key = _ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise KeyError("unknown problem %r (know: %s)" % (name, ", ".join(CATALOG_NAMES)))
    return _BUILDERS[key]()
