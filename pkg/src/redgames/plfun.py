"""Rational piecewise-linear functions on [0,1], exactly.

A stage is a tuple of plane points with strictly increasing rational
x-coordinates running from 0 to 1; the function is the polyline through
them.  Everything here is Fraction arithmetic so comparisons are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import Prefix, decode_nat_list, decode_rational, encode_nat_list, encode_rational

Point = Tuple[Fraction, Fraction]
Stage = Tuple[Point, ...]


def make_stage(points: Sequence[Tuple[Fraction, Fraction]]) -> Stage:
    pts = tuple((Fraction(x), Fraction(y)) for x, y in points)
    if len(pts) < 2:
        raise ValueError("a stage needs at least two points")
    xs = [p[0] for p in pts]
    if xs[0] != 0 or xs[-1] != 1 or any(a >= b for a, b in zip(xs, xs[1:])):
        raise ValueError("x-coordinates must increase strictly from 0 to 1")
    return pts


def evaluate(stage: Stage, x: Fraction) -> Fraction:
    x = Fraction(x)
    if x <= stage[0][0]:
        return stage[0][1]
    if x >= stage[-1][0]:
        return stage[-1][1]
    for (x0, y0), (x1, y1) in zip(stage, stage[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise AssertionError("unreachable")


def lipschitz_bound(stage: Stage) -> Fraction:
    best = Fraction(0)
    for (x0, y0), (x1, y1) in zip(stage, stage[1:]):
        slope = abs((y1 - y0) / (x1 - x0))
        if slope > best:
            best = slope
    return best


def zero_set(stage: Stage) -> Optional[Tuple[Fraction, Fraction]]:
    """The zero locus as a closed interval [lo, hi], or None if empty.

    For the functions in play (one sign change, since f(0) < 0 < f(1) and
    stages come from a monotone bracketing) the zeros form one interval;
    this returns the leftmost and rightmost zero and is exact for any
    polyline whose zeros are connected.
    """
    zeros: List[Fraction] = []
    for (x0, y0), (x1, y1) in zip(stage, stage[1:]):
        if y0 == 0:
            zeros.append(x0)
        if y1 == 0:
            zeros.append(x1)
        if (y0 < 0 < y1) or (y1 < 0 < y0):
            zeros.append(x0 + (x1 - x0) * (0 - y0) / (y1 - y0))
        if y0 == 0 and y1 == 0:
            zeros.extend([x0, x1])
    if not zeros:
        return None
    return min(zeros), max(zeros)


def crossing_bracket(stage: Stage, tol: Fraction):
    """The proof's four tracked points (x0, x1, x2, x3) at tolerance tol.

    x0 is the rightmost point with value < -tol, x3 the leftmost to its
    right with value > tol, and [x1, x2] the zero bracket between them.
    Returns None when the stage has no such safely-signed pair yet.
    """
    xs = [p[0] for p in stage]
    ys = [p[1] for p in stage]
    left = None
    for i in range(len(stage)):
        if ys[i] < -tol:
            left = i
    # walk from the right for the matching safely-positive point
    right = None
    for i in range(len(stage) - 1, -1, -1):
        if ys[i] > tol:
            right = i
    if left is None or right is None or left >= right:
        return None
    x1 = xs[left]
    for i in range(left, right + 1):
        if ys[i] <= 0:
            x1 = xs[i]
    x2 = xs[right]
    for i in range(right, left - 1, -1):
        if ys[i] >= 0:
            x2 = xs[i]
    return xs[left], x1, x2, xs[right]


def _sq(x: Fraction) -> Fraction:
    return x * x


def point_segment_sqdist(px, py, ax, ay, bx, by) -> Fraction:
    """Exact squared distance from point to segment."""
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    vv = _sq(vx) + _sq(vy)
    if vv == 0:
        return _sq(wx) + _sq(wy)
    t = (wx * vx + wy * vy) / vv
    if t < 0:
        t = Fraction(0)
    elif t > 1:
        t = Fraction(1)
    dx = wx - t * vx
    dy = wy - t * vy
    return _sq(dx) + _sq(dy)


def point_graph_sqdist(stage: Stage, px: Fraction, py: Fraction) -> Fraction:
    best = None
    for (ax, ay), (bx, by) in zip(stage, stage[1:]):
        d = point_segment_sqdist(px, py, ax, ay, bx, by)
        if best is None or d < best:
            best = d
    return best


def within_graph_neighborhood(stage: Stage, pts: Stage, radius: Fraction) -> bool:
    r2 = _sq(Fraction(radius))
    return all(point_graph_sqdist(stage, x, y) <= r2 for x, y in pts)


# -- encodings ----------------------------------------------------------------


def stage_to_nat(stage: Stage) -> int:
    flat: List[int] = []
    for x, y in stage:
        flat.append(encode_rational(x))
        flat.append(encode_rational(y))
    return encode_nat_list(flat)


def nat_to_stage(n: int) -> Stage:
    flat = decode_nat_list(n)
    if len(flat) % 2:
        raise ValueError("odd point encoding")
    pts = [(decode_rational(flat[i]), decode_rational(flat[i + 1])) for i in range(0, len(flat), 2)]
    return make_stage(pts)


def stages_to_prefix(stages: Sequence[Stage]) -> Prefix:
    return Prefix.of([stage_to_nat(s) for s in stages])


def prefix_to_stages(p: Prefix) -> Tuple[Stage, ...]:
    out = []
    for k in range(len(p)):
        if not p.defined_at(k):
            break
        out.append(nat_to_stage(p[k]))
    return tuple(out)


def stage_to_text(stage: Stage) -> str:
    return ";".join("%s/%s,%s/%s" % (x.numerator, x.denominator, y.numerator, y.denominator) for x, y in stage)


def text_to_stage(text: str) -> Stage:
    pts = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        xs, ys = tok.split(",")
        xn, xd = xs.split("/")
        yn, yd = ys.split("/")
        pts.append((Fraction(int(xn), int(xd)), Fraction(int(yn), int(yd))))
    return make_stage(pts)
