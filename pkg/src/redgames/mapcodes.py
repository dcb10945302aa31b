"""Maps as portable data.

A small combinator language for monotone maps so that witnesses, oracle
codes inside jump/star instances, and CLI-supplied strategies are plain
text rather than host-language plugins.  Codes are canonical JSON (sorted
keys, no whitespace) so identical codes serialize to identical bytes.
"""

from __future__ import annotations

import json
from typing import Tuple

from .core import (
    BOTTOM,
    DEFAULT_FUEL,
    MonotoneMap,
    Prefix,
    apply_map,
    lane,
    pair_prefixes,
)


def _value_to_list(p: Prefix):
    return ["_" if e is BOTTOM else e for e in p.entries]


def _list_to_value(items) -> Prefix:
    return Prefix.of([BOTTOM if e == "_" else int(e) for e in items])


def serialize(code: dict) -> str:
    return json.dumps(code, sort_keys=True, separators=(",", ":"))


def parse(text: str) -> dict:
    code = json.loads(text)
    if not isinstance(code, dict) or "op" not in code:
        raise ValueError("a map code is an object with an 'op' field")
    return code


def identity_code() -> dict:
    return {"op": "identity"}


def constant_code(value: Prefix) -> dict:
    return {"op": "constant", "value": _value_to_list(value)}


def compose_code(first: dict, then: dict) -> dict:
    return {"op": "compose", "first": first, "then": then}


def lane_code(index: int, lanes: int) -> dict:
    return {"op": "lane", "index": index, "lanes": lanes}


def scale_code(factor: int) -> dict:
    return {"op": "scale", "factor": factor}


def offset_code(amount: int) -> dict:
    return {"op": "offset", "amount": amount}


def take_code(count: int) -> dict:
    return {"op": "take", "count": count}


def reverse_code() -> dict:
    # deliberately not monotone; ships for negative tests and sabotage runs
    return {"op": "reverse"}


def branch_on_bit_code(position: int, if_zero: dict, if_one: dict) -> dict:
    return {"op": "branch-on-bit", "position": position, "if_zero": if_zero, "if_one": if_one}


def to_map(code: dict, fuel: int = DEFAULT_FUEL) -> MonotoneMap:
    op = code["op"]
    if op == "identity":
        return MonotoneMap("identity", lambda p: p, fuel)
    if op == "constant":
        value = _list_to_value(code["value"])
        return MonotoneMap("constant", lambda p: value, fuel)
    if op == "compose":
        m1 = to_map(code["first"], fuel)
        m2 = to_map(code["then"], fuel)

        def run_compose(p: Prefix) -> Prefix:
            return apply_map(m2, apply_map(m1, p))

        return MonotoneMap("compose", run_compose, fuel)
    if op == "lane":
        idx, k = int(code["index"]), int(code["lanes"])

        def run_lane(p: Prefix) -> Prefix:
            return lane(p, idx, k)

        return MonotoneMap("lane[%d/%d]" % (idx, k), run_lane, fuel)
    if op == "scale":
        factor = int(code["factor"])

        def run_scale(p: Prefix) -> Prefix:
            return Prefix.of([e if e is BOTTOM else e * factor for e in p.entries])

        return MonotoneMap("scale*%d" % factor, run_scale, fuel)
    if op == "offset":
        amount = int(code["amount"])

        def run_offset(p: Prefix) -> Prefix:
            return Prefix.of([e if e is BOTTOM else e + amount for e in p.entries])

        return MonotoneMap("offset+%d" % amount, run_offset, fuel)
    if op == "take":
        count = int(code["count"])

        def run_take(p: Prefix) -> Prefix:
            return p.truncate(count)

        return MonotoneMap("take%d" % count, run_take, fuel)
    if op == "reverse":

        def run_reverse(p: Prefix) -> Prefix:
            return Prefix(tuple(reversed(p.entries)))

        return MonotoneMap("reverse", run_reverse, fuel)
    if op == "branch-on-bit":
        pos = int(code["position"])
        m0 = to_map(code["if_zero"], fuel)
        m1 = to_map(code["if_one"], fuel)

        def run_branch(p: Prefix) -> Prefix:
            if not p.defined_at(pos):
                return Prefix()
            return apply_map(m1 if p[pos] else m0, p)

        return MonotoneMap("branch@%d" % pos, run_branch, fuel)
    raise ValueError("unknown map op %r" % op)


doubling_code = {"op": "scale", "factor": 2}


# -- embedding codes in prefixes ----------------------------------------------
#
# Jump and star instances carry map codes inside a prefix lane: the code's
# UTF-8 bytes shifted up by one, a single 0 terminator, then zeros forever.


def code_to_stream(code: dict, length: int) -> Prefix:
    data = serialize(code).encode("utf-8")
    body = [b + 1 for b in data] + [0]
    if length < len(body):
        body = body[:length]
    else:
        body = body + [0] * (length - len(body))
    return Prefix.of(body)


def codes_to_stream(codes, length: int) -> Prefix:
    return code_to_stream({"op": "bundle", "parts": list(codes)}, length)


def stream_to_codes(p: Prefix) -> Tuple[dict, ...]:
    """Decode a code lane; raises LookupError while the terminator is pending."""
    data = []
    for e in p.entries:
        if e is BOTTOM:
            raise LookupError("code stream interrupted")
        if e == 0:
            text = bytes(b - 1 for b in data).decode("utf-8")
            code = parse(text)
            if code.get("op") == "bundle":
                return tuple(code["parts"])
            return (code,)
        data.append(e)
    raise LookupError("code stream not yet terminated")
