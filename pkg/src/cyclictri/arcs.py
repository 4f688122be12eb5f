"""Ground-set arithmetic, d-arcs and combinatorial triangulations of C(m, 2d).

Vertices of the cyclic polytope are labelled ``1..m``.  All arithmetic on
labels is modulo ``m`` with representatives in ``[m]``.  An arc is stored as
its ascending tuple; cyclic re-anchoring is only ever computed on demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import (
    IntertwiningPair,
    NotInternal,
    OutOfRange,
    ParamMismatch,
    ReconstructionFailure,
    WrongArity,
    WrongCardinality,
)

__all__ = [
    "PolytopeParams",
    "CyclicFrame",
    "DArc",
    "Simplex",
    "Triangulation",
    "make_arc",
    "is_arc_tuple",
    "nonconsec",
    "intertwines",
    "intertwining_tuples",
    "make_triangulation",
    "interior_simplices",
    "cells",
    "parse_arc",
    "format_arc",
    "compact_arc",
    "triangulation_to_json",
    "triangulation_from_json",
]


def reduce_mod(x: int, m: int) -> int:
    """Representative of ``x`` modulo ``m`` in ``1..m``."""
    return (x - 1) % m + 1


@dataclass(frozen=True, order=True)
class PolytopeParams:
    """Parameters of C(m, 2d); ``n = m - 2d - 1``."""

    m: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.m < 2 * self.d + 1:
            raise ValueError(f"m must be >= 2d+1 = {2 * self.d + 1}, got {self.m}")

    @classmethod
    def from_dn(cls, d: int, n: int) -> "PolytopeParams":
        return cls(n + 2 * d + 1, d)

    @property
    def n(self) -> int:
        return self.m - 2 * self.d - 1

    @property
    def arc_count(self) -> int:
        """Number of d-arcs in every triangulation."""
        return comb(self.n + self.d - 1, self.d)

    def __str__(self):
        return f"C({self.m},{2 * self.d})"


@dataclass(frozen=True)
class CyclicFrame:
    """The cyclically shifted order ``<_l`` on ``[m]`` anchored at ``l``."""

    anchor: int
    m: int

    def key(self, x: int) -> int:
        return (x - self.anchor) % self.m

    def less(self, x: int, y: int) -> bool:
        return self.key(x) < self.key(y)

    def sort(self, values: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(values, key=self.key))


def is_arc_tuple(values: Sequence[int], m: int) -> bool:
    """Gap test on an ascending tuple: consecutive entries differ by at least
    2, including the wrap-around gap ``a_0 + m - a_d``."""
    for i in range(len(values) - 1):
        if values[i + 1] < values[i] + 2:
            return False
    return values[-1] + 2 <= values[0] + m


def intertwining_tuples(a: Sequence[int], b: Sequence[int]) -> bool:
    """Cyclic alternation test on two ascending tuples of equal length.

    Anchoring at the smaller first entry, the two tuples intertwine iff the
    merged sequence strictly alternates; any shared entry breaks this.
    """
    if b[0] < a[0]:
        a, b = b, a
    k = len(a)
    for i in range(k - 1):
        if not a[i] < b[i] < a[i + 1]:
            return False
    return a[k - 1] < b[k - 1]


@dataclass(frozen=True, order=True)
class DArc:
    """An internal d-simplex of C(m, 2d), stored as an ascending tuple."""

    values: tuple[int, ...]
    params: PolytopeParams = field(repr=False)
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.values, self.params.m)))

    def __hash__(self):
        return self._hash

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __contains__(self, x):
        return x in self.values

    def __str__(self):
        return format_arc(self.values)

    def __repr__(self):
        return f"DArc({format_arc(self.values)})"

    def replace(self, old: int, new: int) -> "DArc":
        """Swap entry ``old`` for ``new`` and re-canonicalise."""
        vals = tuple(sorted(new if x == old else x for x in self.values))
        return DArc(vals, self.params)

    def shifted(self, k: int) -> tuple[int, ...]:
        """The tuple ``A + k`` reduced mod m (not necessarily canonical order)."""
        m = self.params.m
        return tuple(sorted(reduce_mod(x + k, m) for x in self.values))

    def successor(self, x: int) -> int:
        """Entry cyclically following entry ``x``."""
        vals = self.values
        i = vals.index(x)
        return vals[(i + 1) % len(vals)]

    def predecessor(self, x: int) -> int:
        vals = self.values
        i = vals.index(x)
        return vals[i - 1]

    def gap_after(self, x: int) -> int:
        """Cyclic distance from entry ``x`` to its successor entry."""
        return (self.successor(x) - x) % self.params.m or self.params.m

    def anchored(self, anchor: int) -> tuple[int, ...]:
        """Entries listed in the order ``<_anchor``."""
        return CyclicFrame(anchor, self.params.m).sort(self.values)


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex of C(m, 2d) given by its ascending vertex tuple."""

    values: tuple[int, ...]
    params: PolytopeParams = field(repr=False)

    def __post_init__(self):
        v = self.values
        if any(x < 1 or x > self.params.m for x in v) or len(set(v)) != len(v):
            raise OutOfRange(f"invalid simplex {v} for m={self.params.m}")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __str__(self):
        return format_arc(self.values)

    def __repr__(self):
        return f"Simplex({format_arc(self.values)})"

    def facets(self) -> list[tuple[int, ...]]:
        v = self.values
        return [v[:i] + v[i + 1:] for i in range(len(v))]


def make_arc(values: Iterable[int], params: PolytopeParams) -> DArc:
    vals = tuple(int(x) for x in values)
    if len(vals) != params.d + 1:
        raise WrongArity(f"expected {params.d + 1} entries, got {len(vals)}: {vals}")
    for x in vals:
        if not 1 <= x <= params.m:
            raise OutOfRange(f"entry {x} not in [1, {params.m}]")
    if len(set(vals)) != len(vals):
        raise NotInternal(f"repeated entry in {vals}")
    vals = tuple(sorted(vals))
    if not is_arc_tuple(vals, params.m):
        raise NotInternal(f"{format_arc(vals)} lies in a facet of {params}")
    return DArc(vals, params)


def nonconsec(params: PolytopeParams) -> list[DArc]:
    """All d-arcs of C(m, 2d) in lexicographic order."""
    m, k = params.m, params.d + 1
    return [
        DArc(c, params)
        for c in combinations(range(1, m + 1), k)
        if is_arc_tuple(c, m)
    ]


def intertwines(a: DArc, b: DArc) -> bool:
    if a.params != b.params:
        raise ParamMismatch(f"{a!r} in {a.params} vs {b!r} in {b.params}")
    return intertwining_tuples(a.values, b.values)


class Triangulation:
    """A maximal non-intertwining set of d-arcs.

    Instances are immutable; ``arcs`` is the canonically sorted tuple of arcs
    and doubles as the hashable canonical key.
    """

    def __init__(self, arcs: Iterable[DArc], params: PolytopeParams):
        self.params = params
        self.arcs: tuple[DArc, ...] = tuple(sorted(set(arcs)))
        self._set = frozenset(self.arcs)
        self._hash = hash(self.key)

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(a.values for a in self.arcs)

    def __contains__(self, arc) -> bool:
        return arc in self._set

    def __iter__(self) -> Iterator[DArc]:
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.params == other.params and self.arcs == other.arcs

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Triangulation"):
        return (self.params, self.key) < (other.params, other.key)

    def __repr__(self):
        return f"Triangulation({self.params}, [{' '.join(compact_arc(a) for a in self.arcs)}])"

    @cached_property
    def value_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(a.values for a in self.arcs)

    def arc(self, values: Iterable[int]) -> DArc:
        return make_arc(values, self.params)

    def replace(self, old: DArc, new: DArc) -> "Triangulation":
        return Triangulation([a for a in self.arcs if a != old] + [new], self.params)


def make_triangulation(arcs: Iterable, params: PolytopeParams) -> Triangulation:
    """Validate ``arcs`` and wrap them as a :class:`Triangulation`.

    Items may be :class:`DArc` or plain integer tuples.
    """
    checked = []
    for a in arcs:
        if isinstance(a, DArc):
            if a.params != params:
                raise ParamMismatch(f"{a!r} belongs to {a.params}, not {params}")
            checked.append(a)
        else:
            checked.append(make_arc(a, params))
    checked = sorted(set(checked))
    for i, a in enumerate(checked):
        for b in checked[i + 1:]:
            if intertwining_tuples(a.values, b.values):
                raise IntertwiningPair(a, b)
    if len(checked) != params.arc_count:
        raise WrongCardinality(len(checked), params.arc_count)
    return Triangulation(checked, params)


def interior_simplices(tri: Triangulation) -> set[Simplex]:
    """(d+2)-subsets of [m] all of whose facets are arcs of ``tri``."""
    arcs = tri.value_set
    m = tri.params.m
    found = set()
    for a in arcs:
        for v in range(1, m + 1):
            if v in a:
                continue
            s = tuple(sorted(a + (v,)))
            if s in found:
                continue
            if all(s[:i] + s[i + 1:] in arcs for i in range(len(s))):
                found.add(s)
    return {Simplex(s, tri.params) for s in found}


def cells(tri: Triangulation, validate: bool = False) -> set[Simplex]:
    """Maximal 2d-simplices of ``tri``, reconstructed from its arcs.

    A (2d+1)-subset is a cell iff each of its d-faces that is internal to the
    polytope is an arc of ``tri``.  With ``validate=True`` the result is
    checked against the exact geometric oracle.
    """
    p = tri.params
    arcs = tri.value_set
    m, d = p.m, p.d
    out = set()
    for c in combinations(range(1, m + 1), 2 * d + 1):
        ok = True
        for face in combinations(c, d + 1):
            if is_arc_tuple(face, m) and face not in arcs:
                ok = False
                break
        if ok:
            out.add(Simplex(c, p))
    if validate:
        from .geometry import validate_cells

        report = validate_cells(p, [c.values for c in out])
        if not report.ok:
            raise ReconstructionFailure(f"{tri!r}: {report.reason}")
    return out


_DIGITS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def parse_arc(text: str) -> tuple[int, ...]:
    """Parse ``"1,3,6,8"`` or the compact form ``"357A"`` (A-Z = 10-35)."""
    text = text.strip()
    if not text:
        raise ValueError("empty arc token")
    if "," in text or " " in text:
        parts = [p for p in text.replace(",", " ").split() if p]
        return tuple(int(p) for p in parts)
    out = []
    for ch in text.upper():
        v = _DIGITS.find(ch)
        if v < 1:
            raise ValueError(f"bad compact arc symbol {ch!r} in {text!r}")
        out.append(v)
    return tuple(out)


def format_arc(values: Iterable[int]) -> str:
    return ",".join(str(x) for x in values)


def compact_arc(values: Iterable[int]) -> str:
    """Figure-style label: one symbol per vertex, letters from 10 on."""
    return "".join(_DIGITS[x] for x in values)


def triangulation_to_json(tri: Triangulation) -> str:
    payload = {
        "m": tri.params.m,
        "d": tri.params.d,
        "arcs": [list(a.values) for a in tri.arcs],
    }
    return json.dumps(payload)


def triangulation_from_json(text: str) -> Triangulation:
    """Parse and validate the triangulation JSON format.

    Raises ``ValueError`` (or ``json.JSONDecodeError``) on malformed input and
    a :class:`~cyclictri.errors.CyclicTriError` subclass on invalid arcs.
    """
    data = json.loads(text)
    if not isinstance(data, dict) or not {"m", "d", "arcs"} <= data.keys():
        raise ValueError("expected an object with keys m, d, arcs")
    params = PolytopeParams(int(data["m"]), int(data["d"]))
    arcs = []
    for a in data["arcs"]:
        arcs.append(parse_arc(a) if isinstance(a, str) else tuple(int(x) for x in a))
    return make_triangulation(arcs, params)
