"""Isomorphism decisions via trace-range groups and GL2(Z)-orbits.

The "usual action" of GL2(Z) on T^2 is taken to be the linear one,
((a, b), (c, d)) . (mu, nu) = (a mu + b nu, c mu + d nu) mod 1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .scalar import ExactScalar, Params
from .traces import TraceRangeGroup, trace_range

ISOMORPHIC = "Isomorphic"
NOT_ISOMORPHIC = "NotIsomorphic"
RATIONAL_ORBIT_ONLY = "RationalCaseOrbitOnly"


@dataclass(frozen=True)
class GL2Z:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: GL2Z) -> GL2Z:
        return GL2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY = GL2Z(1, 0, 0, 1)
S = GL2Z(0, -1, 1, 0)
T = GL2Z(1, 1, 0, 1)
R = GL2Z(1, 0, 0, -1)
GENERATORS = {"S": S, "T": T, "R": R}


def word(letters: str) -> GL2Z:
    g = IDENTITY
    for ch in letters:
        g = g @ GENERATORS[ch]
    return g


def apply_gl2z(g: GL2Z, mu, nu) -> tuple[ExactScalar, ExactScalar]:
    mu, nu = ExactScalar.coerce(mu), ExactScalar.coerce(nu)
    m2 = g.a * mu + g.b * nu
    n2 = g.c * mu + g.d * nu
    return m2.floor_mod1()[1], n2.floor_mod1()[1]


def apply_to_params(g: GL2Z, params: Params) -> Params:
    mu, nu = apply_gl2z(g, params.mu, params.nu)
    return Params(params.c, mu, nu, params.d)


class FieldMismatch(ValueError):
    pass


def group_equal(G: TraceRangeGroup, G2: TraceRangeGroup) -> bool:
    if G.d != G2.d:
        raise FieldMismatch(f"groups over sqrt({G.d}) and sqrt({G2.d})")
    return G.D == G2.D and G.H == G2.H


def torsion_order(mu: ExactScalar, nu: ExactScalar) -> int:
    """Order of the rational point (mu, nu) in the group T^2."""
    return lcm(mu.a.denominator, nu.a.denominator)


def rational_same_orbit(p1: Params, p2: Params) -> bool:
    """Orbit equality for rational points: GL2(Z) acts transitively on points of each order."""
    return torsion_order(p1.mu, p1.nu) == torsion_order(p2.mu, p2.nu)


@dataclass(frozen=True)
class Verdict:
    kind: str
    justification: str
    same_orbit: bool | None = None
    groups: tuple[TraceRangeGroup, TraceRangeGroup] | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "justification": self.justification}
        if self.same_orbit is not None:
            out["same_orbit"] = self.same_orbit
        if self.groups is not None:
            out["groups"] = [g.to_json() for g in self.groups]
        return out


def decide_isomorphism(p1: Params, p2: Params) -> Verdict:
    if p1.c != p2.c:
        return Verdict(
            NOT_ISOMORPHIC,
            f"K0 = Z^3 + Z_{p1.c} versus Z^3 + Z_{p2.c}: torsion parts differ (c={p1.c} vs c={p2.c})",
        )
    if p1.is_rational and p2.is_rational:
        same = rational_same_orbit(p1, p2)
        o1, o2 = torsion_order(p1.mu, p1.nu), torsion_order(p2.mu, p2.nu)
        return Verdict(
            RATIONAL_ORBIT_ONLY,
            f"all parameters rational: no isomorphism verdict; torsion orders {o1} and {o2}",
            same_orbit=same,
        )
    d = p1.d or p2.d
    G1, G2 = trace_range(p1, d), trace_range(p2, d)
    eq = group_equal(G1, G2)
    rel = "=" if eq else "!="
    return Verdict(
        ISOMORPHIC if eq else NOT_ISOMORPHIC,
        f"Z+2muZ+2nuZ: D={G1.D},H={list(map(list, G1.H))} {rel} D={G2.D},H={list(map(list, G2.H))}",
        groups=(G1, G2),
    )


def brute_force_orbit_rational(q: int, pt, pt2) -> bool:
    """BFS over the orbit of pt in (Z/q)^2 under S, T, R; membership of pt2.

    Points are given as pairs of rationals with denominators dividing q.
    """
    def to_cell(p):
        a, b = (Fraction(v) * q for v in p)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{p} does not have denominator dividing {q}")
        return int(a) % q, int(b) % q

    start, goal = to_cell(pt), to_cell(pt2)
    return goal in orbit_cells(q, start)


def orbit_cells(q: int, start: tuple[int, int]) -> set[tuple[int, int]]:
    seen = {start}
    todo = deque([start])
    while todo:
        a, b = todo.popleft()
        for g in (S, T, R):
            nxt = ((g.a * a + g.b * b) % q, (g.c * a + g.d * b) % q)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def orbit_partition(q: int) -> dict[tuple[int, int], int]:
    """Label every cell of (Z/q)^2 by its orbit index."""
    label: dict[tuple[int, int], int] = {}
    n = 0
    for a in range(q):
        for b in range(q):
            if (a, b) not in label:
                for cell in orbit_cells(q, (a, b)):
                    label[cell] = n
                n += 1
    return label


def gcd_invariant(q: int, a: int, b: int) -> int:
    return gcd(gcd(a, b), q)
