"""Towers of signed orbitals: maximal chains, exemplary checks, depth bounds."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .orbitals import GroupSpec, SignedOrbital, canonical_signatures
from .plcore import Interval, PLError, PLMap, support
from .words import DEFAULT_CAP, ball


@dataclass(frozen=True)
class Tower:
    """Signed orbitals with strictly nested orbitals, innermost first."""

    entries: tuple[SignedOrbital, ...]

    def __post_init__(self):
        for inner, outer in zip(self.entries, self.entries[1:]):
            if not (outer.orbital.contains(inner.orbital) and outer.orbital != inner.orbital):
                raise PLError("tower orbitals must be strictly nested, innermost first")

    @property
    def height(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def _chains(orbitals: Sequence[Interval]):
    """Longest strict chains by inclusion.

    Returns (up, down, nxt): up[i] counts the longest chain from i upward,
    down[i] the longest from i downward, nxt[i] the next-larger orbital on a
    longest upward chain.
    """
    n = len(orbitals)
    # a strict container is never shorter, so larger-first is a topological order
    order = sorted(range(n), key=lambda i: (-orbitals[i].length, orbitals[i].left))
    up = [1] * n
    nxt = [-1] * n
    for pos, i in enumerate(order):
        A = orbitals[i]
        for j in order[:pos]:
            B = orbitals[j]
            if B != A and B.contains(A) and up[j] + 1 > up[i]:
                up[i] = up[j] + 1
                nxt[i] = j
    down = [1] * n
    for pos in range(n - 1, -1, -1):
        i = order[pos]
        A = orbitals[i]
        for j in order[pos + 1:]:
            B = orbitals[j]
            if B != A and A.contains(B) and down[j] + 1 > down[i]:
                down[i] = down[j] + 1
    return up, down, nxt


def max_tower(elements: Iterable[PLMap]) -> Tower:
    """A tallest tower among the elements' signed orbitals.

    Equal orbitals collapse to one node carrying the smallest signature in
    canonical order; ties between chains go to the shortest, then leftmost, innermost orbital.
    """
    sig = canonical_signatures(elements)
    orbs = sorted(sig)
    if not orbs:
        return Tower(())
    up, _, nxt = _chains(orbs)
    best = max(range(len(orbs)), key=lambda i: (up[i], -orbs[i].length, [-x for x in orbs[i].ends]))
    entries = []
    i = best
    while i != -1:
        entries.append(SignedOrbital(orbs[i], sig[orbs[i]]))
        i = nxt[i]
    return Tower(tuple(entries))


def is_exemplary(T: Tower) -> bool:
    """No inner signature has an orbital touching, or ending at, an end of an outer orbital."""
    for k, (A, g) in enumerate((e.orbital, e.signature) for e in T.entries):
        gorbs = support(g)
        for outer in T.entries[k + 1:]:
            B = outer.orbital
            for C in gorbs:
                if C.contains_point(B.left) or C.contains_point(B.right):
                    return False
                if B.contains(C) and (C.left == B.left or C.right == B.right):
                    return False
    return True


@dataclass
class DepthReport:
    height: int
    witness: Tower
    radius: int
    exemplary: bool
    ball_size: int = 0
    words: tuple[str, ...] = ()

    @property
    def summary(self) -> str:
        return (
            f"tower of height {self.height} found in the radius-{self.radius} ball; "
            f"if the group is solvable its derived length is >= {self.height}"
        )

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "radius": self.radius,
            "exemplary": self.exemplary,
            "ball_size": self.ball_size,
            "witness": self.witness.to_json(),
            "witness_words": list(self.words),
            "summary": self.summary,
        }


def depth_lower_bound(G: GroupSpec, radius: int, *, cap: int = DEFAULT_CAP) -> DepthReport:
    if radius < 1:
        raise ValueError("radius must be >= 1")
    B = ball(G, radius, cap=cap)
    T = max_tower(B.elements)
    words = tuple(B.word_of(e.signature) for e in T.entries)
    return DepthReport(T.height, T, radius, is_exemplary(T), len(B), words)


def _orbital_index(A: Interval, elements: Iterable[PLMap]):
    orbs = sorted({B for h in elements for B in support(h)})
    if A not in orbs:
        raise PLError(f"{A} is not an orbital of any given element")
    return orbs, orbs.index(A)


def orbital_depth(A: Interval, elements: Iterable[PLMap]) -> int:
    """Longest strict chain of element orbitals from A upward, A included."""
    orbs, i = _orbital_index(A, elements)
    return _chains(orbs)[0][i]


def orbital_height(A: Interval, elements: Iterable[PLMap]) -> int:
    """Longest strict chain of element orbitals from A downward, A included."""
    orbs, i = _orbital_index(A, elements)
    return _chains(orbs)[1][i]


def orbital_depths(orbitals: Iterable[Interval]) -> dict[Interval, int]:
    orbs = sorted(set(orbitals))
    up = _chains(orbs)[0]
    return dict(zip(orbs, up))
