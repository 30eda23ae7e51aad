"""Group supports, signed orbitals, end realization, transition chains, balance."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .plcore import Interval, PLMap, support


class End(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class SignedOrbital:
    orbital: Interval
    signature: PLMap

    def to_json(self) -> dict:
        return {"orbital": self.orbital.to_json(), "signature": self.signature.to_json()}


class GroupSpec:
    """A finitely generated subgroup, given by generators.

    Identity generators and duplicates are dropped, so the trivial group has
    an empty generator list.
    """

    def __init__(self, generators: Iterable[PLMap], label: str = "G", names: Optional[Sequence[str]] = None):
        gens = list(generators)
        names = list(names) if names is not None else [f"g{i}" for i in range(1, len(gens) + 1)]
        if len(names) != len(gens):
            raise ValueError("one name per generator")
        seen = set()
        self.generators: list[PLMap] = []
        self.names: list[str] = []
        for g, n in zip(gens, names):
            if g.is_identity or g in seen:
                continue
            seen.add(g)
            self.generators.append(g)
            self.names.append(n)
        self.label = label

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"GroupSpec({self.label!r}, {len(self.generators)} generators)"

    def reordered(self, order: Sequence[int]) -> "GroupSpec":
        return GroupSpec([self.generators[i] for i in order], self.label, [self.names[i] for i in order])

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "generators": {n: g.to_json() for n, g in zip(self.names, self.generators)},
        }


def union_components(intervals: Iterable[Interval]) -> list[Interval]:
    """Connected components of a union of open intervals, left to right."""
    ivs = sorted(intervals)
    out: list[Interval] = []
    for iv in ivs:
        # touching open intervals stay separate: the shared end is not covered
        if out and iv.left < out[-1].right:
            if iv.right > out[-1].right:
                out[-1] = Interval(out[-1].left, iv.right)
        else:
            out.append(iv)
    return out


def group_orbitals(G: GroupSpec | Sequence[PLMap]) -> list[Interval]:
    """Orbitals of the group: components of the union of generator supports.

    Every element's support lies in that union and each generator preserves
    every component, so this is exact for the generated group.
    """
    gens = G.generators if isinstance(G, GroupSpec) else G
    return union_components(A for g in gens for A in support(g))


def signed_orbitals(elements: Iterable[PLMap]) -> list[SignedOrbital]:
    return [SignedOrbital(A, h) for h in elements for A in support(h)]


def realizes_end(h: PLMap, A: Interval, end: End | str) -> bool:
    end = End(end)
    for B in support(h):
        if A.contains(B):
            if end is End.LEFT and B.left == A.left:
                return True
            if end is End.RIGHT and B.right == A.right:
                return True
    return False


def _realized_ends(orbitals: Sequence[Interval], A: Interval) -> tuple[bool, bool]:
    left = right = False
    for B in orbitals:
        if A.contains(B):
            left = left or B.left == A.left
            right = right or B.right == A.right
    return left, right


def overlaps_properly(A: Interval, B: Interval) -> bool:
    """a < c < b < d for A=(a,b), B=(c,d), in either order."""
    a, b = A.ends
    c, d = B.ends
    return (a < c < b < d) or (c < a < d < b)


def is_transition_chain(s: SignedOrbital, t: SignedOrbital) -> bool:
    return overlaps_properly(s.orbital, t.orbital)


def canonical_signatures(elements: Iterable[PLMap]) -> dict[Interval, PLMap]:
    """Orbital -> smallest signature (in ``PLMap.key`` order) among elements owning it."""
    best: dict[Interval, PLMap] = {}
    for h in elements:
        for A in support(h):
            cur = best.get(A)
            if cur is None or h.key() < cur.key():
                best[A] = h
    return best


def find_transition_chains(elements: Iterable[PLMap]) -> list[tuple[SignedOrbital, SignedOrbital]]:
    """All properly overlapping pairs among the elements' orbitals.

    Orbitals are deduplicated first; each pair carries the canonical
    signature of each orbital.  Output is sorted by orbital.
    """
    sig = canonical_signatures(elements)
    ivs = sorted(sig)
    out = []
    # sweep by left end: only intervals starting inside A can overlap it on the right
    for i, A in enumerate(ivs):
        for B in ivs[i + 1:]:
            if B.left >= A.right:
                break
            if B.left > A.left and B.right > A.right:
                out.append((SignedOrbital(A, sig[A]), SignedOrbital(B, sig[B])))
    return out


class BalanceStatus(str, Enum):
    BALANCED_UP_TO_RADIUS = "BalancedUpToRadius"
    IMBALANCED_WITNESS = "ImbalancedWitness"


UBIQUITOUS_F_NOTE = (
    "an element realizing exactly one end of an orbital forces a copy of "
    "Thompson's group F inside the group, so the "
    "group is not solvable; no embedding of F is constructed"
)


@dataclass(frozen=True)
class BalanceVerdict:
    status: BalanceStatus
    radius: int
    witness: Optional[tuple[SignedOrbital, Interval]] = None
    subgroup: tuple[PLMap, ...] = field(default=())
    note: str = ""

    @property
    def balanced(self) -> bool:
        return self.status is BalanceStatus.BALANCED_UP_TO_RADIUS

    def to_json(self) -> dict:
        out = {"status": self.status.value, "radius": self.radius}
        if self.witness is not None:
            so, A = self.witness
            out["witness"] = {"element_orbital": so.to_json(), "group_orbital": A.to_json()}
            out["note"] = self.note
        return out


def _one_sided(orbitals: Sequence[Interval], group_orbs: Sequence[Interval]):
    for A in group_orbs:
        left, right = _realized_ends(orbitals, A)
        if left != right:
            for B in orbitals:
                if A.contains(B) and (B.left == A.left or B.right == A.right):
                    return B, A
    return None


def balance_check(G: GroupSpec, radius: int, subset_size: int = 2, *, cap: int = 20000) -> BalanceVerdict:
    """Search a word ball for an element realizing one end of an orbital but not the other.

    Checked against the orbitals of the whole group (every ball element) and
    of each subgroup generated by at most ``subset_size`` ball elements (its
    own members).  Realization only depends on supports, so elements are
    grouped by support first.
    """
    from .words import ball

    if radius < 1:
        raise ValueError("radius must be >= 1")
    B = ball(G, radius, cap=cap)
    by_support: dict[tuple, PLMap] = {}
    for h in B.elements:
        s = tuple(support(h))
        if s and s not in by_support:
            by_support[s] = h
    gorbs = group_orbitals(G)

    def verdict(h, hit, members):
        so = SignedOrbital(hit[0], h)
        return BalanceVerdict(BalanceStatus.IMBALANCED_WITNESS, radius, (so, hit[1]), tuple(members), UBIQUITOUS_F_NOTE)

    for s, h in by_support.items():
        hit = _one_sided(s, gorbs)
        if hit:
            return verdict(h, hit, G.generators)
    # a single element realizes both ends of each of its own orbitals, so
    # subsets of size one never witness; start at pairs
    items = list(by_support.items())
    for size in range(2, subset_size + 1):
        for combo in itertools.combinations(items, size):
            supports = [s for s, _ in combo]
            flat = [A for s in supports for A in s]
            comps = union_components(flat)
            if len(comps) == len(flat):
                continue  # pairwise disjoint supports: nothing new
            for s, h in combo:
                hit = _one_sided(s, comps)
                if hit:
                    return verdict(h, hit, [m for _, m in combo])
    return BalanceVerdict(BalanceStatus.BALANCED_UP_TO_RADIUS, radius)
