"""One-orbital pieces of group elements (the split group) and the algorithms on them."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .orbitals import GroupSpec
from .plcore import (
    Interval,
    PLError,
    PLMap,
    compose,
    compose_all,
    conjugate,
    one_bump_factors,
    support,
)
from .towers import orbital_depths
from .words import DEFAULT_CAP, ball

log = logging.getLogger(__name__)


class TransitionChainObstruction(PLError):
    """Two intersecting pieces are not nested; the group is not solvable."""


class SearchBudgetExhausted(PLError):
    pass


class DominanceViolation(PLError):
    """A first-orbital-dominant product failed to have the first orbital as support."""


def orbital_of(piece: PLMap) -> Interval:
    s = support(piece)
    if len(s) != 1:
        raise PLError(f"expected a one-orbital map, got {len(s)} orbitals")
    return s[0]


@dataclass
class GammaSet:
    pieces: list[PLMap]
    source_radius: int
    sources: dict[PLMap, PLMap] = field(default_factory=dict)  # piece -> ball element it came from

    def orbitals(self) -> list[Interval]:
        return sorted({orbital_of(p) for p in self.pieces})


def gamma_g(G: GroupSpec, radius: int, *, cap: int = DEFAULT_CAP) -> GammaSet:
    """One-orbital restrictions of every element of the radius ball."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    pieces: list[PLMap] = []
    sources: dict[PLMap, PLMap] = {}
    for h in ball(G, radius, cap=cap).elements:
        for p in one_bump_factors(h):
            if p not in sources:
                sources[p] = h
                pieces.append(p)
    return GammaSet(pieces, radius, sources)


@dataclass(frozen=True)
class DepthTaggedPiece:
    piece: PLMap
    orbital: Interval
    g_depth: int

    def to_json(self) -> dict:
        return {"orbital": self.orbital.to_json(), "g_depth": self.g_depth, "piece": self.piece.to_json()}


def tag_depths(S: GammaSet, conjugators: Sequence[PLMap] = ()) -> list[DepthTaggedPiece]:
    """Tag each piece with the depth of its orbital among the set's orbitals.

    For each conjugator h, a piece p whose conjugate p^h lands on an orbital
    of the set must carry the same depth there; mismatches are logged (they
    mean the radius is too small to see the true depths).
    """
    depths = orbital_depths(orbital_of(p) for p in S.pieces)
    tags = [DepthTaggedPiece(p, orbital_of(p), depths[orbital_of(p)]) for p in S.pieces]
    for h in conjugators:
        for t in tags:
            B = orbital_of(conjugate(t.piece, h))
            if B in depths and depths[B] != t.g_depth:
                log.warning("depth mismatch under conjugation: %s has %d, %s has %d", t.orbital, t.g_depth, B, depths[B])
    return tags


def depth_lookup(S: GammaSet):
    """Depth of any interval measured against the set's orbitals (interval included)."""
    known = orbital_depths(S.orbitals())

    def depth(A: Interval) -> int:
        if A in known:
            return known[A]
        return 1 + max((d for B, d in known.items() if B != A and B.contains(A)), default=0)

    return depth


def split_form(product: Sequence[DepthTaggedPiece]) -> list[DepthTaggedPiece]:
    """Reorder a product so G-depths are nondecreasing, keeping the composite map.

    A deeper piece a in front of a shallower piece b is rewritten as
    b, a^b; when their orbitals meet, a's orbital must lie inside b's.
    """
    out = list(product)
    n = len(out)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            a, b = out[i], out[i + 1]
            if a.g_depth <= b.g_depth:
                continue
            if a.orbital.meets(b.orbital) and not b.orbital.contains(a.orbital):
                raise TransitionChainObstruction(f"pieces on {a.orbital} and {b.orbital} cannot be reordered")
            moved = conjugate(a.piece, b.piece)
            out[i] = b
            out[i + 1] = DepthTaggedPiece(moved, orbital_of(moved), a.g_depth)
            changed = True
    return out


def first_orbital_dominant(product: Sequence[PLMap]) -> bool:
    """True when every later orbital's closure lies in the first orbital.

    For such products the support of the composite is checked to be exactly
    the first orbital; a failure raises ``DominanceViolation``.
    """
    if not product:
        return False
    orbs = [orbital_of(p) for p in product]
    first = orbs[0]
    if not all(first.contains_closure(B) for B in orbs[1:]):
        return False
    got = support(compose_all(product))
    if got != [first]:
        raise DominanceViolation(f"composite support {got} differs from {first}")
    return True


@dataclass
class _Piece:
    piece: PLMap
    orbital: Interval
    source: PLMap  # an element of G agreeing with the piece on its orbital


@dataclass
class SearchResult:
    element: PLMap
    trace: list[dict]

    def to_json(self) -> dict:
        return {"element": self.element.to_json(), "trace": self.trace}


def split_stable_search(
    A: Interval,
    product: Sequence[PLMap],
    G: GroupSpec,
    radius: int,
    max_depth: int,
    *,
    cap: int = DEFAULT_CAP,
    max_steps: int = 10000,
) -> SearchResult:
    """Find an element of G having orbital A, given pieces whose product has orbital A.

    Each piece must be a one-orbital restriction of an element of the
    radius ball.  Steps: singleton shortcut, depth reordering, dropping
    pieces away from the leading orbital, and collapsing the first two
    pieces on the leading orbital.  ``max_depth`` bounds how often the
    leading orbital may shrink.
    """
    S = gamma_g(G, radius, cap=cap)
    depth = depth_lookup(S)
    trace: list[dict] = []

    def note(step: str, prod: list[_Piece], extra: Optional[dict] = None):
        entry = {
            "step": step,
            "length": len(prod),
            "leading_orbital": prod[0].orbital.to_json() if prod else None,
        }
        if extra:
            entry.update(extra)
        trace.append(entry)

    prod: list[_Piece] = []
    for p in product:
        if p not in S.sources:
            raise PLError("product entry is not a piece of the radius ball")
        prod.append(_Piece(p, orbital_of(p), S.sources[p]))
    if A not in support(compose_all(p.piece for p in prod)):
        raise PLError(f"{A} is not an orbital of the product")

    shrinks = 0
    last_lead: Optional[Interval] = None
    for _ in range(max_steps):
        if not prod:
            raise PLError("product became empty")
        # 1. singleton
        if len(prod) == 1:
            note("1-singleton", prod)
            return _finish(A, prod[0], trace)
        # 2. depth ordering; swapped-in conjugates of sources stay in G
        tagged = [DepthTaggedPiece(p.piece, p.orbital, depth(p.orbital)) for p in prod]
        reordered = _split_form_sources(tagged, [p.source for p in prod])
        prod = reordered
        note("2-depth-order", prod)
        lead = prod[0].orbital
        # 3. leading piece must meet A
        if not lead.meets(A):
            prod = prod[1:]
            note("3-drop-disjoint-leading", prod)
            continue
        if not lead.contains(A):
            raise TransitionChainObstruction(f"{A} is not inside the leading orbital {lead}")
        if last_lead is not None and lead != last_lead and last_lead.contains(lead):
            shrinks += 1
            if shrinks >= max_depth:
                raise SearchBudgetExhausted(f"leading orbital shrank {shrinks} times (budget {max_depth})")
        last_lead = lead
        # 4. pieces outside the leading orbital
        kept = [prod[0]] + [p for p in prod[1:] if p.orbital.meets(lead)]
        for p in kept[1:]:
            if not lead.contains(p.orbital):
                raise TransitionChainObstruction(f"{p.orbital} meets {lead} without nesting")
        if len(kept) < len(prod):
            note("4-force-containment", kept, {"dropped": len(prod) - len(kept)})
            prod = kept
            continue
        # 5. how many pieces sit on the leading orbital
        s = 1
        while s < len(prod) and prod[s].orbital == lead:
            s += 1
        for p in prod[s:]:
            if p.orbital.left == lead.left or p.orbital.right == lead.right:
                raise TransitionChainObstruction(f"{p.orbital} shares an end with the leading orbital {lead}")
        note("5-count-leading", prod, {"s": s})
        if s == 1:
            first_orbital_dominant([p.piece for p in prod])
            if lead != A:
                raise PLError(f"dominant product has support {lead}, expected {A}")
            return _finish(A, prod[0], trace)
        # 6. merge the first two pieces
        tau = compose(prod[0].piece, prod[1].piece)
        src = compose(prod[0].source, prod[1].source)
        if tau.is_identity:
            prod = prod[2:]
            note("6-cancel", prod)
            continue
        new = [_Piece(b, orbital_of(b), src) for b in one_bump_factors(tau) if orbital_of(b).meets(A)]
        prod = new + prod[2:]
        note("6-collapse", prod, {"new_pieces": len(new)})
    raise SearchBudgetExhausted(f"no result after {max_steps} steps")


def _split_form_sources(tagged: list[DepthTaggedPiece], sources: list[PLMap]) -> list[_Piece]:
    # split_form with the source elements carried along: a piece conjugated by
    # b is matched by its source conjugated by b's source
    out = list(zip(tagged, sources))
    n = len(out)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            (a, sa), (b, sb) = out[i], out[i + 1]
            if a.g_depth <= b.g_depth:
                continue
            if a.orbital.meets(b.orbital) and not b.orbital.contains(a.orbital):
                raise TransitionChainObstruction(f"pieces on {a.orbital} and {b.orbital} cannot be reordered")
            out[i] = (b, sb)
            if a.orbital.meets(b.orbital):
                moved = conjugate(a.piece, b.piece)
                out[i + 1] = (DepthTaggedPiece(moved, orbital_of(moved), a.g_depth), conjugate(sa, sb))
            else:
                out[i + 1] = (a, sa)
            changed = True
    return [_Piece(t.piece, t.orbital, s) for t, s in out]


def _finish(A: Interval, p: _Piece, trace: list[dict]) -> SearchResult:
    if p.orbital != A:
        raise PLError(f"final piece has orbital {p.orbital}, expected {A}")
    if A not in support(p.source):
        raise PLError("source element does not realize the orbital")
    trace.append({"step": "done", "length": 1, "leading_orbital": A.to_json()})
    return SearchResult(p.source, trace)
