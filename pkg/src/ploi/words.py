"""Word balls, iterated commutator sets and derived-length bounds."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .orbitals import GroupSpec
from .plcore import PLMap, compose, identity, inverse, support

DEFAULT_CAP = 20000


class CapExceeded(RuntimeError):
    """An enumeration grew past its element cap."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded the cap of {cap} elements")
        self.what = what
        self.cap = cap


Word = tuple[tuple[int, int], ...]  # (generator index, +1 or -1)


def word_text(word: Word, names) -> str:
    if not word:
        return "id"
    return " ".join(names[i] if e > 0 else names[i].upper() for i, e in word)


@dataclass
class WordBall:
    radius: int
    elements: list[PLMap]
    words: dict[PLMap, Word]
    names: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, f):
        return f in self.words

    def word_of(self, f: PLMap) -> str:
        return word_text(self.words[f], self.names)


def ball(G: GroupSpec, radius: int, *, cap: int = DEFAULT_CAP) -> WordBall:
    """All products of at most ``radius`` generators and inverses, deduplicated.

    Breadth-first, so ``elements`` is in shortlex order of the first word
    found for each element.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    letters = []
    for i, g in enumerate(G.generators):
        letters.append(((i, 1), g))
        letters.append(((i, -1), inverse(g)))
    e = identity()
    words: dict[PLMap, Word] = {e: ()}
    elements = [e]
    frontier = deque([e])
    for _ in range(radius):
        nxt = deque()
        for f in frontier:
            w = words[f]
            for letter, g in letters:
                h = compose(f, g)
                if h not in words:
                    words[h] = w + (letter,)
                    elements.append(h)
                    nxt.append(h)
                    if len(elements) > cap:
                        raise CapExceeded("word ball", cap)
        frontier = nxt
        if not frontier:
            break
    return WordBall(radius, elements, words, list(G.names))


def _disjoint_supports(sa, sb) -> bool:
    i = j = 0
    while i < len(sa) and j < len(sb):
        A, B = sa[i], sb[j]
        if A.right <= B.left:
            i += 1
        elif B.right <= A.left:
            j += 1
        else:
            return False
    return True


def commutator_set(elements: list[PLMap], *, cap: Optional[int] = DEFAULT_CAP) -> list[PLMap]:
    """All nontrivial pairwise commutators of ``elements``, deduplicated.

    Since [g, f] = [f, g]^-1, each unordered pair is computed once and the
    inverse is added.  Pairs with disjoint supports commute and are skipped.
    Output is sorted by ``PLMap.key``.
    """
    supports = [support(f) for f in elements]
    out: set[PLMap] = set()
    n = len(elements)
    for i in range(n):
        f, sf = elements[i], supports[i]
        for j in range(i + 1, n):
            if _disjoint_supports(sf, supports[j]):
                continue
            g = elements[j]
            fg, gf = compose(f, g), compose(g, f)
            if fg == gf:
                continue
            # [f,g] = f^-1 g^-1 f g = (gf)^-1 (fg)
            c = compose(inverse(gf), fg)
            if c not in out:
                out.add(c)
                out.add(inverse(c))
                if cap is not None and len(out) > cap:
                    raise CapExceeded("commutator set", cap)
    return sorted(out, key=PLMap.key)


def derived_generators(B: WordBall, level: int, *, cap: int = DEFAULT_CAP) -> list[PLMap]:
    """Level 0: the ball minus the identity; level k: commutators of level k-1."""
    if level < 0:
        raise ValueError("level must be >= 0")
    cur = sorted((f for f in B.elements if not f.is_identity), key=PLMap.key)
    for _ in range(level):
        if not cur:
            break
        cur = commutator_set(cur, cap=cap)
    return cur


@dataclass
class DerivedReport:
    lower_bound: int
    vanishing_level: Optional[int]
    witness: Optional[PLMap]
    radius: int
    level_sizes: list[int]
    truncated_levels: list[int] = field(default_factory=list)
    stopped: str = ""

    @property
    def summary(self) -> str:
        text = f"derived length >= {self.lower_bound} (iterated commutators of radius-{self.radius} ball elements)"
        if self.vanishing_level is not None:
            text += (
                f"; level {self.vanishing_level} vanishes, consistent with derived length "
                f"<= {self.vanishing_level} at radius {self.radius}"
            )
            if self.truncated_levels:
                levels = ", ".join(map(str, self.truncated_levels))
                text += f" (levels {levels} were truncated to the beam before commutating)"
        elif self.stopped:
            text += f"; {self.stopped}"
        return text

    def to_json(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "vanishing_level": self.vanishing_level,
            "radius": self.radius,
            "level_sizes": self.level_sizes,
            "truncated_levels": self.truncated_levels,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "summary": self.summary,
        }


DEFAULT_BEAM = 300


def derived_length_bounds(
    G: GroupSpec,
    radius: int,
    *,
    cap: int = DEFAULT_CAP,
    beam: Optional[int] = DEFAULT_BEAM,
    max_level: int = 8,
) -> DerivedReport:
    """Lower bound on the derived length from nonvanishing iterated commutators.

    A nonempty level k-1 proves derived length >= k.  An empty level is
    evidence only.  Commutator sets grow quadratically, so when a level holds
    more than ``beam`` elements only the first ``beam`` in canonical order
    seed the next level (``beam=None`` disables this); the report lists the
    truncated levels.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    cur = sorted((f for f in ball(G, radius, cap=cap).elements if not f.is_identity), key=PLMap.key)
    sizes: list[int] = []
    truncated: list[int] = []
    witness = None
    level = 0
    while cur:
        sizes.append(len(cur))
        witness = cur[0]
        if level + 1 > max_level:
            return DerivedReport(level + 1, None, witness, radius, sizes, truncated, f"stopped at level {level} (max_level)")
        if beam is not None and len(cur) > beam:
            truncated.append(level)
            cur = cur[:beam]
        try:
            cur = commutator_set(cur, cap=None if beam is not None else cap)
        except CapExceeded as exc:
            return DerivedReport(level + 1, None, witness, radius, sizes, truncated, f"level {level + 1}: {exc}")
        level += 1
    sizes.append(0)
    return DerivedReport(level, level, witness, radius, sizes, truncated)
