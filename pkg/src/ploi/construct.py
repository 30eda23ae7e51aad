"""Named maps and generating sets: alpha1, alpha2, bumps, beta_k, W_n, truncated G_n."""
from __future__ import annotations

from dataclasses import dataclass

from .orbitals import GroupSpec
from .plcore import (
    ONE,
    ZERO,
    Interval,
    PLError,
    PLMap,
    conjugate,
    identity,
    power,
    rational,
    _normalize,
)

# s(x) = x/4 + 1/4 sends [0,1] onto [1/4,1/2]; s twice sends it onto [5/16,3/8]
SHRINK = Interval(rational("1/4"), rational("1/2"))
SHRINK2 = Interval(rational("5/16"), rational("3/8"))


def alpha1() -> PLMap:
    return PLMap([(0, 0), ("1/4", "1/2"), ("1/2", "3/4"), (1, 1)])


def alpha2() -> PLMap:
    return PLMap(
        [(0, 0), ("1/4", "1/4"), ("5/16", "3/8"), ("3/8", "7/16"), ("1/2", "1/2"), (1, 1)]
    )


def scale_into(f: PLMap, A: Interval) -> PLMap:
    """Conjugate ``f`` by the affine map [0,1] -> closure(A); identity off A."""
    a, w = A.left, A.length
    pts = [(ZERO, ZERO)]
    if a > ZERO:
        pts.append((a, a))
    pts.extend((a + w * x, a + w * y) for x, y in f.breakpoints[1:-1])
    if A.right < ONE:
        pts.append((A.right, A.right))
    pts.append((ONE, ONE))
    return PLMap(_normalize(pts), _trusted=True)


def bump(A: Interval) -> PLMap:
    """One-orbital map with orbital exactly ``A``, moving points right."""
    return scale_into(alpha1(), A)


def beta(k: int) -> PLMap:
    return conjugate(alpha2(), power(alpha1(), k))


def w_chain(n: int) -> list[PLMap]:
    """alpha_1, ..., alpha_n with alpha_i = alpha_{i-1} rescaled into (1/4, 1/2)."""
    if n < 1:
        raise PLError("W_n needs n >= 1")
    gens = [alpha1()]
    for _ in range(n - 1):
        gens.append(scale_into(gens[-1], SHRINK))
    return gens


def w_generators(n: int) -> GroupSpec:
    return GroupSpec(w_chain(n), label=f"W_{n}", names=[f"a{i}" for i in range(1, n + 1)])


@dataclass(frozen=True)
class TruncationParams:
    """Finite stand-in for G_n: ``level`` n and conjugate range -width..width."""

    level: int
    width: int = 1

    def __post_init__(self):
        if self.level < 0 or self.width < 0:
            raise PLError("level and width must be non-negative")


def _nested_stack(level: int) -> list[PLMap]:
    # S(1) = {alpha2}; S(n) = {h rescaled twice : h in S(n-1)} + {alpha2}
    if level == 0:
        return []
    stack = [alpha2()]
    for _ in range(level - 1):
        stack = [alpha2()] + [scale_into(h, SHRINK2) for h in stack]
    return stack


def gn_generators(p: TruncationParams) -> GroupSpec:
    """Generators of a finite truncation of G_n inside Thompson's group F.

    Each member of the nested stack is conjugated by alpha1^k, |k| <= width;
    the stack lives in [1/4, 1/2), a fundamental domain of alpha1, so
    distinct k give disjoint supports.
    """
    stack = _nested_stack(p.level)
    a1 = alpha1()
    gens, names = [], []
    for k in range(-p.width, p.width + 1):
        c = power(a1, k)
        for depth, h in enumerate(stack, start=1):
            gens.append(conjugate(h, c))
            names.append(f"g{depth}_{k}" if k >= 0 else f"g{depth}_m{-k}")
    return GroupSpec(gens, label=f"G_{p.level}[width={p.width}]", names=names)


def _dyadic(q) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _power_of_two(q) -> bool:
    return q > 0 and _dyadic(q) and (q.numerator & (q.numerator - 1)) == 0


def f_membership(f: PLMap) -> bool:
    """Thompson's F: power-of-two slopes and dyadic breakpoints."""
    return all(_power_of_two(s) for s in f.slopes) and all(
        _dyadic(x) and _dyadic(y) for x, y in f.breakpoints
    )


def trivial_group() -> GroupSpec:
    return GroupSpec([identity()], label="1")
