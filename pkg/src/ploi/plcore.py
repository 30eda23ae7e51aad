"""Exact piecewise-linear homeomorphisms of the unit interval.

Maps act on the right: ``compose(f, g)`` is ``x -> g(f(x))`` and the
conjugate ``f^h`` is ``h^-1 f h``.  Coordinates are ``gmpy2.mpq`` values,
so every operation here is exact.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2

Rational = gmpy2.mpq

ZERO = Rational(0)
ONE = Rational(1)
_MPQ = type(ZERO)


class PLError(ValueError):
    """Invalid PL data or an operation outside its domain."""


def rational(value) -> Rational:
    """Coerce ints, strings like ``"3/8"``, Fractions and mpq to ``Rational``."""
    if isinstance(value, str):
        text = value.strip()
        try:
            return Rational(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise PLError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise PLError("floats are not accepted; pass an exact fraction")
    try:
        return Rational(value)
    except TypeError as exc:
        raise PLError(f"not a rational: {value!r}") from exc


def fmt(q) -> str:
    """Lowest-terms ``p/q`` text (integers print bare, e.g. ``0``)."""
    return str(Rational(q))


@dataclass(frozen=True, slots=True, order=True)
class Interval:
    """The open interval ``(left, right)`` inside ``[0, 1]``."""

    left: Rational
    right: Rational

    def __post_init__(self):
        object.__setattr__(self, "left", rational(self.left))
        object.__setattr__(self, "right", rational(self.right))
        if not (ZERO <= self.left < self.right <= ONE):
            raise PLError(f"bad interval ({self.left}, {self.right})")

    @classmethod
    def parse(cls, text: str) -> "Interval":
        # "a:b" or "(a,b)"
        t = text.strip().strip("()[]")
        sep = ":" if ":" in t else ","
        a, b = t.split(sep)
        return cls(rational(a), rational(b))

    @property
    def ends(self) -> tuple[Rational, Rational]:
        return (self.left, self.right)

    @property
    def length(self) -> Rational:
        return self.right - self.left

    def contains_point(self, x) -> bool:
        return self.left < x < self.right

    def contains(self, other: "Interval") -> bool:
        """Non-strict containment of open intervals."""
        return self.left <= other.left and other.right <= self.right

    def contains_closure(self, other: "Interval") -> bool:
        return self.left < other.left and other.right < self.right

    def meets(self, other: "Interval") -> bool:
        return self.left < other.right and other.left < self.right

    def to_json(self) -> list[str]:
        return [fmt(self.left), fmt(self.right)]

    def __str__(self) -> str:
        return f"({fmt(self.left)}, {fmt(self.right)})"


def _collinear(p, q, r) -> bool:
    return (q[1] - p[1]) * (r[0] - q[0]) == (r[1] - q[1]) * (q[0] - p[0])


def _normalize(points: Sequence[tuple]) -> tuple:
    out = [points[0]]
    for k in range(1, len(points) - 1):
        if not _collinear(out[-1], points[k], points[k + 1]):
            out.append(points[k])
    out.append(points[-1])
    return tuple(out)


class PLMap:
    """A PL homeomorphism of [0, 1] fixing both ends.

    Stored as a normalized tuple of breakpoints, so ``==`` and ``hash`` are
    semantic.  Instances are immutable.
    """

    __slots__ = ("breakpoints", "xs", "ys", "slopes", "_hash")

    def __init__(self, breakpoints: Iterable, *, _trusted: bool = False):
        if _trusted:
            pts = tuple(breakpoints)
        else:
            pts = tuple((rational(x), rational(y)) for x, y in breakpoints)
            if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
                raise PLError("breakpoints must run from (0,0) to (1,1)")
            for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
                if not (x0 < x1 and y0 < y1):
                    raise PLError("breakpoints must be strictly increasing in x and y")
            pts = _normalize(pts)
        object.__setattr__(self, "breakpoints", pts)
        xs = tuple(p[0] for p in pts)
        ys = tuple(p[1] for p in pts)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(
            self,
            "slopes",
            tuple((ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]) for k in range(len(xs) - 1)),
        )
        object.__setattr__(self, "_hash", hash(pts))

    def __setattr__(self, name, value):
        raise AttributeError("PLMap is immutable")

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._hash == other._hash and self.breakpoints == other.breakpoints

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"({fmt(x)}, {fmt(y)})" for x, y in self.breakpoints)
        return f"PLMap([{inner}])"

    def __call__(self, x):
        return eval_at(self, x)

    @property
    def is_identity(self) -> bool:
        return len(self.breakpoints) == 2

    def key(self) -> tuple:
        """Canonical sort key: breakpoint count first, then lexicographic."""
        return (len(self.breakpoints), self.breakpoints)

    def interior_breakpoints(self) -> tuple:
        return self.xs[1:-1]

    def to_json(self) -> dict:
        return {"breakpoints": [[fmt(x), fmt(y)] for x, y in self.breakpoints]}

    @classmethod
    def from_json(cls, data) -> "PLMap":
        if isinstance(data, dict):
            data = data["breakpoints"]
        return cls([(rational(x), rational(y)) for x, y in data])


_IDENTITY = PLMap([(ZERO, ZERO), (ONE, ONE)], _trusted=True)


def identity() -> PLMap:
    return _IDENTITY


def eval_at(f: PLMap, x) -> Rational:
    if not isinstance(x, _MPQ):
        x = rational(x)
    if not (ZERO <= x <= ONE):
        raise PLError(f"{x} is outside [0, 1]")
    xs = f.xs
    k = bisect_right(xs, x) - 1
    if k == len(xs) - 1:
        return f.ys[k]
    return f.ys[k] + (x - xs[k]) * f.slopes[k]


def eval_inverse(f: PLMap, y) -> Rational:
    ys = f.ys
    k = bisect_right(ys, y) - 1
    if k == len(ys) - 1:
        return f.xs[k]
    return f.xs[k] + (y - ys[k]) / f.slopes[k]


def compose(f: PLMap, g: PLMap) -> PLMap:
    """The product ``fg``: apply ``f`` first, then ``g``."""
    if f.is_identity:
        return g
    if g.is_identity:
        return f
    fx, fy, fs = f.xs, f.ys, f.slopes
    gx, gy, gs = g.xs, g.ys, g.slopes
    # merge walk over the middle coordinate: f's outputs against g's inputs
    pts = [(ZERO, ZERO)]
    i = j = 1
    n, m = len(fx), len(gx)
    while i < n and j < m:
        y1, y2 = fy[i], gx[j]
        if y1 == y2:
            pts.append((fx[i], gy[j]))
            i += 1
            j += 1
        elif y1 < y2:
            pts.append((fx[i], gy[j - 1] + (y1 - gx[j - 1]) * gs[j - 1]))
            i += 1
        else:
            pts.append((fx[i - 1] + (y2 - fy[i - 1]) / fs[i - 1], gy[j]))
            j += 1
    return PLMap(_normalize(pts), _trusted=True)


def inverse(f: PLMap) -> PLMap:
    if f.is_identity:
        return f
    return PLMap(tuple((y, x) for x, y in f.breakpoints), _trusted=True)


def compose_all(maps: Iterable[PLMap]) -> PLMap:
    out = identity()
    for m in maps:
        out = compose(out, m)
    return out


def power(f: PLMap, k: int) -> PLMap:
    if k < 0:
        f, k = inverse(f), -k
    result = identity()
    base = f
    while k:
        if k & 1:
            result = compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def conjugate(f: PLMap, h: PLMap) -> PLMap:
    """``f^h = h^-1 f h``."""
    return compose(compose(inverse(h), f), h)


def commutator(f: PLMap, g: PLMap) -> PLMap:
    """``[f, g] = f^-1 g^-1 f g``."""
    return compose(compose(inverse(f), inverse(g)), compose(f, g))


def commutes(f: PLMap, g: PLMap) -> bool:
    return compose(f, g) == compose(g, f)


def support(f: PLMap) -> list[Interval]:
    """Orbitals of ``f``: the maximal open intervals of moved points, left to right.

    On each affine piece ``y = a x + b`` the fixed set is empty, a single
    point, or the whole piece; the support is the complement of their union.
    """
    xs, ys = f.xs, f.ys
    out: list[Interval] = []
    start = None  # left end of the orbital currently open
    for k in range(len(xs) - 1):
        x0, x1, y0, y1 = xs[k], xs[k + 1], ys[k], ys[k + 1]
        d0, d1 = y0 - x0, y1 - x1
        if d0 == 0 and d1 == 0:
            continue  # piece of the identity; any open orbital closed at x0
        if d0 == 0:
            start = x0
        if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
            # interior crossing of the diagonal
            t = x0 + d0 * (x1 - x0) / (d0 - d1)
            out.append(Interval(start, t))
            start = t
        if d1 == 0:
            out.append(Interval(start, x1))
            start = None
    return out


def moves_right(f: PLMap, orbital: Interval) -> bool:
    mid = (orbital.left + orbital.right) / 2
    return eval_at(f, mid) > mid


def restrict(f: PLMap, orbital: Interval) -> PLMap:
    """``f`` on ``orbital`` and the identity elsewhere; ``orbital`` must be f-invariant."""
    a, b = orbital.left, orbital.right
    pts = [(ZERO, ZERO)]
    if a > ZERO:
        pts.append((a, a))
    for x, y in f.breakpoints:
        if a < x < b:
            pts.append((x, y))
    if b < ONE:
        pts.append((b, b))
    pts.append((ONE, ONE))
    return PLMap(_normalize(pts), _trusted=True)


def one_bump_factors(f: PLMap) -> list[PLMap]:
    """One single-orbital factor per orbital of ``f``; they commute and multiply to ``f``."""
    return [restrict(f, A) for A in support(f)]


def _right_derivative(f: PLMap, x) -> Rational:
    k = bisect_right(f.xs, x) - 1
    if k >= len(f.slopes):
        raise PLError("no right derivative at 1")
    return f.slopes[k]


def _left_derivative(f: PLMap, x) -> Rational:
    k = bisect_right(f.xs, x) - 1
    if f.xs[k] == x:
        k -= 1
    if k < 0:
        raise PLError("no left derivative at 0")
    return f.slopes[k]


def end_slopes(f: PLMap, A: Interval) -> tuple[Rational, Rational]:
    """(right derivative at A.left, left derivative at A.right)."""
    if eval_at(f, A.left) != A.left or eval_at(f, A.right) != A.right:
        raise PLError(f"map does not fix the ends of {A}")
    return (_right_derivative(f, A.left), _left_derivative(f, A.right))


def breakpoint_images_ok(f: PLMap, g: PLMap) -> bool:
    """Every breakpoint b of fg is a breakpoint of f, or b·f is one of g."""
    fb = set(f.interior_breakpoints())
    gb = set(g.interior_breakpoints())
    return all(b in fb or eval_at(f, b) in gb for b in compose(f, g).interior_breakpoints())
