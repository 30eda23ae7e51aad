"""End-slope homomorphism, its image lattice, controllers and c-forms.

Slopes stay multiplicative: a pair (left, right) of positive rationals is
encoded by its vector of prime exponents, and the image of the homomorphism
is the integer lattice those vectors span.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .orbitals import End, GroupSpec, realizes_end
from .plcore import (
    ONE,
    Interval,
    PLError,
    PLMap,
    Rational,
    compose,
    end_slopes,
    eval_at,
    fmt,
    identity,
    inverse,
    power,
    support,
)
from .words import DEFAULT_CAP, ball


class LatticeError(PLError):
    pass


@dataclass(frozen=True)
class SlopePair:
    left: Rational
    right: Rational

    def __mul__(self, other: "SlopePair") -> "SlopePair":
        return SlopePair(self.left * other.left, self.right * other.right)

    def inverse(self) -> "SlopePair":
        return SlopePair(1 / self.left, 1 / self.right)

    def __pow__(self, k: int) -> "SlopePair":
        return SlopePair(self.left ** k, self.right ** k)

    @property
    def trivial(self) -> bool:
        return self.left == ONE and self.right == ONE

    def to_json(self) -> list[str]:
        return [fmt(self.left), fmt(self.right)]

    def __str__(self):
        return f"({fmt(self.left)}, {fmt(self.right)})"


def phi(h: PLMap, A: Interval) -> SlopePair:
    return SlopePair(*end_slopes(h, A))


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_exponents(q: Rational) -> dict[int, int]:
    num = _factor(int(q.numerator))
    for p, e in _factor(int(q.denominator)).items():
        num[p] = num.get(p, 0) - e
    return {p: e for p, e in num.items() if e}


def exponent_vectors(pairs: Sequence[SlopePair]) -> tuple[list[int], list[list[int]]]:
    """Primes involved, and one row per pair: left exponents then right exponents."""
    facs = [(prime_exponents(s.left), prime_exponents(s.right)) for s in pairs]
    primes = sorted({p for l, r in facs for p in (*l, *r)})
    rows = [[l.get(p, 0) for p in primes] + [r.get(p, 0) for p in primes] for l, r in facs]
    return primes, rows


def echelon(rows: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon form (Hermite-style): spans the same lattice."""
    basis: list[list[int]] = []
    work = [list(r) for r in rows if any(r)]
    col = 0
    while work and col < ncols:
        piv = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not piv:
            col += 1
            continue
        # Euclid on the column until a single row is left holding it
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            nxt = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (nxt if r[col] != 0 else rest).append(r)
            piv = nxt
        p = piv[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        work = [r for r in rest if any(r)]
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(basis):
        c = next(k for k, a in enumerate(row) if a)
        for j in range(i):
            q = basis[j][c] // row[c]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], row)]
    return basis


class LatticeKind(str, Enum):
    TRIVIAL = "Trivial"
    CYCLIC = "Cyclic"
    HIGHER_RANK = "HigherRank"


@dataclass(frozen=True)
class LatticeVerdict:
    rank: int
    kind: LatticeKind
    generator: Optional[SlopePair]
    imbalanced: bool
    primes: tuple[int, ...] = ()
    basis: tuple[tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "kind": self.kind.value,
            "generator": self.generator.to_json() if self.generator else None,
            "imbalanced": self.imbalanced,
            "primes": list(self.primes),
            "basis": [list(r) for r in self.basis],
        }


def _pair_from_row(row: Sequence[int], primes: Sequence[int]) -> SlopePair:
    k = len(primes)
    left = right = Rational(1)
    for p, e in zip(primes, row[:k]):
        left *= Rational(p) ** e
    for p, e in zip(primes, row[k:]):
        right *= Rational(p) ** e
    return SlopePair(left, right)


def _one_sided(rows: list[list[int]], k: int) -> bool:
    # echelon with one block first: rows pivoting in the other block have a zero first block
    left_first = echelon(rows, 2 * k)
    if any(not any(r[:k]) for r in left_first):
        return True
    swapped = [r[k:] + r[:k] for r in rows]
    return any(not any(r[:k]) for r in echelon(swapped, 2 * k))


def lattice_of(pairs: Sequence[SlopePair]) -> LatticeVerdict:
    primes, rows = exponent_vectors(pairs)
    k = len(primes)
    basis = echelon(rows, 2 * k)
    rank = len(basis)
    if rank == 0:
        return LatticeVerdict(0, LatticeKind.TRIVIAL, None, False, tuple(primes))
    imb = _one_sided(rows, k)
    gen = _pair_from_row(basis[0], primes) if rank == 1 else None
    kind = LatticeKind.CYCLIC if rank == 1 else LatticeKind.HIGHER_RANK
    return LatticeVerdict(rank, kind, gen, imb, tuple(primes), tuple(map(tuple, basis)))


def _check_invariant(G: GroupSpec, A: Interval):
    for g in G.generators:
        if eval_at(g, A.left) != A.left or eval_at(g, A.right) != A.right:
            raise LatticeError(f"{A} is not invariant under the generators")


def image_lattice(G: GroupSpec, A: Interval) -> LatticeVerdict:
    """Rank and shape of the end-slope image on A, by integer row reduction.

    ``imbalanced`` is set when the lattice holds a vector that is trivial in
    exactly one of the two slope components.
    """
    _check_invariant(G, A)
    return lattice_of([phi(g, A) for g in G.generators])


def find_controller(G: GroupSpec, A: Interval, radius: int, *, cap: int = DEFAULT_CAP) -> PLMap:
    """First ball element (shortlex) whose slope pair generates the image lattice."""
    v = image_lattice(G, A)
    if v.kind is not LatticeKind.CYCLIC:
        raise LatticeError(f"slope image on {A} is {v.kind.value}, not cyclic")
    if v.imbalanced:
        raise LatticeError(f"{A} is imbalanced: the lattice generator is trivial at one end")
    targets = {v.generator, v.generator.inverse()}
    for h in ball(G, radius, cap=cap).elements:
        if eval_at(h, A.left) == A.left and phi(h, A) in targets:
            return h
    raise LatticeError(f"no element of the radius-{radius} ball maps to the lattice generator")


@dataclass(frozen=True)
class CForm:
    exponent: int
    residue: PLMap

    def to_json(self) -> dict:
        return {"exponent": self.exponent, "residue": self.residue.to_json()}


def _exponent_of(target: SlopePair, base: SlopePair) -> int:
    primes, rows = exponent_vectors([target, base])
    t, b = rows
    if not any(b):
        if any(t):
            raise LatticeError("controller has trivial slopes")
        return 0
    k = None
    for x, y in zip(t, b):
        if y == 0:
            if x != 0:
                raise LatticeError("slope pair is not a power of the controller's")
            continue
        if x % y:
            raise LatticeError("slope pair is not a power of the controller's")
        if k is None:
            k = x // y
        elif k != x // y:
            raise LatticeError("slope pair is not a power of the controller's")
    return k


def c_form(h: PLMap, c: PLMap, A: Interval) -> CForm:
    """Write h = c^k * residue with the residue the identity near both ends of A."""
    k = _exponent_of(phi(h, A), phi(c, A))
    residue = compose(power(c, -k), h)
    if realizes_end(residue, A, End.LEFT) or realizes_end(residue, A, End.RIGHT):
        raise LatticeError("residue still realizes an end of the orbital")
    return CForm(k, residue)


def is_consistent_controller(c: PLMap, A: Interval) -> bool:
    s = phi(c, A)
    return (s.left > 1 and s.right < 1) or (s.left < 1 and s.right > 1)


def controller_realizes(c: PLMap, A: Interval) -> bool:
    return A in support(c)


def controller_combination(pieces: Sequence[PLMap], A: Interval) -> PLMap:
    """A product of powers of ``pieces`` whose slope pair generates their image lattice.

    Uses the extended Euclidean algorithm on the left-end exponents, which
    determine the whole pair when the lattice is cyclic and balanced.
    """
    v = lattice_of([phi(p, A) for p in pieces])
    if v.kind is LatticeKind.TRIVIAL:
        return identity()
    if v.kind is not LatticeKind.CYCLIC or v.imbalanced:
        raise LatticeError(f"slope image on {A} is not balanced cyclic")
    target = v.generator
    cur, cur_pair = identity(), SlopePair(Rational(1), Rational(1))
    for p in pieces:
        s = phi(p, A)
        # both cur_pair and s are powers of target: find exponents and combine
        a, b = _exponent_of(cur_pair, target), _exponent_of(s, target)
        g, x, y = _egcd(a, b)
        cur = compose(power(cur, x), power(p, y))
        cur_pair = target ** g
    if phi(cur, A) == target.inverse():
        cur = inverse(cur)
    return cur


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
