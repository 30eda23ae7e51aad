"""Structure expressions built from 1 by wreathing with Z and bounded sums.

``one_bump_decompose`` turns a generating set of one-orbital maps into such an
expression by peeling off, for each outermost orbital, a top generator y and
conjugating everything else on that orbital into a fundamental domain of y.
``classification_report`` wraps it with the obstruction checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .orbitals import (
    BalanceVerdict,
    GroupSpec,
    balance_check,
    find_transition_chains,
    union_components,
)
from .plcore import (
    Interval,
    PLError,
    PLMap,
    conjugate,
    eval_at,
    eval_inverse,
    inverse,
    moves_right,
    one_bump_factors,
    power,
    support,
)
from .slopes import LatticeError, c_form, controller_combination
from .towers import depth_lower_bound
from .words import DEFAULT_CAP, CapExceeded, ball, derived_length_bounds

WINDOW = (-2, 2)


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Trivial:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class WreathZ:
    child: "StructureExpr"

    def __str__(self):
        return f"Wr[{self.child}]"


@dataclass(frozen=True)
class BoundedSum:
    children: tuple["StructureExpr", ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("a bounded sum needs at least one summand")

    def __str__(self):
        return "Sum[" + ", ".join(map(str, self.children)) + "]"


StructureExpr = Union[Trivial, WreathZ, BoundedSum]


def normalize(e: StructureExpr) -> StructureExpr:
    """Flatten nested sums, drop trivial summands, sort summands, unwrap singletons."""
    if isinstance(e, Trivial):
        return e
    if isinstance(e, WreathZ):
        return WreathZ(normalize(e.child))
    flat: list[StructureExpr] = []
    for c in map(normalize, e.children):
        if isinstance(c, BoundedSum):
            flat.extend(c.children)
        elif not isinstance(c, Trivial):
            flat.append(c)
    if not flat:
        return Trivial()
    if len(flat) == 1:
        return flat[0]
    return BoundedSum(tuple(sorted(flat, key=lambda c: (-expr_derived_length(c), str(c)))))


def expr_derived_length(e: StructureExpr) -> int:
    if isinstance(e, Trivial):
        return 0
    if isinstance(e, WreathZ):
        return expr_derived_length(e.child) + 1
    return max(expr_derived_length(c) for c in e.children)


def embedding_target(e: StructureExpr) -> int:
    """n such that the expression's group embeds in G_n."""
    return expr_derived_length(e)


def parse_expr(text: str) -> StructureExpr:
    """Inverse of ``str`` on expressions."""
    pos = 0

    def node():
        nonlocal pos
        if text.startswith("1", pos):
            pos += 1
            return Trivial()
        for head in ("Wr[", "Sum["):
            if text.startswith(head, pos):
                pos += len(head)
                kids = [node()]
                while text.startswith(", ", pos):
                    pos += 2
                    kids.append(node())
                if not text.startswith("]", pos):
                    raise ValueError(f"expected ']' at {pos} in {text!r}")
                pos += 1
                if head == "Wr[":
                    if len(kids) != 1:
                        raise ValueError("Wr takes one argument")
                    return WreathZ(kids[0])
                return BoundedSum(tuple(kids))
        raise ValueError(f"unexpected input at {pos} in {text!r}")

    e = node()
    if pos != len(text):
        raise ValueError(f"trailing input in {text!r}")
    return e


# -------------------------------------------------------------- decomposition


class HypothesisViolation(PLError):
    """The generating set does not meet the one-bump hypotheses."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class WreathNode:
    """One wreath factor: top generator y on a group orbital, members moved into [a, a y)."""

    orbital: Interval
    top: PLMap
    top_name: str
    domain: Interval
    exponents: list[tuple[str, int]]
    children: list["WreathNode"] = field(default_factory=list)
    window: tuple[int, int] = WINDOW

    def expr(self) -> StructureExpr:
        if not self.children:
            return WreathZ(Trivial())
        return WreathZ(normalize(BoundedSum(tuple(c.expr() for c in self.children))))

    def to_json(self) -> dict:
        return {
            "orbital": self.orbital.to_json(),
            "top": self.top_name,
            "top_map": self.top.to_json(),
            "domain": self.domain.to_json(),
            "exponents": [{"member": n, "exponent": k} for n, k in self.exponents],
            "window": list(self.window),
            "children": [c.to_json() for c in self.children],
        }


@dataclass
class DecompositionCert:
    expr: StructureExpr
    roots: list[WreathNode]
    radius: int
    repairs: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "expr": str(self.expr),
            "derived_length": expr_derived_length(self.expr),
            "radius": self.radius,
            "orbital_tree": [r.to_json() for r in self.roots],
            "repairs": self.repairs,
        }


Named = tuple[str, PLMap]


def _only_orbital(name: str, f: PLMap) -> Interval:
    s = support(f)
    if len(s) != 1:
        raise HypothesisViolation("multi-orbital", f"generator {name} has {len(s)} orbitals")
    return s[0]


def _orient(items: list[Named], A: Interval) -> list[Named]:
    out = []
    for n, f in items:
        if not moves_right(f, A):
            f, n = inverse(f), f"{n}^-1"
        out.append((n, f))
    return out


def _merge_tops(A: Interval, tops: list[Named], repair: bool, repairs: list[str]) -> tuple[Named, list[Named]]:
    """A single top generator on A, plus leftover pieces strictly inside A."""
    if len(tops) == 1:
        return tops[0], []
    if not repair:
        names = ", ".join(n for n, _ in tops)
        raise HypothesisViolation("shared-orbital", f"generators {names} share the orbital {A}")
    c = controller_combination([f for _, f in tops], A)
    if not moves_right(c, A):
        c = inverse(c)
    cname = "ctrl(" + ",".join(n for n, _ in tops) + ")"
    rest: list[Named] = []
    for n, f in tops:
        residue = c_form(f, c, A).residue
        for i, piece in enumerate(one_bump_factors(residue)):
            rest.append((f"res({n})#{i}", piece))
    repairs.append(f"merged {len(tops)} generators on {A} into a controller with {len(rest)} residue pieces")
    return (cname, c), rest


def _into_domain(name: str, f: PLMap, y: PLMap, A: Interval, D: Interval, max_iter: int) -> int:
    """k with the orbital of f moved by y^k into D; raises if it would cross a."""
    B = _only_orbital(name, f)
    if B.left == A.left or B.right == A.right:
        raise HypothesisViolation("imbalance", f"{name} realizes an end of the orbital {A}")
    k, x = 0, B.left
    for _ in range(max_iter):
        if x < D.left:
            x, k = eval_at(y, x), k + 1
        elif x >= D.right:
            x, k = eval_inverse(y, x), k - 1
        else:
            break
    else:
        raise HypothesisViolation("domain", f"could not move {name} into {D} within {max_iter} steps")
    if power_eval(y, B.right, k) > D.right:
        raise HypothesisViolation(
            "crosses-left-end",
            f"conjugating {name} by the top generator to the power {k} crosses the left end {D.left}",
        )
    return k


def power_eval(y: PLMap, x, k: int):
    step = eval_at if k >= 0 else eval_inverse
    for _ in range(abs(k)):
        x = step(y, x)
    return x


def _verify_wreath(y: PLMap, hull: Interval, window=WINDOW) -> bool:
    images = [Interval(power_eval(y, hull.left, k), power_eval(y, hull.right, k)) for k in range(window[0], window[1] + 1)]
    return all(a.right <= b.left for a, b in zip(images, images[1:]))


def _decompose(items: list[Named], repair: bool, repairs: list[str], max_iter: int, depth: int = 0) -> list[WreathNode]:
    if not items:
        return []
    if depth > 64:
        raise HypothesisViolation("depth", "decomposition nested more than 64 levels")
    # dedupe maps
    seen, uniq = set(), []
    for n, f in items:
        if f not in seen and not f.is_identity:
            seen.add(f)
            uniq.append((n, f))
    orbit_of = {n: _only_orbital(n, f) for n, f in uniq}
    comps = union_components(orbit_of.values())
    nodes = []
    for A in comps:
        members = [(n, f) for n, f in uniq if A.contains(orbit_of[n])]
        for n, _ in members:
            B = orbit_of[n]
            if B != A and (B.left == A.left or B.right == A.right):
                raise HypothesisViolation("imbalance", f"{n} realizes exactly one end of the orbital {A}")
        tops = _orient([m for m in members if orbit_of[m[0]] == A], A)
        if not tops:
            # the component is a union of overlapping orbitals: a transition chain
            raise HypothesisViolation("transition-chain", f"no generator has the group orbital {A}")
        (yname, y), extra = _merge_tops(A, tops, repair, repairs)
        inner = [m for m in members if orbit_of[m[0]] != A] + extra
        if inner:
            orbs = [_only_orbital(n, f) for n, f in inner]
            # minimal depth: not strictly inside another member's orbital; leftmost wins
            top_level = [B for B in orbs if not any(C != B and C.contains(B) for C in orbs)]
            a = min(B.left for B in top_level)
        else:
            a = A.left + A.length / 2
        D = Interval(a, eval_at(y, a))
        exps, moved = [], []
        for n, f in inner:
            k = _into_domain(n, f, y, A, D, max_iter)
            exps.append((n, k))
            moved.append((n if k == 0 else f"{n}^({yname}^{k})", conjugate(f, power(y, k))))
        children = _decompose(moved, repair, repairs, max_iter, depth + 1)
        if moved:
            orbs = [_only_orbital(n, f) for n, f in moved]
            hull = Interval(min(B.left for B in orbs), max(B.right for B in orbs))
            if not _verify_wreath(y, hull):
                raise HypothesisViolation("wreath", f"conjugates of {hull} under {yname} overlap")
        nodes.append(WreathNode(A, y, yname, D, exps, children))
    return nodes


def _check_ball(G: GroupSpec, radius: int, cap: int):
    chains = find_transition_chains(ball(G, radius, cap=cap).elements)
    if chains:
        s, t = chains[0]
        raise HypothesisViolation("transition-chain", f"orbitals {s.orbital} and {t.orbital} overlap without nesting")


def one_bump_decompose(
    G: GroupSpec,
    radius: int,
    *,
    repair: bool = False,
    check_balance: bool = True,
    cap: int = DEFAULT_CAP,
    max_iter: int = 4096,
) -> DecompositionCert:
    """Wreath/sum decomposition of a group generated by one-orbital maps.

    Hypotheses are checked on the radius ball (no transition chains, balance)
    and on the generators (one orbital each, no shared orbitals after moving
    into fundamental domains).  With ``repair`` generators sharing an orbital
    are replaced by a controller and the one-orbital factors of their c-form
    residues, which generates a group of the same derived length.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    items = list(zip(G.names, G.generators))
    for n, f in items:
        _only_orbital(n, f)
    _check_ball(G, radius, cap)
    if check_balance:
        v = balance_check(G, radius, cap=cap)
        if not v.balanced:
            raise HypothesisViolation("imbalance", f"imbalance witness on {v.witness[1]}")
    repairs: list[str] = []
    roots = _decompose(items, repair, repairs, max_iter)
    if not roots:
        expr: StructureExpr = Trivial()
    else:
        expr = normalize(BoundedSum(tuple(r.expr() for r in roots)))
    return DecompositionCert(expr, roots, radius, repairs)


# ----------------------------------------------------------------- reporting


@dataclass
class Obstruction:
    kind: str
    detail: str
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail, "evidence": self.evidence}


@dataclass
class ClassificationReport:
    label: str
    radius: int
    expr: Optional[StructureExpr] = None
    cert: Optional[DecompositionCert] = None
    obstruction: Optional[Obstruction] = None
    tower_height: Optional[int] = None
    commutator_bound: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def derived_length(self) -> Optional[int]:
        return None if self.expr is None else expr_derived_length(self.expr)

    @property
    def target(self) -> Optional[int]:
        return None if self.expr is None else embedding_target(self.expr)

    @property
    def text(self) -> str:
        if self.expr is None:
            return f"obstruction ({self.obstruction.kind}): {self.obstruction.detail}"
        return f"{self.expr}, derived length {self.derived_length}, embeds in G_{self.target}"

    def to_json(self) -> dict:
        out = {
            "group": self.label,
            "radius": self.radius,
            "expr": None if self.expr is None else str(self.expr),
            "derived_length": self.derived_length,
            "embedding_target": self.target,
            "tower_height": self.tower_height,
            "commutator_lower_bound": self.commutator_bound,
            "notes": self.notes,
        }
        if self.cert is not None:
            out["certificate"] = self.cert.to_json()
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_json()
        return out


def _split_generators(G: GroupSpec) -> GroupSpec:
    # one-orbital factors of the generators: they lie in the split group and
    # generate a group containing G, so the derived length is unchanged
    gens, names = [], []
    for n, g in zip(G.names, G.generators):
        factors = one_bump_factors(g)
        if len(factors) == 1:
            gens.append(g)
            names.append(n)
        else:
            for i, f in enumerate(factors):
                gens.append(f)
                names.append(f"{n}#{i}")
    return GroupSpec(gens, G.label, names)


def classification_report(
    G: GroupSpec,
    radius: int,
    *,
    cap: int = DEFAULT_CAP,
    commutators: bool = False,
) -> ClassificationReport:
    """Expression, derived length and embedding target, or the obstruction found.

    Tower height over the radius ball is always attached; the iterated
    commutator bound is attached when ``commutators`` is set.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    rep = ClassificationReport(G.label, radius)
    if len(G) == 0:
        rep.expr = Trivial()
        rep.tower_height = 0
        rep.commutator_bound = 0
        return rep
    try:
        B = ball(G, radius, cap=cap)
    except CapExceeded as exc:
        rep.obstruction = Obstruction("growth", str(exc), {"cap": cap})
        return rep
    rep.tower_height = depth_lower_bound(G, radius, cap=cap).height
    if commutators:
        rep.commutator_bound = derived_length_bounds(G, radius, cap=cap).lower_bound

    chains = find_transition_chains(B.elements)
    if chains:
        s, t = chains[0]
        heights = []
        for r in range(1, radius + 1):
            heights.append(depth_lower_bound(G, r, cap=cap).height)
        rep.obstruction = Obstruction(
            "transition-chain",
            f"orbitals {s.orbital} and {t.orbital} overlap without nesting; the group is not solvable",
            {
                "pair": [s.to_json(), t.to_json()],
                "count": len(chains),
                "tower_heights_by_radius": heights,
            },
        )
        return rep
    v: BalanceVerdict = balance_check(G, radius, cap=cap)
    if not v.balanced:
        rep.obstruction = Obstruction("imbalance", v.note, v.to_json())
        return rep

    S = _split_generators(G)
    if len(S) != len(G) or S.generators != G.generators:
        rep.notes.append("generators replaced by their one-orbital factors")
    try:
        cert = one_bump_decompose(S, radius, repair=True, check_balance=False, cap=cap)
    except (HypothesisViolation, LatticeError) as exc:
        kind = exc.kind if isinstance(exc, HypothesisViolation) else "slope-lattice"
        rep.obstruction = Obstruction(kind, str(exc))
        return rep
    rep.cert = cert
    rep.expr = cert.expr
    rep.notes.extend(cert.repairs)
    return rep
