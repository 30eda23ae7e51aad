"""The ``ploi`` command line."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from .classify import classification_report
from .construct import (
    TruncationParams,
    alpha1,
    alpha2,
    beta,
    bump,
    gn_generators,
    w_generators,
)
from .orbitals import GroupSpec, balance_check, find_transition_chains, group_orbitals
from .plcore import Interval, PLError, PLMap, compose_all, eval_at, fmt, identity, rational, support
from .slopes import LatticeError, find_controller, image_lattice, phi
from .split import SearchBudgetExhausted, TransitionChainObstruction, split_stable_search
from .towers import depth_lower_bound, is_exemplary, max_tower
from .words import DEFAULT_CAP, CapExceeded, ball

OK, OBSTRUCTION, ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ parsing


def parse_map_list(token: str) -> list[tuple[str, PLMap]]:
    """A token naming one map, or a family (w:n, g:n:m) naming several."""
    t = token.strip()
    if t.startswith("["):
        try:
            pts = json.loads(t)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad JSON map literal: {exc}") from None
        return [(t, PLMap.from_json(pts))]
    head, _, rest = t.partition(":")
    if head == "a1" and not rest:
        return [("a1", alpha1())]
    if head == "a2" and not rest:
        return [("a2", alpha2())]
    if head == "id" and not rest:
        return [("id", identity())]
    if head == "beta":
        return [(t, beta(_int(rest, t)))]
    if head == "bump":
        return [(t, bump(_interval(rest)))]
    if head == "w":
        G = w_generators(_int(rest, t))
        return list(zip(G.names, G.generators))
    if head == "g":
        G = _gn(rest, t)
        return list(zip(G.names, G.generators))
    raise UsageError(f"unknown map spec {token!r}")


def parse_map(token: str) -> PLMap:
    maps = parse_map_list(token)
    if len(maps) != 1:
        raise UsageError(f"{token!r} names {len(maps)} maps, expected one")
    return maps[0][1]


def parse_group(tokens: Sequence[str]) -> GroupSpec:
    if len(tokens) == 1:
        head, _, rest = tokens[0].partition(":")
        if head == "w":
            return w_generators(_int(rest, tokens[0]))
        if head == "g":
            return _gn(rest, tokens[0])
    named = [m for t in tokens for m in parse_map_list(t)]
    return GroupSpec([f for _, f in named], "<" + ", ".join(tokens) + ">", [n for n, _ in named])


def _gn(rest: str, token: str) -> GroupSpec:
    level, _, width = rest.partition(":")
    return gn_generators(TruncationParams(_int(level, token), _int(width or "1", token)))


def _int(s: str, token: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UsageError(f"expected an integer in {token!r}") from None


def _interval(s: str) -> Interval:
    try:
        return Interval.parse(s)
    except (ValueError, PLError) as exc:
        raise UsageError(f"bad interval {s!r}: {exc}") from None


# ------------------------------------------------------------------ output


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _svg(named: Sequence[tuple[str, PLMap]], size: int = 400) -> str:
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    pad = 20
    span = size - 2 * pad

    def px(x, y):
        X = pad + rational(span) * x
        Y = pad + rational(span) * (1 - y)
        return f"{_num(X)},{_num(Y)}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{pad}" y="{pad}" width="{span}" height="{span}" fill="none" stroke="#999"/>',
        f'<polyline points="{px(0, 0)} {px(1, 1)}" fill="none" stroke="#ccc" stroke-dasharray="4"/>',
    ]
    for i, (name, f) in enumerate(named):
        pts = " ".join(px(x, y) for x, y in f.breakpoints)
        color = colors[i % len(colors)]
        lines.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"><title>{name}</title></polyline>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _num(q) -> str:
    # SVG needs decimals; the canvas is 360 wide so dyadic inputs print exactly
    if q.denominator == 1:
        return str(q.numerator)
    return repr(float(q))


# ------------------------------------------------------------------ commands


def cmd_make(args):
    named = [m for t in args.maps for m in parse_map_list(t)]
    if args.format == "csv":
        return OK, _csv([["name", "x", "y"]] + [[n, fmt(x), fmt(y)] for n, f in named for x, y in f.breakpoints])
    if args.format == "text":
        return OK, "".join(f"{n} {json.dumps(f.to_json())}\n" for n, f in named)
    return OK, _dump({n: f.to_json() for n, f in named})


def cmd_eval(args):
    f = parse_map(args.map)
    vals = [(x, eval_at(f, rational(x))) for x in args.points]
    if args.format == "json":
        return OK, _dump({x: fmt(y) for x, y in vals})
    if args.format == "csv":
        return OK, _csv([["x", "y"]] + [[fmt(rational(x)), fmt(y)] for x, y in vals])
    return OK, "".join(fmt(y) + "\n" for _, y in vals)


def cmd_compose(args):
    f = compose_all(parse_map(t) for t in args.maps)
    if args.format == "text":
        return OK, json.dumps(f.to_json()) + "\n"
    return OK, _dump(f.to_json())


def cmd_orbitals(args):
    G = parse_group(args.group)
    B = ball(G, args.radius, cap=args.cap)
    chains = find_transition_chains(B.elements)
    out = {
        "group": G.label,
        "group_orbitals": [A.to_json() for A in group_orbitals(G)],
        "generator_supports": {n: [A.to_json() for A in support(g)] for n, g in zip(G.names, G.generators)},
        "radius": args.radius,
        "ball_size": len(B),
        "transition_chains": [[s.orbital.to_json(), t.orbital.to_json()] for s, t in chains],
    }
    code = OBSTRUCTION if chains else OK
    if args.format == "text":
        lines = ["group orbitals: " + " ".join(str(A) for A in group_orbitals(G))]
        lines += [f"transition chain: {s.orbital} {t.orbital}" for s, t in chains]
        return code, "\n".join(lines) + "\n"
    return code, _dump(out)


def cmd_towers(args):
    G = parse_group(args.group)
    B = ball(G, args.radius, cap=args.cap)
    T = max_tower(B.elements)
    out = {
        "height": T.height,
        "exemplary": is_exemplary(T),
        "radius": args.radius,
        "tower": [{"orbital": e.orbital.to_json(), "word": B.word_of(e.signature)} for e in T.entries],
    }
    if args.format == "text":
        return OK, f"height {T.height}: " + " < ".join(str(e.orbital) for e in T.entries) + "\n"
    return OK, _dump(out)


def cmd_depth(args):
    G = parse_group(args.group)
    rep = depth_lower_bound(G, args.radius, cap=args.cap)
    if args.format == "text":
        return OK, rep.summary + "\n"
    return OK, _dump(rep.to_json())


def cmd_balance(args):
    G = parse_group(args.group)
    v = balance_check(G, args.radius, cap=args.cap)
    code = OK if v.balanced else OBSTRUCTION
    if args.format == "text":
        text = v.status.value
        if v.witness:
            text += f": {v.witness[0].orbital} realizes one end of {v.witness[1]}; {v.note}"
        return code, text + "\n"
    return code, _dump(v.to_json())


def cmd_phi(args):
    G = parse_group(args.group)
    A = _interval(args.orbital) if args.orbital else None
    if A is None:
        orbs = group_orbitals(G)
        if len(orbs) != 1:
            raise UsageError("the group has several orbitals; pass --orbital")
        A = orbs[0]
    pairs = {n: phi(g, A) for n, g in zip(G.names, G.generators)}
    v = image_lattice(G, A)
    if args.format == "text":
        lines = [f"{n} {p}" for n, p in pairs.items()]
        lines.append(f"lattice: {v.kind.value}, rank {v.rank}" + (f", generator {v.generator}" if v.generator else ""))
        return OK, "\n".join(lines) + "\n"
    return OK, _dump({"orbital": A.to_json(), "slopes": {n: p.to_json() for n, p in pairs.items()}, "lattice": v.to_json()})


def cmd_controller(args):
    G = parse_group(args.group)
    A = _interval(args.orbital)
    try:
        c = find_controller(G, A, args.radius, cap=args.cap)
    except LatticeError as exc:
        return OBSTRUCTION, _dump({"obstruction": str(exc)}) if args.format != "text" else f"obstruction: {exc}\n"
    B = ball(G, args.radius, cap=args.cap)
    out = {"controller": c.to_json(), "word": B.word_of(c), "slopes": phi(c, A).to_json()}
    if args.format == "text":
        return OK, f"{out['word']} slopes {phi(c, A)}\n"
    return OK, _dump(out)


def cmd_split(args):
    G = parse_group(args.group)
    A = _interval(args.orbital)
    product = [parse_map(t) for t in args.product.split(",")]
    try:
        res = split_stable_search(A, product, G, args.radius, args.max_depth, cap=args.cap)
    except (TransitionChainObstruction, SearchBudgetExhausted) as exc:
        return OBSTRUCTION, f"obstruction: {exc}\n" if args.format == "text" else _dump({"obstruction": str(exc)})
    if args.format == "text":
        steps = "\n".join(t["step"] for t in res.trace)
        return OK, f"{json.dumps(res.element.to_json())}\n{steps}\n"
    return OK, _dump(res.to_json())


def cmd_classify(args):
    G = parse_group(args.group)
    rep = classification_report(G, args.radius, cap=args.cap, commutators=args.commutators)
    code = OK if rep.expr is not None else OBSTRUCTION
    if args.format == "json":
        return code, _dump(rep.to_json())
    return code, rep.text + "\n"


def cmd_graph(args):
    named = [m for t in args.maps for m in parse_map_list(t)]
    if args.format == "csv":
        return OK, _csv([["name", "x", "y"]] + [[n, fmt(x), fmt(y)] for n, f in named for x, y in f.breakpoints])
    if args.format in ("svg", None):
        return OK, _svg(named)
    raise UsageError("graph supports --format svg or csv")


DEFAULT_FORMAT = {"eval": "text", "classify": "text", "graph": "svg"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=int, default=2, help="word-ball radius (default 2)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="ball element cap (default 20000)")
    common.add_argument("--format", choices=["json", "csv", "svg", "text"], default=None)
    common.add_argument("--out", metavar="PATH", help="write output to PATH")

    p = argparse.ArgumentParser(prog="ploi", description="Piecewise-linear homeomorphisms of [0,1] and their solvable subgroups.")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    add("make", cmd_make, "print breakpoints of maps").add_argument("maps", nargs="+")
    s = add("eval", cmd_eval, "evaluate a map at points")
    s.add_argument("map")
    s.add_argument("points", nargs="+")
    add("compose", cmd_compose, "compose maps left to right").add_argument("maps", nargs="+")
    add("orbitals", cmd_orbitals, "group orbitals and transition chains").add_argument("group", nargs="+")
    add("towers", cmd_towers, "tallest tower in the ball").add_argument("group", nargs="+")
    add("depth", cmd_depth, "derived-length lower bound from towers").add_argument("group", nargs="+")
    add("balance", cmd_balance, "search for an imbalance witness").add_argument("group", nargs="+")
    s = add("phi", cmd_phi, "end slopes and their lattice")
    s.add_argument("group", nargs="+")
    s.add_argument("--orbital", help="interval a:b")
    s = add("controller", cmd_controller, "find a controller on an orbital")
    s.add_argument("group", nargs="+")
    s.add_argument("--orbital", required=True)
    s = add("split", cmd_split, "search an element with a given orbital")
    s.add_argument("group", nargs="+")
    s.add_argument("--orbital", required=True)
    s.add_argument("--product", required=True, help="comma-separated one-orbital maps")
    s.add_argument("--max-depth", type=int, default=8)
    s = add("classify", cmd_classify, "structure expression and embedding target")
    s.add_argument("group", nargs="+")
    s.add_argument("--commutators", action="store_true", help="also compute the iterated commutator bound")
    add("graph", cmd_graph, "SVG or CSV polyline of maps").add_argument("maps", nargs="+")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = DEFAULT_FORMAT.get(args.verb, "json")
    try:
        code, text = args.fn(args)
    except (UsageError, PLError, CapExceeded, ValueError) as exc:
        print(f"ploi: error: {exc}", file=sys.stderr)
        return ERROR
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
