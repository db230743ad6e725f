"""Connectivity invariant for spherical bordism terms.

A term denotes a 3-manifold with spherical boundary. Its full diffeomorphism
class is captured by a labelled cospan: for each connected piece, which input
and output boundary spheres it touches, how many connect-summands of
S2 x S1 it carries (its genus), and the multiset of prime labels attached to
it. Composition glues pieces along shared boundary spheres; each independent
cycle created by the gluing adds one S2 x S1 summand.

Two well-typed terms of equal arity denote the same bordism exactly when
their canonical cospans coincide, so equality here is the semantic equality
of the calculus, deliberately coarser than planar-diagram equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .terms import Compose, Gen, Tensor, Term, TermTypeError, typecheck

__all__ = [
    "Component",
    "LabelledCospan",
    "compose_cospans",
    "tensor_cospans",
    "identity_cospan",
    "generator_cospan",
    "cospan_of_term",
    "terms_equal",
    "manifold_signature",
    "cospan_to_json",
    "cospan_from_json",
]


@dataclass(frozen=True)
class Component:
    """One connected piece: boundary ports, genus, and prime labels.

    in_ports/out_ports index boundary spheres of the ambient cospan's dom and
    cod interfaces; both are kept sorted. primes is sorted with multiplicity.
    """

    in_ports: tuple[int, ...]
    out_ports: tuple[int, ...]
    genus: int
    primes: tuple[str, ...]

    def is_closed(self) -> bool:
        return not self.in_ports and not self.out_ports


@dataclass(frozen=True)
class LabelledCospan:
    """Canonical connectivity data of a bordism between sphere interfaces."""

    dom: int
    cod: int
    components: tuple[Component, ...]


def _canonical(dom: int, cod: int, comps) -> LabelledCospan:
    boundary = []
    closed = []
    for c in comps:
        comp = Component(
            tuple(sorted(c.in_ports)),
            tuple(sorted(c.out_ports)),
            c.genus,
            tuple(sorted(c.primes)),
        )
        (closed if comp.is_closed() else boundary).append(comp)
    boundary.sort(key=lambda c: (c.in_ports, c.out_ports))
    closed.sort(key=lambda c: (c.genus, c.primes))
    return LabelledCospan(dom, cod, tuple(boundary + closed))


def identity_cospan(n: int) -> LabelledCospan:
    return _canonical(
        n, n, [Component((i,), (i,), 0, ()) for i in range(n)]
    )


def generator_cospan(gen: Gen) -> LabelledCospan:
    name = gen.name
    if name == "id":
        return identity_cospan(1)
    if name == "m":
        return _canonical(2, 1, [Component((0, 1), (0,), 0, ())])
    if name == "unit":
        return _canonical(0, 1, [Component((), (0,), 0, ())])
    if name == "comul":
        return _canonical(1, 2, [Component((0,), (0, 1), 0, ())])
    if name == "tr":
        return _canonical(1, 0, [Component((0,), (), 0, ())])
    if name == "swap":
        return _canonical(
            2, 2, [Component((0,), (1,), 0, ()), Component((1,), (0,), 0, ())]
        )
    if name == "pe":
        return _canonical(1, 1, [Component((0,), (0,), 0, (gen.label,))])
    if name == "pu":
        return _canonical(0, 1, [Component((), (0,), 0, (gen.label,))])
    raise TermTypeError(f"no bordism for generator {name!r}")


def compose_cospans(f: LabelledCospan, g: LabelledCospan) -> LabelledCospan:
    """f after g: glue g's output spheres to f's input spheres.

    Components falling into one glued class merge; the class genus is the sum
    of member genera plus the class's cycle rank (gluings - members + 1),
    which counts the S2 x S1 summands the gluing itself creates.
    """
    if f.dom != g.cod:
        raise TermTypeError(
            f"cannot glue: left factor wants {f.dom} spheres but right factor"
            f" yields {g.cod}"
        )
    members = [("g", i) for i in range(len(g.components))] + [
        ("f", i) for i in range(len(f.components))
    ]
    parent = {m: m for m in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    g_of_port = {}
    for i, c in enumerate(g.components):
        for p in c.out_ports:
            g_of_port[p] = i
    f_of_port = {}
    for i, c in enumerate(f.components):
        for p in c.in_ports:
            f_of_port[p] = i
    for p in range(f.dom):
        union(("g", g_of_port[p]), ("f", f_of_port[p]))

    classes: dict = {}
    for m in members:
        classes.setdefault(find(m), []).append(m)

    merged = []
    for mem in classes.values():
        in_ports: list[int] = []
        out_ports: list[int] = []
        primes: list[str] = []
        genus = 0
        edges = 0
        for side, i in mem:
            c = g.components[i] if side == "g" else f.components[i]
            primes.extend(c.primes)
            genus += c.genus
            if side == "g":
                in_ports.extend(c.in_ports)
                edges += len(c.out_ports)
            else:
                out_ports.extend(c.out_ports)
        genus += edges - len(mem) + 1
        merged.append(
            Component(tuple(in_ports), tuple(out_ports), genus, tuple(primes))
        )
    return _canonical(g.dom, f.cod, merged)


def tensor_cospans(l: LabelledCospan, r: LabelledCospan) -> LabelledCospan:
    comps = list(l.components) + [
        Component(
            tuple(p + l.dom for p in c.in_ports),
            tuple(p + l.cod for p in c.out_ports),
            c.genus,
            c.primes,
        )
        for c in r.components
    ]
    return _canonical(l.dom + r.dom, l.cod + r.cod, comps)


def cospan_of_term(term: Term) -> LabelledCospan:
    """The canonical cospan a well-typed term denotes."""
    typecheck(term)
    return _cospan(term)


def _cospan(term: Term) -> LabelledCospan:
    if isinstance(term, Gen):
        return generator_cospan(term)
    if isinstance(term, Compose):
        return compose_cospans(_cospan(term.f), _cospan(term.g))
    if isinstance(term, Tensor):
        return tensor_cospans(_cospan(term.l), _cospan(term.r))
    raise TermTypeError(f"not a term: {term!r}")


def terms_equal(a: Term, b: Term) -> bool:
    """Semantic equality: same arities and identical canonical cospans."""
    if typecheck(a) != typecheck(b):
        return False
    return cospan_of_term(a) == cospan_of_term(b)


def _component_signature(c: Component) -> str:
    factors = list(c.primes)
    if c.genus >= 1:
        factors.append(f"(S2xS1)^{c.genus}")
    body = " # ".join(factors) if factors else "S3"
    n = len(c.in_ports) + len(c.out_ports)
    if n == 0:
        return f"{body} closed"
    balls = "1 ball" if n == 1 else f"{n} balls"
    return f"{body} \\ {balls} ({len(c.in_ports)} in, {len(c.out_ports)} out)"


def manifold_signature(cospan: LabelledCospan) -> str:
    """Human-readable prime decomposition, one clause per connected piece."""
    if not cospan.components:
        return "(empty)"
    return " | ".join(_component_signature(c) for c in cospan.components)


def cospan_to_json(cospan: LabelledCospan) -> str:
    return json.dumps(
        {
            "dom": cospan.dom,
            "cod": cospan.cod,
            "components": [
                {
                    "in": list(c.in_ports),
                    "out": list(c.out_ports),
                    "genus": c.genus,
                    "primes": list(c.primes),
                }
                for c in cospan.components
            ],
        },
        indent=2,
        sort_keys=True,
    )


def cospan_from_json(text: str) -> LabelledCospan:
    data = json.loads(text)
    comps = [
        Component(
            tuple(c["in"]), tuple(c["out"]), int(c["genus"]), tuple(c["primes"])
        )
        for c in data["components"]
    ]
    return _canonical(int(data["dom"]), int(data["cod"]), comps)
