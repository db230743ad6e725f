"""Evaluation of diagrams in a commutative Frobenius algebra.

`eval_term` interprets a term layer by layer: the accumulated map is kept as
a sparse column dict and each generator acts on its wire window in place, so
wide identity regions cost nothing. `eval_semantic` instead reads the glued
surface — it evaluates each connected component from its boundary counts,
genus, and prime list, then reassembles the boundary permutations by index
rewiring. The two agree on every well-typed term; that agreement is the
whole point of the invariant.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Optional, Tuple

from cob3.cospan import LabelledCospan, cospan_of_term
from cob3.frobenius import FrobeniusAlgebra, UnknownPrime
from cob3.layers import GEN_DOM, GEN_COD, label_name, term_to_state
from cob3.linmap import LinearMap, scalar_to_fraction
from cob3.terms import Term, parse

__all__ = [
    "eval_term",
    "eval_with_endo_override",
    "eval_semantic",
    "parse_manifold",
    "closed_invariant",
    "closed_invariant_by_characters",
]

_M, _UNIT, _COMUL, _TR, _SWAP, _PE, _PU = range(7)


def _w(v):
    """Coefficient as stored in a column table: None stands for exactly 1."""
    return None if v == 1 else v


def _column_tables(alg: FrobeniusAlgebra):
    """Per-generator column -> [(local_row, coeff-or-None)] tables."""
    d = alg.dim
    tabs = {}
    mul_cols = {}
    for i in range(d):
        for j in range(d):
            col = [
                (k, _w(alg.mul[k][i][j])) for k in range(d) if alg.mul[k][i][j]
            ]
            mul_cols[i * d + j] = col
    tabs[(_M, -1)] = mul_cols
    tabs[(_UNIT, -1)] = {0: [(i, _w(alg.unit[i])) for i in range(d) if alg.unit[i]]}
    tabs[(_COMUL, -1)] = {
        i: [
            (j * d + k, _w(alg.comul[i][j][k]))
            for j in range(d)
            for k in range(d)
            if alg.comul[i][j][k]
        ]
        for i in range(d)
    }
    tabs[(_TR, -1)] = {
        i: ([(0, _w(alg.trace[i]))] if alg.trace[i] else []) for i in range(d)
    }
    tabs[(_SWAP, -1)] = {
        i * d + j: [(j * d + i, None)] for i in range(d) for j in range(d)
    }
    return tabs


def _endo_table(alg, label, overrides, d):
    if overrides and label in overrides:
        m = overrides[label]
        if len(m) != d or any(len(r) != d for r in m):
            raise ValueError(f"override for {label!r} is not {d}x{d}")
        mat = [[scalar_to_fraction(x) for x in row] for row in m]
    else:
        mat = alg.prime_endo_matrix(label)
    return {i: [(k, _w(mat[k][i])) for k in range(d) if mat[k][i]] for i in range(d)}


def _unit_table(alg, label, d):
    vec = alg.primes.get(label)
    if vec is None:
        raise UnknownPrime(label)
    return {0: [(i, _w(vec[i])) for i in range(d) if vec[i]]}


def eval_term(
    term, alg: FrobeniusAlgebra, overrides: Optional[dict] = None
) -> LinearMap:
    """The linear map of a term (parse strings on the fly)."""
    if isinstance(term, str):
        term = parse(term)
    state = term_to_state(term)
    d = alg.dim
    dom = state[0]
    tabs = _column_tables(alg)
    acc: Dict[Tuple[int, int], Fraction] = {
        (i, i): Fraction(1) for i in range(d ** dom)
    }
    w = dom
    for p in range(1, len(state), 3):
        off, gen, lab = state[p], state[p + 1], state[p + 2]
        key = (gen, lab if gen in (_PE, _PU) else -1)
        tab = tabs.get(key)
        if tab is None:
            name = label_name(lab)
            tab = (
                _endo_table(alg, name, overrides, d)
                if gen == _PE
                else _unit_table(alg, name, d)
            )
            tabs[key] = tab
        a, b = GEN_DOM[gen], GEN_COD[gen]
        right = w - off - a
        pa, pb, pr = d ** a, d ** b, d ** right
        new: Dict[Tuple[int, int], Fraction] = {}
        for (r, c), v in acc.items():
            lo = r % pr
            rest = r // pr
            mid = rest % pa
            hi = rest // pa
            base = hi * pb
            for rg, vg in tab[mid]:
                key2 = ((base + rg) * pr + lo, c)
                prev = new.get(key2)
                prod = v if vg is None else v * vg
                new[key2] = prod if prev is None else prev + prod
        acc = {k: v for k, v in new.items() if v != 0}
        w += b - a
    return LinearMap(dom, w, d, acc)


def eval_with_endo_override(term, alg: FrobeniusAlgebra, overrides: dict) -> LinearMap:
    """eval_term with selected prime endomorphisms replaced by raw matrices.

    Overrides apply to the endomorphism generator only; labelled units keep
    the algebra's own elements.
    """
    return eval_term(term, alg, overrides)


def _comul_chain(alg, v, b):
    """Sparse {index-tuple: coeff} of the b-fold comultiplication of v."""
    d = alg.dim
    cur: Dict[Tuple[int, ...], Fraction] = {
        (i,): v[i] for i in range(d) if v[i]
    }
    for _ in range(b - 1):
        new: Dict[Tuple[int, ...], Fraction] = {}
        for idx, c in cur.items():
            i = idx[0]
            for j in range(d):
                for k in range(d):
                    cc = alg.comul[i][j][k]
                    if cc:
                        t = (j, k) + idx[1:]
                        prev = new.get(t)
                        val = c * cc
                        new[t] = val if prev is None else prev + val
        cur = {k: v for k, v in new.items() if v != 0}
    return cur


def _component_map(alg: FrobeniusAlgebra, a, b, genus, primes) -> LinearMap:
    """(b-fold comul) . (prime endos) . (handle)^genus . (a-fold mul)."""
    d = alg.dim
    handle = alg.handle_element() if genus else None
    entries: Dict[Tuple[int, int], Fraction] = {}
    for col in range(d ** a):
        if a == 0:
            v = alg.unit
        else:
            digits = []
            x = col
            for _ in range(a):
                digits.append(x % d)
                x //= d
            digits.reverse()
            v = tuple(
                Fraction(int(i == digits[0])) for i in range(d)
            )
            for t in digits[1:]:
                e = tuple(Fraction(int(i == t)) for i in range(d))
                v = alg.multiply(v, e)
                if not any(v):
                    break
        if not any(v):
            continue
        for _ in range(genus):
            v = alg.multiply(handle, v)
        for p in primes:
            vec = alg.primes.get(p)
            if vec is None:
                raise UnknownPrime(p)
            v = alg.multiply(vec, v)
        if b == 0:
            s = alg.trace_of(v)
            if s:
                entries[(0, col)] = entries.get((0, col), Fraction(0)) + s
            continue
        for idx, c in _comul_chain(alg, v, b).items():
            row = 0
            for t in idx:
                row = row * d + t
            entries[(row, col)] = c
    return LinearMap(a, b, d, entries)


def eval_semantic(cospan: LabelledCospan, alg: FrobeniusAlgebra) -> LinearMap:
    """Evaluate a glued surface componentwise and rewire its boundary."""
    d = alg.dim
    comps = cospan.components
    maps = [
        _component_map(alg, len(c.in_ports), len(c.out_ports), c.genus, c.primes)
        for c in comps
    ]
    if maps:
        total = maps[0]
        for m in maps[1:]:
            total = total.tensor(m)
    else:
        total = LinearMap(0, 0, d, {(0, 0): Fraction(1)})
    in_concat = [p for c in comps for p in c.in_ports]
    out_concat = [p for c in comps for p in c.out_ports]
    dom, cod = cospan.dom, cospan.cod
    entries: Dict[Tuple[int, int], Fraction] = {}
    for (r, c), v in total.entries.items():
        gc = _reindex(c, in_concat, dom, d)
        gr = _reindex(r, out_concat, cod, d)
        entries[(gr, gc)] = v
    return LinearMap(dom, cod, d, entries)


def _reindex(idx, ports, width, d):
    """Move tensor-slot digits to their global wire positions."""
    digits = []
    x = idx
    for _ in range(len(ports)):
        digits.append(x % d)
        x //= d
    digits.reverse()
    out = [0] * width
    for slot, wire in enumerate(ports):
        out[wire] = digits[slot]
    g = 0
    for t in out:
        g = g * d + t
    return g


# -- closed manifolds ----------------------------------------------------------


_HANDLES_RE = re.compile(r"\(S2xS1\)\^(\d+)\Z")
_LABEL_RE = re.compile(r"[A-Za-z]\w*\Z")


def parse_manifold(text: str) -> Tuple[int, Tuple[str, ...]]:
    """(genus, primes) of a closed-surface description.

    Connected-sum factors are separated by '#': "S3" contributes nothing,
    "(S2xS1)^k" contributes k handles, anything label-shaped is a prime.
    """
    genus = 0
    primes = []
    for raw in text.split("#"):
        tok = raw.strip()
        if not tok:
            raise ValueError(f"empty factor in {text!r}")
        if tok == "S3":
            continue
        m = _HANDLES_RE.match(tok)
        if m:
            genus += int(m.group(1))
            continue
        if _LABEL_RE.match(tok):
            primes.append(tok)
            continue
        raise ValueError(f"unrecognized factor {tok!r}")
    return genus, tuple(sorted(primes))


def closed_invariant(alg: FrobeniusAlgebra, manifold: str) -> Fraction:
    """trace(prime elements * handle^genus * 1), evaluated as a diagram."""
    genus, primes = parse_manifold(manifold)
    v = alg.unit
    handle = alg.handle_element()
    for _ in range(genus):
        v = alg.multiply(handle, v)
    for p in primes:
        vec = alg.primes.get(p)
        if vec is None:
            raise UnknownPrime(p)
        v = alg.multiply(vec, v)
    return alg.trace_of(v)


def closed_invariant_by_characters(alg: FrobeniusAlgebra, manifold: str) -> Fraction:
    """Character-sum form: sum over blocks of
    trace(idem) * prod chi(1_p) * chi(handle)^genus."""
    from cob3.frobenius import character_on_block, idempotent_decomposition

    genus, primes = parse_manifold(manifold)
    dec = idempotent_decomposition(alg)
    handle = alg.handle_element()
    total = Fraction(0)
    for idem in dec.idempotents:
        term = alg.trace_of(idem)
        for p in primes:
            vec = alg.primes.get(p)
            if vec is None:
                raise UnknownPrime(p)
            term *= character_on_block(alg, idem, vec)
        if genus:
            term *= character_on_block(alg, idem, handle) ** genus
        total += term
    return total
