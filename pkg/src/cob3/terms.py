"""Term language for spherical bordisms.

A term denotes a bordism between ordered disjoint unions of 2-spheres. The
generator alphabet:

    id          1 -> 1   product cylinder
    m           2 -> 1   merge (three-holed sphere, two inputs)
    unit        0 -> 1   birth (ball bounding an output sphere)
    comul       1 -> 2   split (three-holed sphere, two outputs)
    tr          1 -> 0   death (ball bounding an input sphere)
    swap        2 -> 2   wire crossing of two cylinders
    pe(LABEL)   1 -> 1   connect-sum with the prime manifold named LABEL
    pu(LABEL)   0 -> 1   punctured prime: pe(LABEL) with the input filled in

Terms combine by "f . g" (f after g) and "f * g" (side by side, left factor
first). "*" binds tighter than "."; both are right-associative and
whitespace-insensitive; parentheses override. Prime labels are nonempty words
over [A-Za-z0-9_#+-].
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "ArityMismatch",
    "Compose",
    "Gen",
    "ParseError",
    "Tensor",
    "Term",
    "TermTypeError",
    "GENERATOR_ARITIES",
    "id_n",
    "parse",
    "permutation_term",
    "print_term",
    "random_term",
    "replace_at",
    "subterm_at",
    "typecheck",
]


class TermTypeError(TypeError):
    """A composite fails to type-check; the message names the offending node."""


class ArityMismatch(TermTypeError):
    """Two interfaces that must have equal width do not."""


class ParseError(ValueError):
    """Malformed term text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


#: name -> (inputs, outputs) for every generator.
GENERATOR_ARITIES: dict[str, tuple[int, int]] = {
    "id": (1, 1),
    "m": (2, 1),
    "unit": (0, 1),
    "comul": (1, 2),
    "tr": (1, 0),
    "swap": (2, 2),
    "pe": (1, 1),
    "pu": (0, 1),
}

_LABELLED = ("pe", "pu")
_LABEL_RE = re.compile(r"[A-Za-z0-9_#+-]+\Z")
# Rule patterns may carry label metavariables written ?p, ?q, ... These are
# constructible (rule tables build them) but deliberately unparseable, so
# user-entered terms can never contain one.
_METAVAR_RE = re.compile(r"\?[a-z]\w*\Z")


class Term:
    """Base class for term trees; subclasses are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Gen(Term):
    name: str
    label: str | None = None

    def __post_init__(self):
        if self.name not in GENERATOR_ARITIES:
            raise ValueError(f"unknown generator {self.name!r}")
        if self.name in _LABELLED:
            if not self.label or not (
                _LABEL_RE.match(self.label) or _METAVAR_RE.match(self.label)
            ):
                raise ValueError(f"{self.name} needs a label over [A-Za-z0-9_#+-]")
        elif self.label is not None:
            raise ValueError(f"{self.name} does not take a label")


@dataclass(frozen=True)
class Compose(Term):
    """f . g: first g, then f. Child 0 is f, child 1 is g."""

    f: Term
    g: Term


@dataclass(frozen=True)
class Tensor(Term):
    """l * r side by side; l's wires come first. Child 0 is l, child 1 is r."""

    l: Term
    r: Term


def typecheck(term: Term) -> tuple[int, int]:
    """Return (inputs, outputs) or raise TermTypeError naming the bad node."""
    if isinstance(term, Gen):
        return GENERATOR_ARITIES[term.name]
    if isinstance(term, Compose):
        fa = typecheck(term.f)
        ga = typecheck(term.g)
        if fa[0] != ga[1]:
            raise ArityMismatch(
                f"cannot compose: left factor wants {fa[0]} inputs but right "
                f"factor yields {ga[1]} outputs in {print_term(term)!r}"
            )
        return (ga[0], fa[1])
    if isinstance(term, Tensor):
        la = typecheck(term.l)
        ra = typecheck(term.r)
        return (la[0] + ra[0], la[1] + ra[1])
    raise TermTypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# printing

def _print(term: Term) -> str:
    if isinstance(term, Gen):
        if term.label is not None:
            return f"{term.name}({term.label})"
        return term.name
    if isinstance(term, Compose):
        left = _print(term.f)
        if isinstance(term.f, Compose):
            left = f"({left})"
        return f"{left} . {_print(term.g)}"
    if isinstance(term, Tensor):
        left = _print(term.l)
        if isinstance(term.l, (Compose, Tensor)):
            left = f"({left})"
        right = _print(term.r)
        if isinstance(term.r, Compose):
            right = f"({right})"
        return f"{left} * {right}"
    raise TermTypeError(f"not a term: {term!r}")


def print_term(term: Term) -> str:
    """Render with minimal parentheses; parse(print_term(t)) == t."""
    return _print(term)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"[A-Za-z0-9_#+-]+|[.*()]")
_SKIP_RE = re.compile(r"\s+")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, int, int]] = []
        self._scan()
        self.index = 0

    def _linecol(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        start = self.text.rfind("\n", 0, pos) + 1
        return line, pos - start + 1

    def _scan(self):
        pos = 0
        n = len(self.text)
        while pos < n:
            ws = _SKIP_RE.match(self.text, pos)
            if ws:
                pos = ws.end()
                continue
            tok = _TOKEN_RE.match(self.text, pos)
            if not tok:
                line, col = self._linecol(pos)
                raise ParseError(f"unexpected character {self.text[pos]!r}", line, col)
            line, col = self._linecol(pos)
            self.tokens.append((tok.group(), line, col))
            pos = tok.end()

    def peek(self) -> str | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def next(self) -> tuple[str, int, int]:
        if self.index >= len(self.tokens):
            line, col = self._linecol(len(self.text))
            raise ParseError("unexpected end of input", line, col)
        tok = self.tokens[self.index]
        self.index += 1
        return tok


def _parse_compose(tk: _Tokenizer) -> Term:
    left = _parse_tensor(tk)
    if tk.peek() == ".":
        tk.next()
        return Compose(left, _parse_compose(tk))
    return left


def _parse_tensor(tk: _Tokenizer) -> Term:
    left = _parse_atom(tk)
    if tk.peek() == "*":
        tk.next()
        return Tensor(left, _parse_tensor(tk))
    return left


def _parse_atom(tk: _Tokenizer) -> Term:
    word, line, col = tk.next()
    if word == "(":
        inner = _parse_compose(tk)
        closer, cline, ccol = tk.next()
        if closer != ")":
            raise ParseError(f"expected ')', got {closer!r}", cline, ccol)
        return inner
    if word in (".", "*", ")"):
        raise ParseError(f"expected a term, got {word!r}", line, col)
    if word in _LABELLED:
        opener, oline, ocol = tk.next()
        if opener != "(":
            raise ParseError(f"{word} needs a parenthesized label", oline, ocol)
        label, lline, lcol = tk.next()
        if not _LABEL_RE.match(label):
            raise ParseError(f"bad prime label {label!r}", lline, lcol)
        closer, cline, ccol = tk.next()
        if closer != ")":
            raise ParseError(f"expected ')', got {closer!r}", cline, ccol)
        return Gen(word, label)
    if word in GENERATOR_ARITIES:
        return Gen(word)
    raise ParseError(f"unknown generator {word!r}", line, col)


def parse(text: str) -> Term:
    """Parse term text; raise ParseError with line/column on malformed input."""
    tk = _Tokenizer(text)
    if not tk.tokens:
        raise ParseError("empty input", 1, 1)
    term = _parse_compose(tk)
    if tk.index != len(tk.tokens):
        word, line, col = tk.tokens[tk.index]
        raise ParseError(f"trailing input starting at {word!r}", line, col)
    return term


# ---------------------------------------------------------------------------
# builders and tree addressing

def id_n(n: int) -> Term:
    """n-fold tensor of id (right-nested); n must be >= 1."""
    if n < 1:
        raise ValueError("id_n needs n >= 1; width-0 interfaces have no term")
    term: Term = Gen("id")
    for _ in range(n - 1):
        term = Tensor(Gen("id"), term)
    return term


def permutation_term(perm) -> Term:
    """A term over swap/id routing input i to output perm[i].

    Built deterministically from adjacent transpositions (bubble network);
    the identity permutation yields id_n(len(perm)).
    """
    perm = list(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm}")
    if n == 0:
        raise ValueError("empty permutation has no term")
    cur = list(perm)
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                swaps.append(i)
                changed = True
    if not swaps:
        return id_n(n)
    term = _swap_layer(swaps[0], n)
    for i in swaps[1:]:
        term = Compose(_swap_layer(i, n), term)
    return term


def _swap_layer(i: int, n: int) -> Term:
    """id^i * swap * id^(n-i-2) as a term of width n."""
    layer: Term = Gen("swap")
    if i + 2 < n:
        layer = Tensor(layer, id_n(n - i - 2))
    if i > 0:
        layer = Tensor(id_n(i), layer)
    return layer


def random_term(rng, max_gens: int = 12, labels=("P", "Q")) -> Term:
    """A random well-typed term with at most max_gens generator leaves.

    Grows a seed generator by tensoring fresh generators on either side and
    by composing whiskered generator layers onto the input or output
    interface, so all shapes (including 0-input and 0-output interfaces)
    occur. Deterministic for a given rng.
    """
    labels = tuple(labels) or ("P",)

    def fresh() -> tuple[Term, int, int]:
        name = rng.choice(("id", "m", "unit", "comul", "tr", "swap", "pe", "pu"))
        gen = Gen(name, rng.choice(labels)) if name in _LABELLED else Gen(name)
        dom, cod = GENERATOR_ARITIES[name]
        return gen, dom, cod

    def layer_for(width: int, attach_out: bool):
        """A one-generator layer composable on a width-wide interface."""
        options = []
        for name, (dom, cod) in GENERATOR_ARITIES.items():
            need = dom if attach_out else cod
            if need <= width:
                options.append((name, dom, cod, need))
        if not options:
            return None
        name, dom, cod, need = rng.choice(options)
        gen = Gen(name, rng.choice(labels)) if name in _LABELLED else Gen(name)
        a = rng.randint(0, width - need)
        b = width - need - a
        layer: Term = gen
        if b > 0:
            layer = Tensor(layer, id_n(b))
        if a > 0:
            layer = Tensor(id_n(a), layer)
        if attach_out:
            return layer, width - dom + cod
        return layer, width - cod + dom

    term, dom, cod = fresh()
    gens = 1
    while gens < max_gens and rng.random() < 0.82:
        move = rng.random()
        if move < 0.35:
            extra, edom, ecod = fresh()
            if rng.random() < 0.5:
                term = Tensor(extra, term)
            else:
                term = Tensor(term, extra)
            dom += edom
            cod += ecod
            gens += 1
        elif move < 0.7:
            built = layer_for(cod, attach_out=True)
            if built is None:
                continue
            layer, cod = built
            term = Compose(layer, term)
            gens += 1
        else:
            built = layer_for(dom, attach_out=False)
            if built is None:
                continue
            layer, dom = built
            term = Compose(term, layer)
            gens += 1
    return term


def subterm_at(term: Term, path) -> Term:
    """Child-index path lookup: 0 = printed-left child, 1 = printed-right."""
    node = term
    for depth, step in enumerate(path):
        if isinstance(node, Compose):
            node = node.f if step == 0 else node.g if step == 1 else None
        elif isinstance(node, Tensor):
            node = node.l if step == 0 else node.r if step == 1 else None
        else:
            node = None
        if node is None:
            raise IndexError(f"no child {step} at depth {depth} of {print_term(term)!r}")
    return node


def replace_at(term: Term, path, replacement: Term) -> Term:
    """Rebuild term with the subterm at path replaced."""
    if not path:
        return replacement
    step, rest = path[0], path[1:]
    if isinstance(term, Compose):
        if step == 0:
            return Compose(replace_at(term.f, rest, replacement), term.g)
        if step == 1:
            return Compose(term.f, replace_at(term.g, rest, replacement))
    elif isinstance(term, Tensor):
        if step == 0:
            return Tensor(replace_at(term.l, rest, replacement), term.r)
        if step == 1:
            return Tensor(term.l, replace_at(term.r, rest, replacement))
    raise IndexError(f"no child {step} in {print_term(term)!r}")
