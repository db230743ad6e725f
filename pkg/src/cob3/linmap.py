"""Exact linear maps between tensor powers of a d-dimensional space.

A map with dom_arity a and cod_arity b sends (Q^d)^{\\otimes a} to
(Q^d)^{\\otimes b}. Basis tensors are flattened big-endian: the multi-index
(i_0, ..., i_{k-1}) becomes sum_t i_t * d^(k-1-t). Entries are a sparse dict
{(row, col): Fraction} — zero entries are simply absent, and all arithmetic
is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

__all__ = [
    "LinearMap",
    "identity_map",
    "permutation_map",
    "scalar_to_fraction",
    "fraction_to_scalar",
]


def scalar_to_fraction(v) -> Fraction:
    """Accept int, "num/den" string, or Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not an exact scalar: {v!r}")


def fraction_to_scalar(f: Fraction):
    """Render exactly: bare int when integral, else "num/den"."""
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class LinearMap:
    dom_arity: int
    cod_arity: int
    d: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return self.d ** self.cod_arity

    @property
    def cols(self) -> int:
        return self.d ** self.dom_arity

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if not isinstance(v, Fraction):
                raise TypeError("entries must be Fractions")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.dom_arity == other.dom_arity
            and self.cod_arity == other.cod_arity
            and self.d == other.d
            and _nonzero(self.entries) == _nonzero(other.entries)
        )

    def __hash__(self):
        return hash(
            (
                self.dom_arity,
                self.cod_arity,
                self.d,
                tuple(sorted(_nonzero(self.entries).items())),
            )
        )

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        if self.dom_arity != other.cod_arity:
            raise ValueError(
                f"arity mismatch: composing {self.dom_arity} <- {other.cod_arity}"
            )
        by_col: Dict[int, list] = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        out: Dict[Tuple[int, int], Fraction] = {}
        for (m, c), v in other.entries.items():
            for r, w in by_col.get(m, ()):
                key = (r, c)
                acc = out.get(key)
                out[key] = w * v if acc is None else acc + w * v
        return LinearMap(other.dom_arity, self.cod_arity, self.d, _nonzero(out))

    def tensor(self, other: "LinearMap") -> "LinearMap":
        """self on the left factors, other on the right."""
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        rr = other.d ** other.cod_arity
        cc = other.d ** other.dom_arity
        out: Dict[Tuple[int, int], Fraction] = {}
        for (r1, c1), v1 in self.entries.items():
            for (r2, c2), v2 in other.entries.items():
                out[(r1 * rr + r2, c1 * cc + c2)] = v1 * v2
        return LinearMap(
            self.dom_arity + other.dom_arity,
            self.cod_arity + other.cod_arity,
            self.d,
            _nonzero(out),
        )

    def apply(self, vec: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """Apply to a sparse column vector {index: value}."""
        out: Dict[int, Fraction] = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is not None:
                out[r] = out.get(r, Fraction(0)) + v * x
        return {k: v for k, v in out.items() if v != 0}

    def scalar(self) -> Fraction:
        """The single entry of a 0 -> 0 map."""
        if self.dom_arity != 0 or self.cod_arity != 0:
            raise ValueError("scalar() requires a closed (0 -> 0) map")
        return self.entries.get((0, 0), Fraction(0))

    def to_json(self) -> str:
        ents = [
            [r, c, fraction_to_scalar(v)]
            for (r, c), v in sorted(_nonzero(self.entries).items())
        ]
        return json.dumps(
            {
                "dom_arity": self.dom_arity,
                "cod_arity": self.cod_arity,
                "d": self.d,
                "entries": ents,
            },
            indent=2,
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "LinearMap":
        data = json.loads(text)
        entries = {
            (int(r), int(c)): scalar_to_fraction(v) for r, c, v in data["entries"]
        }
        return LinearMap(
            int(data["dom_arity"]), int(data["cod_arity"]), int(data["d"]), entries
        )


def _nonzero(entries):
    return {k: v for k, v in entries.items() if v != 0}


def identity_map(d: int, arity: int) -> LinearMap:
    n = d ** arity
    return LinearMap(arity, arity, d, {(i, i): Fraction(1) for i in range(n)})


def permutation_map(d: int, perm) -> LinearMap:
    """Wire permutation: output slot j carries input slot perm[j]."""
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"not a permutation: {perm}")
    entries: Dict[Tuple[int, int], Fraction] = {}
    for col in range(d ** k):
        digits = []
        x = col
        for _ in range(k):
            digits.append(x % d)
            x //= d
        digits.reverse()
        row = 0
        for j in range(k):
            row = row * d + digits[perm[j]]
        entries[(row, col)] = Fraction(1)
    return LinearMap(k, k, d, entries)
