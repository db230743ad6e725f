"""Commutative Frobenius algebras over Q with labelled prime elements.

An algebra is given by structure constants, all exact Fractions:

    mul[k][i][j]    coefficient of e_k in e_i * e_j
    unit[i]         coordinates of 1
    trace[i]        the counit functional on e_i
    comul[i][j][k]  coefficient of e_j (x) e_k in comul(e_i)

plus a mapping from prime labels to distinguished elements 1_p; the
endomorphism attached to a label is multiplication by its element. The
comultiplication may be omitted and derived from the trace pairing
beta(i,j) = trace(e_i e_j), which must be nondegenerate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from cob3.linmap import fraction_to_scalar, scalar_to_fraction

__all__ = [
    "ShapeError",
    "DegeneratePairing",
    "UnknownPrime",
    "NotScalarOnBlock",
    "Violation",
    "VerifyReport",
    "FrobeniusAlgebra",
    "make_algebra",
    "derive_comul",
    "algebra_from_json",
    "algebra_to_json",
    "IdempotentDecomposition",
    "idempotent_decomposition",
    "diagonal_algebra",
    "hadamard_algebra",
    "conjugate_algebra",
    "random_labelled_algebra",
]


class ShapeError(ValueError):
    """Structure constants with the wrong dimensions."""


class DegeneratePairing(ValueError):
    """The trace pairing is singular, so no comultiplication exists."""


class UnknownPrime(KeyError):
    """A label with no element attached to it."""


class NotScalarOnBlock(ValueError):
    """The algebra does not split into one-dimensional blocks over Q."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: Tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    def describe(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return (
            f"{self.axiom}[{idx}]: "
            f"{fraction_to_scalar(self.lhs)} != {fraction_to_scalar(self.rhs)}"
        )


@dataclass(frozen=True)
class VerifyReport:
    violations: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.ok:
            return "all axioms hold"
        lines = [f"{len(self.violations)} violation(s):"]
        lines.extend("  " + v.describe() for v in self.violations[:20])
        if len(self.violations) > 20:
            lines.append(f"  ... and {len(self.violations) - 20} more")
        return "\n".join(lines)


def _frac_vec(v, d, what) -> Tuple[Fraction, ...]:
    if len(v) != d:
        raise ShapeError(f"{what}: expected length {d}, got {len(v)}")
    return tuple(scalar_to_fraction(x) for x in v)


def _frac_cube(c, d, what) -> Tuple[Tuple[Tuple[Fraction, ...], ...], ...]:
    if len(c) != d:
        raise ShapeError(f"{what}: expected {d} slices, got {len(c)}")
    out = []
    for sl in c:
        if len(sl) != d:
            raise ShapeError(f"{what}: ragged slice of length {len(sl)}")
        out.append(tuple(_frac_vec(row, d, what) for row in sl))
    return tuple(out)


class FrobeniusAlgebra:
    def __init__(self, dim, mul, unit, trace, comul=None, primes=None):
        if dim < 1:
            raise ShapeError("dimension must be positive")
        self.dim = int(dim)
        self.mul = _frac_cube(mul, self.dim, "mul")
        self.unit = _frac_vec(unit, self.dim, "unit")
        self.trace = _frac_vec(trace, self.dim, "trace")
        self.primes: Dict[str, Tuple[Fraction, ...]] = {}
        for label, vec in (primes or {}).items():
            self.primes[str(label)] = _frac_vec(vec, self.dim, f"primes[{label}]")
        if comul is None:
            self.comul = derive_comul(self.mul, self.trace, self.dim)
        else:
            self.comul = _frac_cube(comul, self.dim, "comul")

    # -- elementwise operations -------------------------------------------

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]):
        d = self.dim
        out = [Fraction(0)] * d
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                xy = x[i] * y[j]
                for k in range(d):
                    c = self.mul[k][i][j]
                    if c:
                        out[k] += c * xy
        return tuple(out)

    def trace_of(self, x: Sequence[Fraction]) -> Fraction:
        return sum((self.trace[i] * x[i] for i in range(self.dim)), Fraction(0))

    def element_endo(self, v: Sequence[Fraction]):
        """Matrix [k][i] of multiplication by the element v."""
        d = self.dim
        return tuple(
            tuple(
                sum((v[j] * self.mul[k][j][i] for j in range(d)), Fraction(0))
                for i in range(d)
            )
            for k in range(d)
        )

    def prime_endo_matrix(self, label: str):
        if label not in self.primes:
            raise UnknownPrime(label)
        return self.element_endo(self.primes[label])

    def handle_element(self) -> Tuple[Fraction, ...]:
        """m(comul(1)): the element a closed genus handle multiplies by."""
        d = self.dim
        out = [Fraction(0)] * d
        for i in range(d):
            if not self.unit[i]:
                continue
            for j in range(d):
                for k in range(d):
                    c = self.comul[i][j][k]
                    if not c:
                        continue
                    for s in range(d):
                        m = self.mul[s][j][k]
                        if m:
                            out[s] += self.unit[i] * c * m
        return tuple(out)

    # -- axiom verification ------------------------------------------------

    def verify_cf(self) -> VerifyReport:
        """Check the seven commutative-Frobenius axiom families.

        Every failing coefficient produces a witness with its basis indices,
        so a bad algebra pinpoints exactly which structure constant clash
        broke which law.
        """
        d = self.dim
        mul, unit, trace, comul = self.mul, self.unit, self.trace, self.comul
        bad: List[Violation] = []

        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for out in range(d):
                        lhs = sum(
                            (mul[s][i][j] * mul[out][s][k] for s in range(d)),
                            Fraction(0),
                        )
                        rhs = sum(
                            (mul[s][j][k] * mul[out][i][s] for s in range(d)),
                            Fraction(0),
                        )
                        if lhs != rhs:
                            bad.append(
                                Violation("associativity", (i, j, k, out), lhs, rhs)
                            )

        for i in range(d):
            for j in range(d):
                for out in range(d):
                    if mul[out][i][j] != mul[out][j][i]:
                        bad.append(
                            Violation(
                                "commutativity",
                                (i, j, out),
                                mul[out][i][j],
                                mul[out][j][i],
                            )
                        )

        for i in range(d):
            for out in range(d):
                lhs = sum((unit[s] * mul[out][s][i] for s in range(d)), Fraction(0))
                want = Fraction(1) if out == i else Fraction(0)
                if lhs != want:
                    bad.append(Violation("unit", (0, i, out), lhs, want))
                rhs = sum((unit[s] * mul[out][i][s] for s in range(d)), Fraction(0))
                if rhs != want:
                    bad.append(Violation("unit", (1, i, out), rhs, want))

        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        lhs = sum(
                            (comul[i][s][l] * comul[s][j][k] for s in range(d)),
                            Fraction(0),
                        )
                        rhs = sum(
                            (comul[i][j][s] * comul[s][k][l] for s in range(d)),
                            Fraction(0),
                        )
                        if lhs != rhs:
                            bad.append(
                                Violation("coassociativity", (i, j, k, l), lhs, rhs)
                            )

        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if comul[i][j][k] != comul[i][k][j]:
                        bad.append(
                            Violation(
                                "cocommutativity",
                                (i, j, k),
                                comul[i][j][k],
                                comul[i][k][j],
                            )
                        )

        for i in range(d):
            for out in range(d):
                want = Fraction(1) if out == i else Fraction(0)
                lhs = sum((comul[i][s][out] * trace[s] for s in range(d)), Fraction(0))
                if lhs != want:
                    bad.append(Violation("counit", (0, i, out), lhs, want))
                rhs = sum((comul[i][out][s] * trace[s] for s in range(d)), Fraction(0))
                if rhs != want:
                    bad.append(Violation("counit", (1, i, out), rhs, want))

        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        lhs = sum(
                            (mul[s][i][j] * comul[s][k][l] for s in range(d)),
                            Fraction(0),
                        )
                        mid = sum(
                            (comul[j][s][l] * mul[k][i][s] for s in range(d)),
                            Fraction(0),
                        )
                        rhs = sum(
                            (comul[i][k][s] * mul[l][s][j] for s in range(d)),
                            Fraction(0),
                        )
                        if lhs != mid:
                            bad.append(Violation("frobenius", (0, i, j, k, l), lhs, mid))
                        if mid != rhs:
                            bad.append(Violation("frobenius", (1, i, j, k, l), mid, rhs))

        return VerifyReport(tuple(bad))

    def verify_legs(self) -> VerifyReport:
        """Multiplication must accept a prime element on either input."""
        d = self.dim
        bad: List[Violation] = []
        for n, label in enumerate(sorted(self.primes)):
            em = self.prime_endo_matrix(label)
            for i in range(d):
                for j in range(d):
                    for out in range(d):
                        lhs = sum(
                            (em[s][i] * self.mul[out][s][j] for s in range(d)),
                            Fraction(0),
                        )
                        rhs = sum(
                            (em[s][j] * self.mul[out][i][s] for s in range(d)),
                            Fraction(0),
                        )
                        if lhs != rhs:
                            bad.append(Violation("legs", (n, i, j, out), lhs, rhs))
        return VerifyReport(tuple(bad))


def make_algebra(dim, mul, unit, trace, comul=None, primes=None) -> FrobeniusAlgebra:
    return FrobeniusAlgebra(dim, mul, unit, trace, comul, primes)


# -- exact linear algebra helpers ------------------------------------------


def _mat_invert(a):
    """Gauss-Jordan inverse over Fraction; None when singular."""
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _mat_kernel(a):
    """Basis of the null space of a (rows x cols) Fraction matrix."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(r) for r in a]
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if m[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for rr in range(rows):
            if rr != r and m[rr][c]:
                f = m[rr][c]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -m[pr][fc]
        basis.append(tuple(v))
    return basis


def _solve_coords(basis, vec):
    """Coordinates of vec in the span of basis vectors; None if outside."""
    cols = len(basis)
    rows = len(vec)
    aug = [[basis[j][i] for j in range(cols)] + [vec[i]] for i in range(rows)]
    r = 0
    pivots = []
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if aug[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = Fraction(1) / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for rr in range(rows):
            if rr != r and aug[rr][c]:
                f = aug[rr][c]
                aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[r])]
        pivots.append(c)
        r += 1
    coords = [Fraction(0)] * cols
    for pr, pc in enumerate(pivots):
        coords[pc] = aug[pr][cols]
    for rr in range(r, rows):
        if aug[rr][cols]:
            return None
    # consistency: residual rows below rank already checked
    return coords


def derive_comul(mul, trace, dim):
    """Comultiplication from the trace pairing.

    comul(x) = sum_{s,t} (beta^-1)_{st} (x e_s) (x) e_t with
    beta(i,j) = trace(e_i e_j); raises DegeneratePairing when beta is
    singular.
    """
    d = dim
    beta = [
        [
            sum((mul[k][i][j] * trace[k] for k in range(d)), Fraction(0))
            for j in range(d)
        ]
        for i in range(d)
    ]
    binv = _mat_invert(beta)
    if binv is None:
        raise DegeneratePairing("trace pairing is singular")
    comul = []
    for i in range(d):
        slab = [[Fraction(0)] * d for _ in range(d)]
        for s in range(d):
            for t in range(d):
                c = binv[s][t]
                if not c:
                    continue
                for j in range(d):
                    mj = mul[j][i][s]
                    if mj:
                        slab[j][t] += c * mj
        comul.append(tuple(tuple(row) for row in slab))
    return tuple(comul)


# -- JSON --------------------------------------------------------------------


def algebra_to_json(alg: FrobeniusAlgebra) -> str:
    def cube(c):
        return [[[fraction_to_scalar(x) for x in row] for row in sl] for sl in c]

    data = {
        "dim": alg.dim,
        "mul": cube(alg.mul),
        "unit": [fraction_to_scalar(x) for x in alg.unit],
        "trace": [fraction_to_scalar(x) for x in alg.trace],
        "comul": cube(alg.comul),
        "primes": {
            label: [fraction_to_scalar(x) for x in vec]
            for label, vec in sorted(alg.primes.items())
        },
    }
    return json.dumps(data, indent=2, sort_keys=True)


def algebra_from_json(text: str) -> FrobeniusAlgebra:
    data = json.loads(text)
    for key in ("dim", "mul", "unit", "trace"):
        if key not in data:
            raise ShapeError(f"missing field {key!r}")
    return FrobeniusAlgebra(
        data["dim"],
        data["mul"],
        data["unit"],
        data["trace"],
        data.get("comul"),
        data.get("primes"),
    )


# -- idempotent splitting ----------------------------------------------------


@dataclass(frozen=True)
class IdempotentDecomposition:
    """Primitive orthogonal idempotents of a split semisimple algebra."""

    idempotents: Tuple[Tuple[Fraction, ...], ...]

    def __len__(self):
        return len(self.idempotents)


def _char_poly(m):
    """Faddeev-LeVerrier: coefficients [1, c1, ..., cn] of det(xI - M)."""
    n = len(m)
    coeffs = [Fraction(1)]
    mk = [row[:] for row in m]
    for k in range(1, n + 1):
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            mk[i][i] += ck
        mk = [
            [
                sum((m[i][s] * mk[s][j] for s in range(n)), Fraction(0))
                for j in range(n)
            ]
            for i in range(n)
        ]
    return coeffs


def _divisors(n):
    n = abs(n)
    out = [1]
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    if n > 1:
        out.append(n)
    return sorted(set(out))


def _rational_roots(coeffs):
    """Distinct rational roots of a monic Fraction polynomial."""
    n = len(coeffs) - 1
    if n == 0:
        return []
    from math import lcm

    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ic = [int(c * den) for c in coeffs]
    while len(ic) > 1 and ic[-1] == 0:
        ic.pop()
    roots = set()
    if len(ic) < len(coeffs):
        roots.add(Fraction(0))
    if len(ic) > 1:
        lead, const = ic[0], ic[-1]
        for p in _divisors(const):
            for q in _divisors(lead):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    acc = Fraction(0)
                    for c in coeffs:
                        acc = acc * cand + c
                    if acc == 0:
                        roots.add(cand)
    return sorted(roots)


def idempotent_decomposition(alg: FrobeniusAlgebra) -> IdempotentDecomposition:
    """Split the algebra into one-dimensional blocks over Q.

    Common eigenspaces of the basis multiplication operators are refined
    until every block is a line; each line then carries a unique idempotent.
    Raises NotScalarOnBlock when some block refuses to split (irrational
    spectrum or a nilpotent direction).
    """
    d = alg.dim
    blocks = [[tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]]
    for gen in range(d):
        e = tuple(Fraction(int(i == gen)) for i in range(d))
        newblocks = []
        for basis in blocks:
            if len(basis) == 1:
                newblocks.append(basis)
                continue
            images = [alg.multiply(e, b) for b in basis]
            k = len(basis)
            restr = []
            for img in images:
                coords = _solve_coords(basis, img)
                if coords is None:
                    raise NotScalarOnBlock(
                        "block is not invariant; algebra is not commutative"
                    )
                restr.append(coords)
            # restr[j][i]: coefficient of basis[i] in image of basis[j]
            m = [[restr[j][i] for j in range(k)] for i in range(k)]
            roots = _rational_roots(_char_poly(m))
            split = []
            total = 0
            for lam in roots:
                shifted = [
                    [m[i][j] - (lam if i == j else 0) for j in range(k)]
                    for i in range(k)
                ]
                for kv in _mat_kernel(shifted):
                    vec = tuple(
                        sum(
                            (kv[t] * basis[t][c] for t in range(k)),
                            Fraction(0),
                        )
                        for c in range(d)
                    )
                    split.append((lam, vec))
                    total += 1
            if total < k:
                raise NotScalarOnBlock(
                    "multiplication operator does not diagonalize over Q"
                )
            groups: Dict[Fraction, list] = {}
            for lam, vec in split:
                groups.setdefault(lam, []).append(vec)
            for lam in sorted(groups):
                newblocks.append(groups[lam])
        blocks = newblocks
    idems = []
    for basis in blocks:
        if len(basis) != 1:
            raise NotScalarOnBlock("basis operators leave a block unseparated")
        w = basis[0]
        w2 = alg.multiply(w, w)
        coords = _solve_coords([w], list(w2))
        if coords is None or coords[0] == 0:
            raise NotScalarOnBlock("block carries no idempotent")
        c = Fraction(1) / coords[0]
        idems.append(tuple(c * x for x in w))
    idems.sort()
    return IdempotentDecomposition(tuple(idems))


def character_on_block(alg: FrobeniusAlgebra, idem, element) -> Fraction:
    """The scalar by which `element` acts on the block of `idem`."""
    y = alg.multiply(element, idem)
    coords = _solve_coords([idem], list(y))
    if coords is None:
        raise NotScalarOnBlock("element does not act as a scalar on the block")
    return coords[0]


# -- fixtures ----------------------------------------------------------------


def diagonal_algebra(thetas, primes=None) -> FrobeniusAlgebra:
    """Product of lines e_i e_j = delta_ij e_i with trace weights theta."""
    th = [scalar_to_fraction(t) for t in thetas]
    d = len(th)
    if any(t == 0 for t in th):
        raise DegeneratePairing("zero trace weight")
    mul = [
        [[Fraction(int(i == j == k)) for j in range(d)] for i in range(d)]
        for k in range(d)
    ]
    unit = [Fraction(1)] * d
    comul = [
        [
            [Fraction(1, 1) / th[i] if i == j == k else Fraction(0) for k in range(d)]
            for j in range(d)
        ]
        for i in range(d)
    ]
    return FrobeniusAlgebra(d, mul, unit, th, comul, primes)


def hadamard_algebra(primes=None) -> FrobeniusAlgebra:
    """Componentwise product on Q^2 with plain-sum trace.

    The default prime element is P = (2, 3).
    """
    if primes is None:
        primes = {"P": (2, 3)}
    return diagonal_algebra((1, 1), primes)


def conjugate_algebra(alg: FrobeniusAlgebra, p) -> FrobeniusAlgebra:
    """The same algebra written in the basis whose columns are p."""
    d = alg.dim
    pm = [[scalar_to_fraction(x) for x in row] for row in p]
    pinv = _mat_invert(pm)
    if pinv is None:
        raise ShapeError("change of basis is singular")

    def to_old(v):
        return tuple(
            sum((pm[i][j] * v[j] for j in range(d)), Fraction(0)) for i in range(d)
        )

    def to_new(v):
        return tuple(
            sum((pinv[i][j] * v[j] for j in range(d)), Fraction(0)) for i in range(d)
        )

    basis_old = [to_old(tuple(Fraction(int(i == j)) for j in range(d))) for i in range(d)]
    mul = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod = to_new(alg.multiply(basis_old[i], basis_old[j]))
            for k in range(d):
                mul[k][i][j] = prod[k]
    unit = to_new(alg.unit)
    trace = tuple(alg.trace_of(b) for b in basis_old)
    primes = {label: to_new(vec) for label, vec in alg.primes.items()}
    return FrobeniusAlgebra(d, mul, unit, trace, None, primes)


def random_labelled_algebra(rng, max_dim: int = 3, labels=("P", "Q")) -> FrobeniusAlgebra:
    """A random split commutative Frobenius algebra with prime elements.

    Diagonal with random nonzero rational trace weights, then optionally
    rewritten in a random unimodular basis so nothing stays axis-aligned.
    """
    d = rng.randint(1, max_dim)
    thetas = []
    for _ in range(d):
        num = rng.choice([x for x in range(-4, 5) if x != 0])
        den = rng.randint(1, 4)
        thetas.append(Fraction(num, den))
    primes = {}
    for label in labels:
        primes[label] = tuple(Fraction(rng.randint(-3, 3)) for _ in range(d))
    alg = diagonal_algebra(thetas, primes)
    if rng.random() < 0.5 and d > 1:
        p = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        for _ in range(rng.randint(1, 3)):
            a, b = rng.sample(range(d), 2)
            c = rng.randint(-2, 2)
            for i in range(d):
                p[i][a] += c * p[i][b]
        alg = conjugate_algebra(alg, p)
    return alg
