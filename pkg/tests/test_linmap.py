"""Sparse exact linear maps on tensor powers."""

import json
from fractions import Fraction as F

import pytest

from cob3 import LinearMap, identity_map, permutation_map


def test_compose_and_tensor_arities():
    a = LinearMap(1, 2, 2, {(0, 0): F(1), (3, 1): F(2)})
    b = LinearMap(2, 1, 2, {(0, 0): F(1), (1, 3): F(5)})
    ab = b.compose(a)
    assert (ab.dom_arity, ab.cod_arity) == (1, 1)
    assert ab.entries == {(0, 0): F(1), (1, 1): F(10)}
    t = a.tensor(b)
    assert (t.dom_arity, t.cod_arity) == (3, 3)
    assert t.entries[(0 * 2 + 0, 0 * 4 + 0)] == F(1)
    assert t.entries[(3 * 2 + 1, 1 * 4 + 3)] == F(10)


def test_compose_requires_matching_arity():
    a = identity_map(2, 2)
    b = identity_map(2, 3)
    with pytest.raises(ValueError):
        a.compose(b)
    with pytest.raises(ValueError):
        a.tensor(LinearMap(1, 1, 3, {}))  # mixed base dimensions


def test_permutation_output_slot_reads_input_slot():
    # output slot j carries input slot perm[j]
    p = permutation_map(2, (1, 0, 2))
    col = 0 * 4 + 1 * 2 + 0  # (0, 1, 0)
    row = 1 * 4 + 0 * 2 + 0  # (1, 0, 0)
    assert p.entries[(row, col)] == F(1)
    assert p.compose(permutation_map(2, (1, 0, 2))) == identity_map(2, 3)


def test_scalar_only_for_closed_maps():
    s = LinearMap(0, 0, 2, {(0, 0): F(7, 3)})
    assert s.scalar() == F(7, 3)
    assert LinearMap(0, 0, 2, {}).scalar() == 0
    with pytest.raises(ValueError):
        identity_map(2, 1).scalar()


def test_equality_ignores_stored_zeros():
    a = LinearMap(1, 1, 2, {(0, 0): F(1), (1, 1): F(0)})
    b = LinearMap(1, 1, 2, {(0, 0): F(1)})
    assert a == b
    assert hash(a) == hash(b)


def test_json_uses_fraction_strings():
    lm = LinearMap(1, 1, 2, {(0, 1): F(-3, 7), (1, 0): F(4)})
    data = json.loads(lm.to_json())
    assert data["d"] == 2
    assert ["0", "1", "-3/7"][2] in [str(e[2]) for e in data["entries"]]
    assert LinearMap.from_json(lm.to_json()) == lm


def test_out_of_range_entry_rejected():
    with pytest.raises(ValueError):
        LinearMap(1, 1, 2, {(2, 0): F(1)})
    with pytest.raises(ValueError):
        LinearMap(1, 1, 2, {(0, -1): F(1)})
