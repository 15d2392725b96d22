"""Instance generator families."""

from fractions import Fraction as F

import pytest

from coflow.errors import StructuralError
from coflow.generators import (
    FAMILIES,
    generate,
    random_sparse_instance,
    single_row_instance,
)


@pytest.mark.parametrize("n,load", [(3, F(1)), (4, F(5, 2)), (6, F(1, 3))])
def test_random_sparse_load_is_exact(n, load):
    inst = random_sparse_instance(n, load, seed=3)
    assert inst.load_bound == load


def test_random_sparse_reproducible():
    a = random_sparse_instance(5, F(2), seed=11)
    b = random_sparse_instance(5, F(2), seed=11)
    c = random_sparse_instance(5, F(2), seed=12)
    assert a.demands == b.demands
    assert a.demands != c.demands


def test_single_row_concentrates_load():
    inst = single_row_instance(4, F(3))
    assert inst.load_bound == 3
    assert sum(inst.demands[0]) == 3
    assert all(x == 0 for row in inst.demands[1:] for x in row)


def test_uniform_family_entries():
    inst = generate("uniform", 4, F(2))
    assert inst.demands[0][1] == F(1, 2)
    assert inst.demands[0][0] == 0


@pytest.mark.parametrize("family", FAMILIES)
def test_families_dispatch(family):
    inst = generate(family, 3, F(1), seed=0)
    assert inst.n == 3
    assert inst.load_bound > 0


def test_unknown_family_rejected():
    with pytest.raises(StructuralError):
        generate("triangular", 3, F(1))
