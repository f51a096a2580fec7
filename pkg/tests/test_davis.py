import pytest

from coxinv.davis import (bestvina_support, davis_chamber, is_type_PM,
                          nerve_complex, vcd_real)
from coxinv.errors import NoWitness
from coxinv.homology import betti_numbers, verify_boundary_squares_to_zero


# ---------------------------------------------------------------------------
# nerve

def test_nerve_pentagon_is_circle(pentagon):
    N = nerve_complex(pentagon)
    assert N.dim == 1
    assert len(N.k_faces(0)) == 5 and len(N.k_faces(1)) == 5
    assert betti_numbers(N) == [1, 1]


def test_nerve_333_is_circle(triangle_333):
    N = nerve_complex(triangle_333)
    assert betti_numbers(N) == [1, 1]
    assert N.dim == 1


def test_nerve_path(path_2edge):
    N = nerve_complex(path_2edge)
    assert N.dim == 1
    assert betti_numbers(N) == [1, 0]


def test_nerve_finite_is_simplex(a2):
    N = nerve_complex(a2)
    assert N.dim == 1
    assert len(N.k_faces(1)) == 1
    assert N.is_cone()


# ---------------------------------------------------------------------------
# chamber and mirrors

def test_chamber_is_contractible_cone(pentagon, triangle_333, a2):
    for M in (pentagon, triangle_333, a2):
        ch = davis_chamber(M)
        assert ch.complex.is_cone()
        assert betti_numbers(ch.complex) == [1] + [0] * ch.complex.dim
        assert verify_boundary_squares_to_zero(ch.complex)


def test_mirrors_pentagon(pentagon):
    ch = davis_chamber(pentagon)
    # each mirror: the vertex {s}, two pair-vertices, and edges between:
    # a path of 3 vertices, contractible
    for s in range(5):
        mir = ch.mirrors[s]
        assert betti_numbers(mir) == [1, 0]
        assert len(mir.k_faces(0)) == 3
    full = ch.mirror_union(range(5))
    # union of all mirrors: the subdivided nerve circle
    assert betti_numbers(full) == [1, 1]


def test_mirror_union_empty(pentagon):
    ch = davis_chamber(pentagon)
    assert len(ch.mirror_union(())) == 0


# ---------------------------------------------------------------------------
# vcd

def test_vcd_finite_zero(a2):
    r = vcd_real(a2)
    assert r.value == 0
    assert r.spherical_value == 0


def test_vcd_dihedral(dihedral_inf):
    r = vcd_real(dihedral_inf)
    assert r.value == 1
    assert any(w.subset == (0, 1) for w in r.witnesses)
    # {s,u} is not spherical here, but the spherical maximum agrees? no:
    # only T = S realizes degree 1, and it is not spherical
    assert r.spherical_value == 0
    assert all(not w.spherical for w in r.witnesses)


def test_vcd_333(triangle_333):
    r = vcd_real(triangle_333)
    assert r.value == 2
    assert any(w.subset == (0, 1, 2) for w in r.witnesses)


def test_vcd_pentagon(pentagon):
    r = vcd_real(pentagon)
    assert r.value == 2
    assert any(w.subset == (0, 1, 2, 3, 4) for w in r.witnesses)
    assert all(not w.spherical for w in r.witnesses)


def test_vcd_path(path_2edge):
    r = vcd_real(path_2edge)
    assert r.value == 1


def test_vcd_square_product(square_product):
    r = vcd_real(square_product)
    assert r.value == 2


def test_vcd_spherical_only_subsets(pentagon):
    r = vcd_real(pentagon, subsets="spherical")
    assert r.value == r.spherical_value


# ---------------------------------------------------------------------------
# support face

def test_bestvina_pentagon(pentagon):
    b = bestvina_support(pentagon)
    assert b.F0 == ()
    assert b.S0 == (0, 1, 2, 3, 4)
    assert b.degree == 2


def test_bestvina_333(triangle_333):
    b = bestvina_support(triangle_333)
    assert b.F0 == ()
    assert b.S0 == (0, 1, 2)


def test_bestvina_path_middle_vertex(path_2edge):
    b = bestvina_support(path_2edge)
    assert b.F0 == (1,)
    assert b.S0 == (0, 2)
    assert b.degree == 1


def test_bestvina_dihedral(dihedral_inf):
    b = bestvina_support(dihedral_inf)
    assert b.F0 == ()
    assert b.S0 == (0, 1)


def test_bestvina_finite_raises(a2):
    with pytest.raises(NoWitness):
        bestvina_support(a2)


# ---------------------------------------------------------------------------
# nerve pseudomanifold verdicts

def test_pm_verdicts(pentagon, triangle_333, path_2edge):
    assert is_type_PM(pentagon).is_pm
    assert is_type_PM(triangle_333).is_pm
    assert not is_type_PM(path_2edge).is_pm
