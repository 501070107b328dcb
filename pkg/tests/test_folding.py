from dataclasses import replace

import pytest

from catalog import catalog
from conftest import make_system
from coxeter import INF, PASS
from errors import ResourceError
from folding import (
    AutomorphismGroup,
    check_length_bookkeeping,
    element_order,
    exponents,
    fixed_subgroup,
    fold,
    matrices_isomorphic,
    orbits,
    phi,
    poincare_polynomial,
    verify_bruhat_iso,
    verify_chain_transport,
    verify_crisp,
    verify_fixed_subgroup,
    verify_homomorphism,
    verify_w0_theorem,
    verify_weak_iso,
    w0_conjugation,
)


def group_of(system, *specs):
    return AutomorphismGroup.from_specs(list(specs), system.matrix)


# ----- automorphism groups and orbits -----


def test_group_closure(d4):
    assert len(group_of(d4)) == 1
    assert group_of(d4).is_trivial()
    assert len(group_of(d4, "1,2,4,3")) == 2
    s3 = group_of(d4, "1,2,4,3", "3,2,1,4")
    assert len(s3) == 6
    assert orbits(s3, 4) == [frozenset({0, 2, 3}), frozenset({1})]
    assert str(group_of(d4, "1,2,4,3")) == "perm=1,2,4,3"


def test_fixes(a3):
    G = group_of(a3, "3,2,1")
    assert G.fixes(a3.canonicalize([0, 2]))
    assert G.fixes(a3.canonicalize([1]))
    assert not G.fixes(a3.canonicalize([0]))


def test_element_order(a3, aff_a2):
    assert element_order(a3, a3.identity) == 1
    assert element_order(a3, a3.canonicalize([0, 1])) == 3
    assert element_order(a3, a3.canonicalize([0, 1, 2])) == 4
    assert element_order(aff_a2, aff_a2.canonicalize([0, 1, 2]), cap=30) == INF


# ----- folded matrices -----


@pytest.mark.parametrize(
    "name, specs, expected",
    [
        ("A3", ["3,2,1"], "B2"),
        ("A5", ["5,4,3,2,1"], "B3"),
        ("D4", ["1,2,4,3"], "B3"),
        ("D5", ["1,2,3,5,4"], "B4"),
        ("D4", ["1,2,4,3", "3,2,1,4"], "I2(6)"),
        ("A2", ["2,1"], "A1"),
    ],
)
def test_fold_matrix(name, specs, expected):
    system = make_system(name)
    folded = fold(system, group_of(system, *specs))
    assert matrices_isomorphic(folded.tilde_matrix, catalog(expected))


def test_trivial_fold_is_the_group_itself(b3):
    folded = fold(b3, group_of(b3))
    assert folded.tilde_matrix == b3.matrix
    assert len(folded.tilde.all_elements()) == 48


def test_matrices_isomorphic():
    assert matrices_isomorphic(catalog("B3"), catalog("B3").permuted((2, 1, 0)))
    assert not matrices_isomorphic(catalog("A3"), catalog("B3"))
    assert not matrices_isomorphic(catalog("A3"), catalog("A4"))


def test_fold_drops_infinite_orbits(aff_a2):
    folded = fold(aff_a2, group_of(aff_a2, "1,3,2"))
    assert folded.orbits == [frozenset({0}), frozenset({1, 2})]
    assert folded.tilde_matrix.is_infinite(0, 1)
    assert folded.orbit_label(1) == "{2,3}"
    infinite = make_system("I2(inf)")
    with pytest.raises(ResourceError):
        fold(infinite, group_of(infinite, "2,1"))


# ----- phi -----


def test_phi_on_generators(a3):
    folded = fold(a3, group_of(a3, "3,2,1"))
    gens = folded.tilde.generators
    assert phi(folded, gens[0]) is a3.canonicalize([0, 2])
    assert phi(folded, gens[1]) is a3.canonicalize([1])
    assert phi(folded, folded.tilde.identity) is a3.identity


@pytest.mark.parametrize(
    "name, specs",
    [
        ("A3", ["3,2,1"]),
        ("A5", ["5,4,3,2,1"]),
        ("D4", ["1,2,4,3"]),
        ("D4", ["1,2,4,3", "3,2,1,4"]),
        ("A4", ["4,3,2,1"]),
    ],
)
def test_fold_isomorphisms(name, specs):
    system = make_system(name)
    G = group_of(system, *specs)
    folded = fold(system, G)
    assert verify_fixed_subgroup(system, G, folded) is PASS
    assert verify_homomorphism(folded) is PASS
    assert verify_crisp(folded) is PASS
    assert verify_weak_iso(system, G, folded) is PASS
    assert verify_bruhat_iso(system, G, folded) is PASS
    assert verify_chain_transport(folded) is PASS
    assert check_length_bookkeeping(system, folded) is PASS


def test_crisp_catches_a_collapsing_image(a3):
    folded = fold(a3, group_of(a3, "3,2,1"))
    s1 = a3.generators[0]
    broken = replace(folded, phi_gen=[folded.phi_gen[0], s1], _phi={})
    verdict = verify_crisp(broken)
    assert not verdict
    assert verdict.witness == (folded.tilde.canonicalize([0, 1]), (0, 1))


def test_fixed_subgroup_size(a3):
    assert len(fixed_subgroup(a3, group_of(a3, "3,2,1"))) == 8


def test_partial_fixed_subgroup_on_affine_group(aff_a2):
    G = group_of(aff_a2, "1,3,2")
    folded = fold(aff_a2, G)
    verdict = verify_fixed_subgroup(aff_a2, G, folded, radius=6)
    assert verdict
    assert "partial" in verdict.witness


# ----- exponents and w0 -----


def test_poincare_polynomial(a2):
    assert poincare_polynomial(a2).tolist() == [1, 2, 2, 1]


@pytest.mark.parametrize(
    "name, expected",
    [("A2", [1, 2]), ("A3", [1, 2, 3]), ("B3", [1, 3, 5]), ("D4", [1, 3, 3, 5]),
     ("H3", [1, 5, 9]), ("I2(5)", [1, 4]), ("A4", [1, 2, 3, 4])],
)
def test_exponents(name, expected):
    assert exponents(make_system(name)) == expected


def test_w0_conjugation(a3, b3, d4):
    assert w0_conjugation(a3).spec() == "3,2,1"
    assert w0_conjugation(b3).is_identity()
    assert w0_conjugation(d4).is_identity()
    assert w0_conjugation(make_system("I2(5)")).spec() == "2,1"
    assert w0_conjugation(make_system("D5")).spec() == "1,2,3,5,4"


@pytest.mark.parametrize(
    "name, minus",
    [
        ("A2", "A1"), ("A3", "B2"), ("A4", "B2"), ("A5", "B3"), ("B3", "B3"), ("D4", "D4"),
        ("H3", "H3"), ("I2(5)", "A1"), ("I2(7)", "A1"), ("I2(8)", "I2(8)"),
    ],
)
def test_w0_theorem(name, minus):
    verdict = verify_w0_theorem(make_system(name))
    assert verdict
    assert verdict.witness.minus_type == minus
