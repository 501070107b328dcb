import pytest

from conftest import make_system
from coxeter import PASS
from errors import InputError, ParseError, PreconditionError, ResourceError
from orders import build_interval, is_eulerian, is_graded
from topology import smith_fixed_check
from twisted import (
    GraphAutomorphism,
    TwistedSet,
    apply_auto,
    build_twisted_bruhat,
    covering_witness,
    deletion_minimum,
    inversion_twist,
    is_twisted_involution,
    palindromic_word,
    twisted_absolute_length,
    twisted_bruhat_poset,
    twisted_identities,
    twisted_involutions,
    twisted_set,
    verify_covering_cases,
    verify_fixed_points_match,
    verify_gorenstein_theorem,
    verify_halving_lemma,
    verify_identity_words,
    verify_length_lemma,
    verify_parity,
    verify_rank_theorem,
    verify_rotation_lemma,
    verify_welldefined_ltheta,
)


def theta_for(system, spec=None):
    if spec is None:
        return GraphAutomorphism.identity(system.rank)
    return GraphAutomorphism.parse(spec, system.rank).validate(system.matrix)


# ----- graph automorphisms -----


def test_parse_and_validate(a3):
    theta = GraphAutomorphism.parse("perm=3,2,1", 3)
    assert theta.perm == (2, 1, 0)
    assert GraphAutomorphism.parse("3,2,1", 3) == theta
    assert theta.validate(a3.matrix) is theta
    assert str(theta) == "perm=3,2,1"
    assert str(GraphAutomorphism.identity(3)) == "id"
    assert theta.is_involution()
    with pytest.raises(InputError):
        GraphAutomorphism.parse("2,1,3", 3).validate(a3.matrix)
    with pytest.raises(ParseError):
        GraphAutomorphism.parse("1,1,2", 3)
    with pytest.raises(ParseError):
        GraphAutomorphism.parse("perm=a,b,c", 3)


def test_triality(d4):
    triality = theta_for(d4, "3,2,4,1")
    assert triality.order() == 3
    assert not triality.is_involution()
    assert triality.compose(triality.inverse()).is_identity()


def test_apply_auto(a3):
    theta = theta_for(a3, "3,2,1")
    x = a3.canonicalize([0, 1])
    assert apply_auto(theta, x) is a3.canonicalize([2, 1])
    assert apply_auto(theta, apply_auto(theta, x)) is x


# ----- I(theta) and iota(theta) -----


def test_a2_involutions_and_identities(a2):
    ident = theta_for(a2)
    swap = theta_for(a2, "2,1")
    assert len(twisted_involutions(a2, ident, None)) == 4
    assert twisted_identities(a2, ident, None) == {a2.identity}
    s12, s21 = a2.canonicalize([0, 1]), a2.canonicalize([1, 0])
    w0 = a2.longest_element([0, 1])
    assert twisted_involutions(a2, swap, None) == {a2.identity, s12, s21, w0}
    assert twisted_identities(a2, swap, None) == {a2.identity, s12, s21}


@pytest.mark.parametrize("spec", [None, "3,2,1"])
def test_a3_has_ten_twisted_involutions(a3, spec):
    assert len(twisted_involutions(a3, theta_for(a3, spec), None)) == 10


def test_ltheta_values_in_a2(a2):
    swap = theta_for(a2, "2,1")
    ts = twisted_set(a2, swap, None)
    w0 = a2.longest_element([0, 1])
    assert ts.ball_radius == 3
    assert ts.ltheta(w0) == 1
    assert ts.rank(w0) == 2
    assert ts.ltheta(a2.canonicalize([0, 1])) == 0
    assert ts.rank(a2.canonicalize([0, 1])) == 1


def test_ltheta_is_absolute_length_for_trivial_theta(a3):
    ts = twisted_set(a3, theta_for(a3), None)
    elements = a3.all_elements()
    for w in ts.sorted_involutions():
        assert ts.ltheta(w) == a3.absolute_length(w, elements)


def test_deletion_minimum(a3):
    targets = frozenset({a3.identity})
    assert deletion_minimum(a3, (0, 1, 0), targets) == 1
    assert deletion_minimum(a3, (), targets) == 0
    assert deletion_minimum(a3, (0, 1, 2), targets) == 3


def test_ltheta_needs_large_enough_ball(a3):
    theta = theta_for(a3)
    small = twisted_set(a3, theta, 2)
    with pytest.raises(ResourceError):
        twisted_absolute_length(a3, theta, a3.longest_element(range(3)), small)
    with pytest.raises(InputError):
        twisted_absolute_length(a3, theta_for(a3, "3,2,1"), a3.identity, small)


# ----- lemmas -----


@pytest.mark.parametrize(
    "name, spec, L",
    [
        ("A3", None, 6), ("A3", "3,2,1", 6), ("B3", None, 6), ("D4", "1,2,4,3", 6),
        ("affA2", "1,3,2", 6), ("I2(5)", "2,1", 5),
    ],
)
def test_lemmas_hold(name, spec, L):
    system = make_system(name)
    theta = theta_for(system, spec)
    ts = twisted_set(system, theta, L)
    assert verify_rotation_lemma(system, theta, L, ts) is PASS
    assert verify_halving_lemma(system, theta, L, ts) is PASS
    assert verify_length_lemma(system, theta, L, ts) is PASS
    assert verify_parity(ts) is PASS
    assert verify_identity_words(system, theta, ts) is PASS


def test_rotation_uses_every_generator(a2):
    theta = theta_for(a2, "2,1")
    full = twisted_set(a2, theta, 3)
    truncated = TwistedSet(a2, theta, 3, involutions=full.involutions,
                           identities=frozenset([a2.identity]))
    verdict = verify_rotation_lemma(a2, theta, 3, truncated)
    assert not verdict
    assert verdict.witness == (a2.identity, 0, a2.canonicalize([0, 1]))


def test_ltheta_independent_of_reduced_word(a3):
    theta = theta_for(a3, "3,2,1")
    ts = twisted_set(a3, theta, None)
    for w in ts.sorted_involutions():
        assert verify_welldefined_ltheta(a3, theta, w, ts)


def test_palindromic_word(a2):
    swap = theta_for(a2, "2,1")
    assert palindromic_word(a2, swap, a2.canonicalize([0, 1])) == (0, 1)
    assert palindromic_word(a2, swap, a2.identity) == ()
    assert palindromic_word(a2, swap, a2.longest_element([0, 1])) is None


# ----- Br(I(theta)) -----


def test_covering_witness_cases(a2):
    swap = theta_for(a2, "2,1")
    ts = twisted_set(a2, swap, None)
    s12, s21 = a2.canonicalize([0, 1]), a2.canonicalize([1, 0])
    assert covering_witness(a2, swap, s12, ts) == (1, a2.identity)
    assert covering_witness(a2, swap, a2.longest_element([0, 1]), ts) == (2, s21)


@pytest.mark.parametrize("name, spec", [("A3", None), ("A3", "3,2,1"), ("B3", None), ("H3", None)])
def test_rank_theorem_on_finite_groups(name, spec):
    system = make_system(name)
    theta = theta_for(system, spec)
    ts = twisted_set(system, theta, None)
    poset = twisted_bruhat_poset(system, ts)
    w0 = system.longest_element(range(system.rank))
    interval = poset.interval(system.identity, w0)
    assert verify_rank_theorem(system, theta, interval, ts) is PASS
    assert verify_covering_cases(system, theta, poset, ts) is PASS


def test_twisted_intervals_are_gorenstein(a3):
    theta = theta_for(a3, "3,2,1")
    ts = twisted_set(a3, theta, None)
    poset = twisted_bruhat_poset(a3, ts)
    intervals = list(poset.intervals())
    assert verify_gorenstein_theorem(a3, theta, intervals) is PASS
    w0 = a3.longest_element(range(3))
    assert is_eulerian(build_twisted_bruhat(a3, theta, a3.identity, w0))


def test_affine_twisted_intervals(aff_a2):
    theta = theta_for(aff_a2, "1,3,2")
    L = 5
    ts = twisted_set(aff_a2, theta, L)
    tops = [w for w in ts.sorted_involutions() if w.length == L - 1]
    assert tops
    for top in tops[:3]:
        interval = build_twisted_bruhat(aff_a2, theta, aff_a2.identity, top, ts.involutions)
        assert verify_rank_theorem(aff_a2, theta, interval, ts) is PASS
        assert verify_gorenstein_theorem(aff_a2, theta, [interval]) is PASS


def test_build_twisted_bruhat_preconditions(a3):
    theta = theta_for(a3)
    with pytest.raises(PreconditionError):
        build_twisted_bruhat(a3, theta, a3.identity, a3.canonicalize([0, 1]))


def test_fixed_points_of_inversion_twist(a3):
    theta = theta_for(a3, "3,2,1")
    w0 = a3.longest_element(range(3))
    ambient = build_interval("bruhat", a3.all_elements(), a3.identity, w0)
    twisted = build_twisted_bruhat(a3, theta, a3.identity, w0)
    assert verify_fixed_points_match(a3, theta, ambient, twisted) is PASS
    nu = inversion_twist(a3, theta)
    assert all(is_twisted_involution(a3, theta, x) == (nu(x) is x) for x in ambient.elements)
    ok, r = smith_fixed_check(ambient, nu)
    assert ok
    graded, rho = is_graded(twisted)
    assert graded
    assert r == rho[w0] - 2


def brute_force_ltheta(system, word, identities):
    best = len(word)
    for mask in range(1 << len(word)):
        kept = [a for k, a in enumerate(word) if not mask >> k & 1]
        if system.canonicalize(kept) in identities:
            best = min(best, bin(mask).count("1"))
    return best


@pytest.mark.parametrize("name, spec", [("A3", "3,2,1"), ("B3", None), ("I2(6)", "2,1")])
def test_ltheta_against_subset_oracle(name, spec):
    system = make_system(name)
    theta = theta_for(system, spec)
    ts = twisted_set(system, theta, None)
    for w in ts.sorted_involutions():
        assert ts.ltheta(w) == brute_force_ltheta(system, w.word, ts.identities)
