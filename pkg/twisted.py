"""
coxfix
======
Twisted involutions I(theta) = {w : theta(w) = w^-1}, twisted identities
iota(theta) = {w theta(w^-1)}, the twisted absolute length l^theta and the
verifiers for their structure: rotation, halving and length lemmas, the rank
function (l + l^theta)/2 of Br(I(theta)) and Gorenstein* intervals.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import AbstractSet, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from coxeter import PASS, CoxeterMatrix, CoxeterSystem, Element, Verdict, Word, format_word
from errors import EmptyIntervalError, InputError, ParseError, PreconditionError, ResourceError
from orders import Interval, Poset, bruhat_leq, is_eulerian, is_graded
from topology import DEFAULT_MAX_FACES, gorenstein_failure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphAutomorphism:
    """Permutation of the generators (0-based images) preserving the Coxeter matrix."""

    perm: Tuple[int, ...]

    @classmethod
    def identity(cls, rank: int) -> "GraphAutomorphism":
        return cls(tuple(range(rank)))

    @classmethod
    def parse(cls, text: str, rank: int) -> "GraphAutomorphism":
        """Read `perm=3,2,1` or `3,2,1`: the 1-based image of each generator."""
        body = text.strip()
        if body.startswith("perm="):
            body = body[len("perm="):]
        try:
            images = tuple(int(tok) - 1 for tok in body.split(","))
        except ValueError:
            raise ParseError(f"bad automorphism spec {text!r}") from None
        if sorted(images) != list(range(rank)):
            raise ParseError(f"{text!r} is not a permutation of 1..{rank}")
        return cls(images)

    def validate(self, matrix: CoxeterMatrix) -> "GraphAutomorphism":
        if len(self.perm) != matrix.rank:
            raise InputError(f"automorphism has {len(self.perm)} entries for rank {matrix.rank}")
        for i in range(matrix.rank):
            for j in range(matrix.rank):
                if matrix.bond(self.perm[i], self.perm[j]) != matrix.bond(i, j):
                    raise InputError(
                        f"perm={self.spec()} does not preserve m({i + 1},{j + 1})"
                    )
        return self

    def __call__(self, s: int) -> int:
        return self.perm[s]

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """self after other."""
        return GraphAutomorphism(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def inverse(self) -> "GraphAutomorphism":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return GraphAutomorphism(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def is_involution(self) -> bool:
        return self.compose(self).is_identity()

    def order(self) -> int:
        power, k = self, 1
        while not power.is_identity():
            power, k = self.compose(power), k + 1
        return k

    def spec(self) -> str:
        return ",".join(str(p + 1) for p in self.perm)

    def __str__(self) -> str:
        return "id" if self.is_identity() else f"perm={self.spec()}"


@lru_cache(maxsize=1_000_000)
def apply_auto(theta: GraphAutomorphism, x: Element) -> Element:
    """Letterwise image of x's canonical word, re-canonicalized."""
    if theta.is_identity():
        return x
    return x.system.canonicalize(theta.perm[a] for a in x.word)


def inversion_twist(system: CoxeterSystem, theta: GraphAutomorphism) -> Callable[[Element], Element]:
    """nu = inv o theta, whose fixed points are exactly I(theta)."""
    return lambda x: system.invert(apply_auto(theta, x))


def is_twisted_involution(system: CoxeterSystem, theta: GraphAutomorphism, w: Element) -> bool:
    return apply_auto(theta, w) is system.invert(w)


def deletion_minimum(system: CoxeterSystem, word: Sequence[int], targets: AbstractSet[Element]) -> int:
    """Fewest letters to delete from `word` so the remaining product lies in `targets`.

    Dynamic program over subword products, keeping the cheapest deletion count
    per product. The remainder need not be reduced.
    """
    best: Dict[Element, int] = {system.identity: 0}
    for a in reversed(word):
        nxt = {x: d + 1 for x, d in best.items()}
        for x, d in best.items():
            y = system.left_mul(a, x)
            if d < nxt.get(y, d + 1):
                nxt[y] = d
        best = nxt
    hits = [d for x, d in best.items() if x in targets]
    return min(hits)


@dataclass
class TwistedSet:
    """I(theta) and iota(theta) inside the ball of radius `ball_radius`."""

    system: CoxeterSystem
    theta: GraphAutomorphism
    ball_radius: int
    involutions: FrozenSet[Element]
    identities: FrozenSet[Element]
    _ltheta: Dict[Element, int] = field(default_factory=dict, repr=False)

    def ltheta(self, w: Element) -> int:
        value = self._ltheta.get(w)
        if value is None:
            value = twisted_absolute_length(self.system, self.theta, w, self)
            self._ltheta[w] = value
        return value

    def rank(self, w: Element) -> int:
        """(l(w) + l^theta(w)) / 2."""
        return (w.length + self.ltheta(w)) // 2

    def sorted_involutions(self) -> List[Element]:
        return sorted(self.involutions)


def twisted_involutions(system: CoxeterSystem, theta: GraphAutomorphism, L: Optional[int]) -> FrozenSet[Element]:
    theta.validate(system.matrix)
    return frozenset(w for w in system.enumerate_ball(L) if is_twisted_involution(system, theta, w))


def twisted_identities(system: CoxeterSystem, theta: GraphAutomorphism, L: Optional[int]) -> FrozenSet[Element]:
    """{w theta(w^-1) : l(w) <= L} intersected with the L-ball (all of W for L=None)."""
    theta.validate(system.matrix)
    out = set()
    for w in system.enumerate_ball(L):
        x = system.multiply(w, apply_auto(theta, system.invert(w)))
        if L is None or x.length <= L:
            out.add(x)
    return frozenset(out)


def twisted_set(system: CoxeterSystem, theta: GraphAutomorphism, L: Optional[int]) -> TwistedSet:
    """I(theta) and iota(theta) in the L-ball; L=None takes all of a finite W."""
    involutions = twisted_involutions(system, theta, L)
    identities = twisted_identities(system, theta, L)
    radius = L if L is not None else max(w.length for w in involutions)
    result = TwistedSet(system, theta, radius, involutions=involutions, identities=identities)
    logger.info("%s %s radius %d: |I|=%d |iota|=%d", system.name, theta, radius,
                len(involutions), len(identities))
    return result


def twisted_absolute_length(system: CoxeterSystem, theta: GraphAutomorphism, w: Element,
                            iota: Union[TwistedSet, AbstractSet[Element]]) -> int:
    """l^theta(w) by deletion from the canonical reduced word of w.

    Every subword product has length <= l(w), so iota must be complete up to
    that radius. A plain set is taken to be complete.
    """
    system.check_element(w)
    if isinstance(iota, TwistedSet):
        if iota.theta != theta:
            raise InputError("twisted set was built for a different automorphism")
        if w.length > iota.ball_radius:
            raise ResourceError(
                f"iota known up to radius {iota.ball_radius}, need {w.length} for {w!r}"
            )
        identities = iota.identities
    else:
        identities = iota
    return deletion_minimum(system, w.word, identities)


def verify_welldefined_ltheta(system: CoxeterSystem, theta: GraphAutomorphism, w: Element,
                              iota: Union[TwistedSet, AbstractSet[Element]]) -> Verdict:
    """Deletion minimum agrees over every reduced word of w."""
    identities = iota.identities if isinstance(iota, TwistedSet) else iota
    values = {word: deletion_minimum(system, word, identities) for word in system.reduced_expressions(w)}
    if len(set(values.values())) == 1:
        return PASS
    return Verdict(False, {format_word(word): v for word, v in values.items()})


def _twisted(system, theta, L, twisted: Optional[TwistedSet]) -> TwistedSet:
    if twisted is not None and twisted.ball_radius >= L and twisted.theta == theta:
        return twisted
    return twisted_set(system, theta, L)


def verify_rotation_lemma(system: CoxeterSystem, theta: GraphAutomorphism, L: int,
                          twisted: Optional[TwistedSet] = None) -> Verdict:
    """s1...sk in iota implies s2...sk theta(s1) in iota, for any expression of w.

    The rotated element is s1 w theta(s1), so every generator s1 is tried, not
    only left descents. Images longer than the known radius are skipped.
    """
    ts = _twisted(system, theta, L, twisted)
    for w in sorted(ts.identities):
        if w.length > L:
            continue
        for s in range(system.rank):
            rotated = system.right_mul(system.left_mul(s, w), theta(s))
            if rotated.length <= ts.ball_radius and rotated not in ts.identities:
                return Verdict(False, (w, s, rotated))
    return PASS


def verify_halving_lemma(system: CoxeterSystem, theta: GraphAutomorphism, L: int,
                         twisted: Optional[TwistedSet] = None) -> Verdict:
    """Each w in iota equals x theta(x^-1) for some x with l(w) = 2 l(x)."""
    ts = _twisted(system, theta, L, twisted)
    halves: Dict[Element, Element] = {}
    for x in system.enumerate_ball(L // 2):
        y = system.multiply(x, apply_auto(theta, system.invert(x)))
        if y.length == 2 * x.length:
            halves.setdefault(y, x)
    for w in sorted(ts.identities):
        if w.length <= L and w not in halves:
            return Verdict(False, w)
    return PASS


def verify_length_lemma(system: CoxeterSystem, theta: GraphAutomorphism, L: int,
                        twisted: Optional[TwistedSet] = None) -> Verdict:
    """l^theta(s w theta(s)) = l^theta(w) whenever w = s ... theta(s) reduced."""
    ts = _twisted(system, theta, L, twisted)
    for w in ts.sorted_involutions():
        if w.length > L:
            continue
        for s in sorted(w.descents):
            v = system.right_mul(system.left_mul(s, w), theta(s))
            if v.length == w.length - 2 and ts.ltheta(v) != ts.ltheta(w):
                return Verdict(False, (w, s, ts.ltheta(w), ts.ltheta(v)))
    return PASS


def verify_parity(twisted: TwistedSet) -> Verdict:
    """l^theta(w) = l(w) mod 2 on I(theta)."""
    for w in twisted.sorted_involutions():
        if (twisted.ltheta(w) - w.length) % 2:
            return Verdict(False, w)
    return PASS


def palindromic_word(system: CoxeterSystem, theta: GraphAutomorphism, w: Element) -> Optional[Word]:
    """A reduced word s1...sk theta(sk)...theta(s1) for a twisted identity, or None."""
    left: List[int] = []
    x = w
    while x.length:
        for s in sorted(x.descents):
            y = system.right_mul(system.left_mul(s, x), theta(s))
            if y.length == x.length - 2:
                left.append(s)
                x = y
                break
        else:
            return None
    return tuple(left) + tuple(theta(s) for s in reversed(left))


def verify_identity_words(system: CoxeterSystem, theta: GraphAutomorphism, twisted: TwistedSet) -> Verdict:
    """Every twisted identity has a reduced palindromic word."""
    for w in sorted(twisted.identities):
        word = palindromic_word(system, theta, w)
        if word is None or len(word) != w.length or system.canonicalize(word) is not w:
            return Verdict(False, w)
    return PASS


def covering_witness(system: CoxeterSystem, theta: GraphAutomorphism, w: Element,
                     twisted: TwistedSet) -> Optional[Tuple[int, Element]]:
    """(case, v) with v covered by w in Br(I(theta)).

    Case 1: w = s ... theta(s) reduced; v = s w theta(s), l drops by 2, l^theta equal.
    Case 2: otherwise; v = s w for a left descent s with l^theta(v) = l^theta(w) - 1.
    """
    for s in sorted(w.descents):
        v = system.right_mul(system.left_mul(s, w), theta(s))
        if v.length == w.length - 2:
            return 1, v
    target = twisted.ltheta(w) - 1
    for s in sorted(w.descents):
        v = system.left_mul(s, w)
        if is_twisted_involution(system, theta, v) and twisted.ltheta(v) == target:
            return 2, v
    return None


def verify_covering_cases(system: CoxeterSystem, theta: GraphAutomorphism, poset: Poset,
                          twisted: TwistedSet) -> Verdict:
    """Each non-identity w covers its case witness with the expected l, l^theta drops."""
    for w in poset.elements:
        if w.length == 0:
            continue
        found = covering_witness(system, theta, w, twisted)
        if found is None:
            return Verdict(False, (w, "no witness"))
        case, v = found
        drop = (2, 0) if case == 1 else (1, 1)
        if (w.length - v.length, twisted.ltheta(w) - twisted.ltheta(v)) != drop:
            return Verdict(False, (w, v, case))
        if v in poset and not poset.cover_matrix[poset.index[v], poset.index[w]]:
            return Verdict(False, (w, v, case, "not a cover"))
    return PASS


def twisted_bruhat_poset(system: CoxeterSystem, twisted: TwistedSet) -> Poset:
    """Br(I(theta)) restricted to the ball."""
    elements = twisted.sorted_involutions()
    return Poset(elements, leq=lambda a, b: bruhat_leq(system, a, b),
                 monotone={x: x.length for x in elements})


def build_twisted_bruhat(system: CoxeterSystem, theta: GraphAutomorphism, u: Element, v: Element,
                         involutions: Optional[Iterable[Element]] = None) -> Interval:
    """[u, v] in the subposet of Br(W) induced by I(theta)."""
    for x in (u, v):
        if not is_twisted_involution(system, theta, x):
            raise PreconditionError(f"{x!r} is not a twisted involution", witness=x)
    if not bruhat_leq(system, u, v):
        raise EmptyIntervalError(f"{u!r} is not below {v!r}")
    universe = involutions if involutions is not None else twisted_involutions(system, theta, v.length)
    elements = sorted(
        x for x in universe
        if u.length <= x.length <= v.length and bruhat_leq(system, u, x) and bruhat_leq(system, x, v)
    )
    return Interval(elements, u, v, leq=lambda a, b: bruhat_leq(system, a, b),
                    monotone={x: x.length for x in elements})


def verify_rank_theorem(system: CoxeterSystem, theta: GraphAutomorphism, interval: Interval,
                        twisted: TwistedSet) -> Verdict:
    """rho(w) - rho(u) = [(l(w) + l^theta(w)) - (l(u) + l^theta(u))] / 2 on [u, v]."""
    graded, rho = is_graded(interval)
    if not graded:
        return Verdict(False, ("not graded", rho))
    u = interval.bottom
    base = u.length + twisted.ltheta(u)
    for w in interval.elements:
        total = w.length + twisted.ltheta(w) - base
        if total % 2 or total // 2 != rho[w]:
            return Verdict(False, (w, rho[w], twisted.ltheta(w)))
    return PASS


def verify_gorenstein_theorem(system: CoxeterSystem, theta: GraphAutomorphism, intervals: Iterable[Interval],
                              max_faces: int = DEFAULT_MAX_FACES) -> Verdict:
    """Graded, Eulerian and top-dimensional Z2-sphere open intervals throughout."""
    for interval in intervals:
        failure = gorenstein_failure(interval, max_faces)
        if failure is not None:
            return Verdict(False, (interval, failure))
        if not is_eulerian(interval):
            return Verdict(False, (interval, "not eulerian"))
    return PASS


def verify_fixed_points_match(system: CoxeterSystem, theta: GraphAutomorphism, ambient: Interval,
                              twisted_interval: Interval) -> Verdict:
    """The twisted interval is the fixed subposet of inv o theta on the ambient Bruhat interval."""
    nu = inversion_twist(system, theta)
    fixed = {x for x in ambient.elements if nu(x) is x}
    if fixed != set(twisted_interval.elements):
        return Verdict(False, sorted(fixed.symmetric_difference(twisted_interval.elements)))
    for a in twisted_interval.elements:
        for b in twisted_interval.elements:
            if ambient.leq(a, b) != twisted_interval.leq(a, b):
                return Verdict(False, (a, b))
    return PASS
