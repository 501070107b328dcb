"""
coxfix
======
Folding a Coxeter system along a group G of diagram automorphisms.

The folded generators are the G-orbits J with W_J finite; s~_J maps to the
longest element w0(J). The Coxeter matrix of the folded system is measured
in W (order of w0(J) w0(K)), never looked up. Also: exponents from the
Poincare polynomial, conjugation by w0 and the W^- identification.
"""

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from catalog import catalog, match_exponents
from coxeter import INF, PASS, CoxeterMatrix, CoxeterSystem, Element, Verdict
from errors import InfiniteParabolicError, InternalError, ResourceError, UnsupportedTypeError
from orders import bruhat_leq, weak_leq
from twisted import GraphAutomorphism, apply_auto

logger = logging.getLogger(__name__)

DEFAULT_ORDER_CAP = 100


class AutomorphismGroup:
    """Closure of a set of diagram automorphisms under composition."""

    def __init__(self, generators: Sequence[GraphAutomorphism], rank: int):
        self.rank = rank
        self.generators = list(generators) or [GraphAutomorphism.identity(rank)]
        identity = GraphAutomorphism.identity(rank)
        elements = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for g in frontier:
                for h in self.generators:
                    gh = h.compose(g)
                    if gh not in elements:
                        elements.add(gh)
                        nxt.append(gh)
            frontier = nxt
        self.elements: List[GraphAutomorphism] = sorted(elements, key=lambda g: g.perm)

    @classmethod
    def from_specs(cls, specs: Sequence[str], matrix: CoxeterMatrix) -> "AutomorphismGroup":
        gens = [GraphAutomorphism.parse(spec, matrix.rank).validate(matrix) for spec in specs]
        return cls(gens, matrix.rank)

    def __len__(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def fixes(self, x: Element) -> bool:
        return all(apply_auto(g, x) is x for g in self.generators)

    def __str__(self) -> str:
        return ";".join(str(g) for g in self.generators)


def orbits(G: AutomorphismGroup, rank: int) -> List[FrozenSet[int]]:
    """Partition of the generators into G-orbits, ordered by least member."""
    seen: Set[int] = set()
    out = []
    for s in range(rank):
        if s in seen:
            continue
        orbit = frozenset(g(s) for g in G.elements)
        seen |= orbit
        out.append(orbit)
    return out


def element_order(system: CoxeterSystem, x: Element, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Order of x in W, or INF when it exceeds `cap`."""
    power, k = x, 1
    while power is not system.identity:
        if k >= cap:
            return INF
        power, k = system.multiply(x, power), k + 1
    return k


@dataclass
class FoldedSystem:
    """(W~, S~) together with the generator images of phi."""

    base: CoxeterSystem
    group: AutomorphismGroup
    orbits: List[FrozenSet[int]]
    tilde_matrix: CoxeterMatrix
    phi_gen: List[Element]
    tilde: CoxeterSystem
    _phi: Dict[Element, Element] = field(default_factory=dict, repr=False)

    def orbit_label(self, k: int) -> str:
        return "{" + ",".join(str(s + 1) for s in sorted(self.orbits[k])) + "}"


def fold(system: CoxeterSystem, G: AutomorphismGroup, order_cap: int = DEFAULT_ORDER_CAP) -> FoldedSystem:
    kept: List[FrozenSet[int]] = []
    images: List[Element] = []
    for orbit in orbits(G, system.rank):
        try:
            images.append(system.longest_element(orbit))
        except InfiniteParabolicError:
            logger.info("orbit %s dropped: W_J infinite", sorted(s + 1 for s in orbit))
            continue
        kept.append(orbit)
    if not kept:
        raise ResourceError("no G-orbit generates a finite parabolic subgroup")
    n = len(kept)
    rows = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            order = element_order(system, system.multiply(images[i], images[j]), order_cap)
            rows[i][j] = rows[j][i] = order
    tilde_matrix = CoxeterMatrix.from_rows(rows)
    tilde = CoxeterSystem(tilde_matrix, max_nodes=system.max_nodes, name=f"{system.name}~")
    logger.debug("fold of %s by %s: %s", system.name, G, tilde_matrix.m)
    return FoldedSystem(system, G, kept, tilde_matrix, images, tilde)


def phi(folded: FoldedSystem, x: Element) -> Element:
    """Image in W of an element of W~."""
    found = folded._phi.get(x)
    if found is None:
        base = folded.base
        found = base.identity
        for a in reversed(x.word):
            found = base.multiply(folded.phi_gen[a], found)
        folded._phi[x] = found
    return found


def matrices_isomorphic(a: CoxeterMatrix, b: CoxeterMatrix) -> bool:
    """Equal up to relabelling the generators."""
    if a.rank != b.rank:
        return False
    return any(b.permuted(p) == a for p in permutations(range(a.rank)))


def fixed_subgroup(system: CoxeterSystem, G: AutomorphismGroup, radius: Optional[int] = None) -> List[Element]:
    return [w for w in system.enumerate_ball(radius) if G.fixes(w)]


def verify_fixed_subgroup(system: CoxeterSystem, G: AutomorphismGroup, folded: FoldedSystem,
                          radius: Optional[int] = None) -> Verdict:
    """phi is injective with image W^G; with `radius`, only inside that ball (partial)."""
    fixed = set(fixed_subgroup(system, G, radius))
    tilde_elements = folded.tilde.enumerate_ball(radius)
    images = [phi(folded, x) for x in tilde_elements]
    if radius is not None:
        images = [y for y in images if y.length <= radius]
    if len(set(images)) != len(images):
        return Verdict(False, "phi not injective")
    image_set = set(images)
    if radius is None:
        if image_set != fixed:
            return Verdict(False, sorted(image_set ^ fixed)[:5])
        return PASS
    if not image_set <= fixed:
        return Verdict(False, sorted(image_set - fixed)[:5])
    return Verdict(True, f"partial: radius {radius}")


def verify_homomorphism(folded: FoldedSystem) -> Verdict:
    """phi(uv) = phi(u) phi(v) on all pairs of W~."""
    tilde, base = folded.tilde, folded.base
    elements = tilde.all_elements()
    for u in elements:
        for v in elements:
            if phi(folded, tilde.multiply(u, v)) is not base.multiply(phi(folded, u), phi(folded, v)):
                return Verdict(False, (u, v))
    return PASS


def _verify_iso(folded: FoldedSystem, leq_tilde, leq_base) -> Verdict:
    tilde, base = folded.tilde, folded.base
    elements = tilde.all_elements()
    for u in elements:
        for v in elements:
            if leq_tilde(tilde, u, v) != leq_base(base, phi(folded, u), phi(folded, v)):
                return Verdict(False, (u, v))
    return PASS


def verify_weak_iso(system: CoxeterSystem, G: AutomorphismGroup, folded: FoldedSystem) -> Verdict:
    return _verify_iso(folded, weak_leq, weak_leq)


def verify_bruhat_iso(system: CoxeterSystem, G: AutomorphismGroup, folded: FoldedSystem) -> Verdict:
    return _verify_iso(folded, bruhat_leq, bruhat_leq)


def verify_crisp(folded: FoldedSystem) -> Verdict:
    """Every reduced word of W~ maps to a reduced word of W.

    Checked on right weak-order covers x < xs: each reduced word is built one
    cover at a time, so all of them map to reduced words iff
    l(phi(xs)) = l(phi(x)) + l(phi(s)) at every cover.
    """
    tilde = folded.tilde
    gen_lengths = [y.length for y in folded.phi_gen]
    for x in tilde.all_elements():
        image_length = phi(folded, x).length
        right = tilde.descents(x, "right")
        for s in range(tilde.rank):
            if s in right:
                continue
            y = tilde.right_mul(x, s)
            if phi(folded, y).length != image_length + gen_lengths[s]:
                return Verdict(False, (y, x.word + (s,)))
    return PASS


def verify_chain_transport(folded: FoldedSystem) -> Verdict:
    """Weak-order covers of W~ map to covers of the weak order induced on W^G."""
    tilde, base = folded.tilde, folded.base
    fixed = [phi(folded, x) for x in tilde.all_elements()]
    for u in tilde.all_elements():
        for s in range(tilde.rank):
            if s in tilde.descents(u, "right"):
                continue
            a, b = phi(folded, u), phi(folded, tilde.right_mul(u, s))
            for z in fixed:
                if z is not a and z is not b and weak_leq(base, a, z) and weak_leq(base, z, b):
                    return Verdict(False, (u, s, z))
    return PASS


def check_length_bookkeeping(system: CoxeterSystem, folded: FoldedSystem) -> Verdict:
    """l(phi(s~) w) = l(w) +- l(phi(s~)) for every w in W^G."""
    fixed = [phi(folded, x) for x in folded.tilde.all_elements()]
    for w in fixed:
        for g in folded.phi_gen:
            length = system.multiply(g, w).length
            if length not in (w.length + g.length, w.length - g.length):
                return Verdict(False, (g, w))
    return PASS


# ----- exponents and w0 -----


def poincare_polynomial(system: CoxeterSystem) -> np.ndarray:
    """Coefficients of sum_w q^l(w) for finite W."""
    return np.bincount([x.length for x in system.all_elements()]).astype(np.int64)


def exponents(system: CoxeterSystem) -> List[int]:
    """Exponents d_i - 1, from P(q) (1-q)^n = prod (1 - q^d_i)."""
    poly = poincare_polynomial(system)
    for _ in range(system.rank):
        poly = np.convolve(poly, np.array([1, -1], dtype=np.int64))
    poly = np.trim_zeros(poly, "b")
    degrees = []
    while len(poly) > 1:
        nonzero = np.nonzero(poly[1:])[0]
        d = int(nonzero[0]) + 1
        if poly[d] >= 0 or len(degrees) >= system.rank:
            raise InternalError(f"Poincare polynomial does not factor: {poly.tolist()}")
        quotient = poly.copy()
        for i in range(d, len(quotient)):
            quotient[i] += quotient[i - d]
        quotient = np.trim_zeros(quotient, "b")
        if len(quotient) != len(poly) - d:
            raise InternalError(f"(1 - q^{d}) does not divide {poly.tolist()}")
        poly = quotient
        degrees.append(d)
    if len(degrees) != system.rank or poly.tolist() != [1]:
        raise InternalError(f"found degrees {degrees} for rank {system.rank}")
    return sorted(d - 1 for d in degrees)


def w0_conjugation(system: CoxeterSystem) -> GraphAutomorphism:
    """The generator permutation s -> w0 s w0."""
    w0 = system.longest_element(range(system.rank))
    images = []
    for s in range(system.rank):
        x = system.multiply(w0, system.left_mul(s, w0))
        if x.length != 1:
            raise InternalError(f"w0 s{s + 1} w0 = {x!r} is not a generator")
        images.append(x.first)
    return GraphAutomorphism(tuple(images))


@dataclass
class W0Result:
    minus_type: str
    exponents: List[int]
    conjugation: GraphAutomorphism
    folded: FoldedSystem


def identify_w_minus(system: CoxeterSystem) -> Tuple[str, List[int]]:
    exps = exponents(system)
    odd = [e for e in exps if e % 2]
    matches = match_exponents(odd)
    if not matches:
        raise UnsupportedTypeError(f"no catalog type with exponents {odd}")
    if len(matches) > 1:
        raise UnsupportedTypeError(f"exponents {odd} match several types: {matches}")
    return matches[0], exps


def verify_w0_theorem(system: CoxeterSystem) -> Verdict:
    """{x : x w0 = w0 x} with induced Bruhat and weak orders is Br(W^-) and weak(W^-).

    W^- is the catalog type whose exponents are the odd exponents of W. On
    success the witness is the W0Result.
    """
    minus, exps = identify_w_minus(system)
    conj = w0_conjugation(system)
    if conj.is_identity() != all(e % 2 for e in exps):
        return Verdict(False, ("conjugation/exponent parity mismatch", conj.spec(), exps))
    G = AutomorphismGroup([conj], system.rank)
    folded = fold(system, G)
    if not matrices_isomorphic(folded.tilde_matrix, catalog(minus)):
        return Verdict(False, ("folded matrix is not", minus, folded.tilde_matrix.m))
    for check in (verify_fixed_subgroup, verify_weak_iso, verify_bruhat_iso):
        verdict = check(system, G, folded)
        if not verdict:
            return Verdict(False, (check.__name__, verdict.witness))
    return Verdict(True, W0Result(minus, exps, conj, folded))
