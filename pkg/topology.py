"""
coxfix
======
Order complexes and simplicial homology over GF(2).

Chains of a poset are the faces of its order complex. Boundary matrices are
kept as Python-int bitset rows and reduced by pivoting on the lowest set bit.
Homology is reduced (augmented complex): the empty complex has b~_{-1} = 1,
so "S^-1 is the empty set" holds literally.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from errors import PreconditionError, ResourceError
from orders import Interval, Poset, as_interval, is_graded, label

logger = logging.getLogger(__name__)

DEFAULT_MAX_FACES = 2_000_000

Face = Tuple[int, ...]


def rank_gf2(rows: Sequence[int]) -> int:
    """Rank over GF(2) of a matrix given as bitset rows."""
    pivots: Dict[int, int] = {}
    for row in rows:
        while row:
            low = row & -row
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = row
                break
            row ^= pivot
    return len(pivots)


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Betti numbers over Z2, betti[0] being b~_{-1}."""

    betti: Tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        if -1 <= k < len(self.betti) - 1:
            return self.betti[k + 1]
        return 0

    @property
    def dim(self) -> int:
        return len(self.betti) - 2

    def sphere_dim(self) -> Optional[int]:
        """r if the profile is that of S^r, else None."""
        nonzero = [k - 1 for k, b in enumerate(self.betti) if b]
        if len(nonzero) == 1 and self.betti[nonzero[0] + 1] == 1:
            return nonzero[0]
        return None

    def concentrated_in(self, top: int) -> bool:
        return all(b == 0 for k, b in enumerate(self.betti) if k - 1 != top)

    def __str__(self) -> str:
        return ",".join(str(b) for b in self.betti)


class ComplexZ2:
    """Finite simplicial complex over vertex indices 0..n-1.

    faces[k] lists the k-dimensional faces as sorted index tuples. The empty
    face is implicit (it spans C_{-1}).
    """

    def __init__(self, vertices: Sequence[Hashable], faces: List[List[Face]]):
        self.vertices = list(vertices)
        self.faces = faces
        self._index = [{f: i for i, f in enumerate(layer)} for layer in faces]

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence[Hashable]]) -> "ComplexZ2":
        """Close a list of facets under taking subsets."""
        vertices = sorted({v for facet in facets for v in facet}, key=str)
        index = {v: i for i, v in enumerate(vertices)}
        seen = set()
        for facet in facets:
            ids = tuple(sorted(index[v] for v in facet))
            stack = [ids]
            while stack:
                face = stack.pop()
                if not face or face in seen:
                    continue
                seen.add(face)
                stack.extend(face[:i] + face[i + 1:] for i in range(len(face)))
        top = max((len(f) for f in seen), default=0)
        faces = [sorted(f for f in seen if len(f) == k + 1) for k in range(top)]
        return cls(vertices, faces)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> List[int]:
        """[f_{-1}, f_0, f_1, ...] with f_{-1} = 1."""
        return [1] + [len(layer) for layer in self.faces]

    def face_count(self) -> int:
        return sum(len(layer) for layer in self.faces)

    def is_empty(self) -> bool:
        return not self.faces

    def boundary(self, k: int) -> List[int]:
        """Rows of d_k : C_k -> C_{k-1} as bitsets over the (k-1)-faces."""
        if k < 0 or k > self.dim:
            return []
        if k == 0:
            return [1] * len(self.faces[0])
        lower = self._index[k - 1]
        rows = []
        for face in self.faces[k]:
            row = 0
            for i in range(len(face)):
                row |= 1 << lower[face[:i] + face[i + 1:]]
            rows.append(row)
        return rows

    def boundary_squares_to_zero(self) -> bool:
        for k in range(1, self.dim + 1):
            below = self.boundary(k - 1)
            for row in self.boundary(k):
                acc = 0
                bits = row
                while bits:
                    low = bits & -bits
                    acc ^= below[low.bit_length() - 1]
                    bits ^= low
                if acc:
                    return False
        return True

    def reduced_euler_characteristic(self) -> int:
        return sum((-1) ** (k - 1) * f for k, f in enumerate(self.f_vector()))

    def facets(self) -> List[Face]:
        covered = set()
        for k in range(1, self.dim + 1):
            for face in self.faces[k]:
                covered.update(face[:i] + face[i + 1:] for i in range(len(face)))
        return [f for layer in self.faces for f in layer if f not in covered]

    def __repr__(self) -> str:
        return f"ComplexZ2(dim={self.dim}, f={self.f_vector()[1:]})"


def order_complex(poset: Poset, max_faces: int = DEFAULT_MAX_FACES) -> ComplexZ2:
    """Delta(P): faces are the chains of P, found by DFS over the comparability DAG."""
    n = len(poset)
    strict = poset.relation & ~np.eye(n, dtype=bool)
    above = [np.nonzero(strict[i])[0].tolist() for i in range(n)]
    faces: List[List[Face]] = []
    count = 0
    stack: List[Face] = [(i,) for i in range(n - 1, -1, -1)]
    while stack:
        chain = stack.pop()
        count += 1
        if count > max_faces:
            raise ResourceError(f"order complex exceeds {max_faces} faces")
        while len(faces) < len(chain):
            faces.append([])
        faces[len(chain) - 1].append(chain)
        stack.extend(chain + (j,) for j in reversed(above[chain[-1]]))
    # elements are in a linear extension order, so every chain is already sorted
    for layer in faces:
        layer.sort()
    logger.debug("order complex of %d elements: %d faces", n, count)
    return ComplexZ2(poset.elements, faces)


def betti_z2(complex_: ComplexZ2) -> HomologyProfile:
    """b~_k = nullity(d_k) - rank(d_{k+1}) for k = -1..dim."""
    start = time.perf_counter()
    f = complex_.f_vector()
    ranks = [0] + [rank_gf2(complex_.boundary(k)) for k in range(complex_.dim + 1)] + [0]
    # ranks[k + 1] = rank d_k, with d_{-1} = 0 and d_{dim+1} = 0
    betti = tuple(f[k + 1] - ranks[k + 1] - ranks[k + 2] for k in range(-1, complex_.dim + 1))
    logger.debug("betti %s in %.3fs", betti, time.perf_counter() - start)
    return HomologyProfile(betti)


def is_homology_sphere_z2(complex_: ComplexZ2, expected_dim: Union[int, str] = "any") -> Tuple[bool, Optional[int]]:
    r = betti_z2(complex_).sphere_dim()
    if r is None:
        return False, None
    if expected_dim == "any":
        return True, r
    return r == expected_dim, r


def is_pseudomanifold(complex_: ComplexZ2) -> Tuple[bool, Optional[Tuple[str, List]]]:
    """Pure, thin and strongly connected; (False, (reason, witness face)) otherwise."""
    if complex_.is_empty():
        raise PreconditionError("pseudomanifold check needs a nonempty complex")
    n = complex_.dim
    names = complex_.vertices

    def show(face: Face) -> List:
        return [names[i] for i in face]

    facets = complex_.facets()
    for facet in facets:
        if len(facet) != n + 1:
            return False, ("pure", show(facet))
    ridges: Dict[Face, List[int]] = {}
    for idx, facet in enumerate(facets):
        for i in range(len(facet)):
            ridges.setdefault(facet[:i] + facet[i + 1:], []).append(idx)
    for ridge, owners in ridges.items():
        if len(owners) != 2:
            return False, ("thin", show(ridge))
    graph = nx.Graph()
    graph.add_nodes_from(range(len(facets)))
    graph.add_edges_from(tuple(owners) for owners in ridges.values())
    if not nx.is_connected(graph):
        components = list(nx.connected_components(graph))
        return False, ("strongly-connected", show(facets[min(components[1])]))
    return True, None


def interval_complex(interval: Poset, p: Hashable, q: Hashable, max_faces: int = DEFAULT_MAX_FACES) -> ComplexZ2:
    """Delta of the open interval (p, q)."""
    return order_complex(interval.open_interval(p, q), max_faces=max_faces)


def _graded_or_raise(interval: Poset) -> Tuple[Interval, Dict]:
    interval = as_interval(interval)
    graded, rho = is_graded(interval)
    if not graded:
        raise PreconditionError("interval is not graded", witness=rho)
    return interval, rho


def gorenstein_failure(interval: Poset, max_faces: int = DEFAULT_MAX_FACES) -> Optional[Tuple]:
    """First subinterval [p, q] whose open part is not a top-dimensional Z2-sphere.

    Returns None when the interval is Gorenstein* over Z2, ("graded", chains)
    when it is not graded, else (p, q, profile).
    """
    interval = as_interval(interval)
    graded, rho = is_graded(interval)
    if not graded:
        return ("graded", rho)
    for i, p in enumerate(interval.elements):
        for j in np.nonzero(interval.relation[i])[0]:
            q = interval.elements[j]
            if q == p:
                continue
            profile = betti_z2(interval_complex(interval, p, q, max_faces))
            if profile.sphere_dim() != rho[q] - rho[p] - 2:
                return (p, q, profile)
    return None


def is_gorenstein_star_z2(interval: Poset, max_faces: int = DEFAULT_MAX_FACES) -> bool:
    return gorenstein_failure(interval, max_faces) is None


def is_cohen_macaulay_z2(interval: Poset, max_faces: int = DEFAULT_MAX_FACES) -> bool:
    """Every open subinterval has reduced Z2-homology only in its top degree."""
    interval, rho = _graded_or_raise(interval)
    for i, p in enumerate(interval.elements):
        for j in np.nonzero(interval.relation[i])[0]:
            q = interval.elements[j]
            if q == p:
                continue
            profile = betti_z2(interval_complex(interval, p, q, max_faces))
            if not profile.concentrated_in(rho[q] - rho[p] - 2):
                return False
    return True


Involution = Union[Mapping[Hashable, Hashable], Callable[[Hashable], Hashable]]


def _as_map(interval: Poset, involution: Involution) -> Dict[Hashable, Hashable]:
    if callable(involution):
        return {x: involution(x) for x in interval.elements}
    return {x: involution[x] for x in interval.elements}


def check_involutive_automorphism(interval: Poset, involution: Involution) -> Dict[Hashable, Hashable]:
    """Validate nu as an involutive poset automorphism; returns it as a dict."""
    nu = _as_map(interval, involution)
    for x, y in nu.items():
        if y not in interval:
            raise PreconditionError(f"{label(x)} maps outside the interval", witness=(x, y))
        if nu[y] != x:
            raise PreconditionError(f"map is not involutive at {label(x)}", witness=(x, nu[y]))
    rel = interval.relation
    idx = interval.index
    image = [idx[nu[x]] for x in interval.elements]
    mapped = rel[np.ix_(image, image)]
    if not (mapped == rel).all():
        i, j = np.argwhere(mapped != rel)[0]
        raise PreconditionError(
            "map is not an order automorphism", witness=(interval.elements[i], interval.elements[j]),
        )
    return nu


def smith_fixed_check(interval: Poset, involution: Involution,
                      max_faces: int = DEFAULT_MAX_FACES) -> Tuple[bool, Optional[int]]:
    """Fixed points of nu on the open interval form a Z2-homology r-sphere, -1 <= r <= n.

    n is the top dimension of the ambient open-interval complex, so the
    interval needs length at least 1. A chain mapped to itself setwise is
    fixed pointwise for any order automorphism: x < nu(x) would give
    nu(x) < x. check_involutive_automorphism therefore covers that hypothesis.
    """
    interval, rho = _graded_or_raise(interval)
    if interval.bottom == interval.top:
        raise PreconditionError(f"singleton interval [{label(interval.bottom)}] has no open part")
    nu = check_involutive_automorphism(interval, involution)
    n = rho[interval.top] - 2
    fixed = [x for x in interval.elements if nu[x] == x and x != interval.bottom and x != interval.top]
    profile = betti_z2(order_complex(interval.subposet(fixed), max_faces=max_faces))
    r = profile.sphere_dim()
    logger.debug("smith check on %r: %d fixed, r=%s, n=%d", interval, len(fixed), r, n)
    return (r is not None and -1 <= r <= n), r


def homology_line(interval: Interval, profile: HomologyProfile, dim: int) -> str:
    return f"interval {label(interval.bottom)} {label(interval.top)} dim {dim} betti {profile}"
