"""
coxfix
======
Bruhat and weak orders on a CoxeterSystem, and the finite poset machinery
(intervals, covers, grading, Moebius function, Eulerian test) shared by the
topology, twisted and folding modules.
"""

import logging
from functools import lru_cache
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from coxeter import CoxeterSystem, Element, format_word
from errors import EmptyIntervalError, PreconditionError

logger = logging.getLogger(__name__)

Leq = Callable[[Any, Any], bool]


def label(x: Hashable) -> str:
    """Display form of a poset element: canonical word for group elements."""
    if isinstance(x, Element):
        return format_word(x.word)
    return str(x)


# ----- comparisons on W -----


@lru_cache(maxsize=2_000_000)
def _bruhat(u: Element, v: Element) -> bool:
    if u is v or u.length == 0:
        return True
    if u.length >= v.length:
        return False
    system = v.system
    s = min(v.descents)
    if s in u.descents:
        return _bruhat(system.left_mul(s, u), system.left_mul(s, v))
    return _bruhat(u, system.left_mul(s, v))


def bruhat_leq(system: CoxeterSystem, u: Element, v: Element) -> bool:
    """u <= v in Br(W), by descent lifting.

    For s a left descent of v: if s is also a left descent of u then
    u <= v iff su <= sv, otherwise u <= v iff u <= sv.
    """
    system.check_element(u)
    system.check_element(v)
    return _bruhat(u, v)


def bruhat_leq_subword(system: CoxeterSystem, u: Element, v: Element) -> bool:
    """Subword oracle: some subword of v's canonical word multiplies to u."""
    system.check_element(u)
    system.check_element(v)
    reachable = {system.identity}
    for a in reversed(v.word):
        reachable |= {system.left_mul(a, x) for x in reachable}
    return u in reachable


def weak_leq(system: CoxeterSystem, u: Element, v: Element) -> bool:
    """Right weak order: l(u) + l(u^-1 v) = l(v)."""
    return u.length + system.multiply(system.invert(u), v).length == v.length


def order_leq(order: str | Leq, system: CoxeterSystem | None = None) -> Leq:
    if callable(order):
        return order
    if order == "bruhat":
        return lambda a, b: bruhat_leq(system, a, b)
    if order == "weak":
        return lambda a, b: weak_leq(system, a, b)
    raise PreconditionError(f"unknown order {order!r}")


# ----- finite posets -----


class Poset:
    """Explicit finite poset. Elements are stored in a linear extension order.

    `relation[i, j]` is True iff elements[i] <= elements[j]. When `rank` is
    given together with `graded_by_rank=True`, covers are read off rank
    layers instead of being computed from the relation. `monotone` is any
    strictly order-preserving map (e.g. Coxeter length); it only prunes
    comparisons and is not kept as a rank.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        leq: Optional[Leq] = None,
        rank: Optional[Dict[Hashable, int]] = None,
        relation: Optional[np.ndarray] = None,
        graded_by_rank: bool = False,
        monotone: Optional[Dict[Hashable, int]] = None,
    ):
        elements = list(elements)
        n = len(elements)
        if relation is None:
            if leq is None:
                raise PreconditionError("Poset needs either leq or relation")
            prune = rank if rank is not None else monotone
            relation = np.zeros((n, n), dtype=bool)
            for i, a in enumerate(elements):
                relation[i, i] = True
                for j, b in enumerate(elements):
                    if i == j or (prune is not None and prune[a] >= prune[b]):
                        continue
                    relation[i, j] = bool(leq(a, b))
        # Reorder into a linear extension: strictly more elements below => later.
        below = relation.sum(axis=0)
        order = sorted(range(n), key=lambda i: (below[i], i))
        self.elements: List[Hashable] = [elements[i] for i in order]
        self.relation: np.ndarray = relation[np.ix_(order, order)]
        self.index: Dict[Hashable, int] = {x: i for i, x in enumerate(self.elements)}
        self.rank = dict(rank) if rank is not None else None
        self._graded_by_rank = graded_by_rank and rank is not None
        self._covers: Optional[np.ndarray] = None
        self._leq = leq

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Hashable) -> bool:
        return x in self.index

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} elements)"

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return bool(self.relation[self.index[a], self.index[b]])

    def less(self, a: Hashable, b: Hashable) -> bool:
        return a != b and self.leq(a, b)

    @property
    def cover_matrix(self) -> np.ndarray:
        if self._covers is None:
            strict = self.relation & ~np.eye(len(self), dtype=bool)
            if self._graded_by_rank:
                ranks = np.array([self.rank[x] for x in self.elements])
                self._covers = strict & (ranks[None, :] == ranks[:, None] + 1)
            else:
                s = strict.astype(np.int64)
                self._covers = strict & ~((s @ s) > 0)
        return self._covers

    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        rows, cols = np.nonzero(self.cover_matrix)
        return [(self.elements[i], self.elements[j]) for i, j in zip(rows, cols)]

    def hasse(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(self.covers())
        return graph

    def minimal(self) -> List[Hashable]:
        below = self.relation.sum(axis=0)
        return [x for x, c in zip(self.elements, below) if c == 1]

    def maximal(self) -> List[Hashable]:
        above = self.relation.sum(axis=1)
        return [x for x, c in zip(self.elements, above) if c == 1]

    @property
    def bottom(self) -> Optional[Hashable]:
        mins = self.minimal()
        return mins[0] if len(mins) == 1 else None

    @property
    def top(self) -> Optional[Hashable]:
        maxs = self.maximal()
        return maxs[0] if len(maxs) == 1 else None

    def is_bounded(self) -> bool:
        return len(self) > 0 and self.bottom is not None and self.top is not None

    def subposet(self, keep: Iterable[Hashable]) -> "Poset":
        """Induced subposet; order restricted, no comparisons recomputed."""
        keep_set = set(keep)
        idx = [i for i, x in enumerate(self.elements) if x in keep_set]
        rank = None if self.rank is None else {self.elements[i]: self.rank[self.elements[i]] for i in idx}
        return Poset([self.elements[i] for i in idx], rank=rank, relation=self.relation[np.ix_(idx, idx)])

    def interval(self, u: Hashable, v: Hashable) -> "Interval":
        if not self.leq(u, v):
            raise EmptyIntervalError(f"{label(u)} is not below {label(v)}")
        iu, iv = self.index[u], self.index[v]
        idx = np.nonzero(self.relation[iu, :] & self.relation[:, iv])[0]
        rank = None
        if self.rank is not None:
            rank = {self.elements[i]: self.rank[self.elements[i]] for i in idx}
        return Interval(
            [self.elements[i] for i in idx], u, v,
            rank=rank, relation=self.relation[np.ix_(idx, idx)], graded_by_rank=self._graded_by_rank,
        )

    def open_interval(self, u: Hashable, v: Hashable) -> "Poset":
        return self.subposet(x for x in self.interval(u, v).elements if x != u and x != v)

    def intervals(self, max_length: Optional[int] = None,
                  rank: Optional[Dict[Hashable, int]] = None) -> Iterable["Interval"]:
        """Every interval [p, q] (p <= q), optionally capped by rank difference."""
        rank = rank if rank is not None else self.rank
        for i, p in enumerate(self.elements):
            for j in np.nonzero(self.relation[i, :])[0]:
                q = self.elements[j]
                if max_length is not None and rank is not None and rank[q] - rank[p] > max_length:
                    continue
                yield self.interval(p, q)

    def spot_check(self, samples: int = 200, seed: int = 0) -> Optional[Tuple[str, Tuple]]:
        """Sampled reflexivity/antisymmetry/transitivity check; returns a failure or None."""
        n = len(self)
        if n == 0:
            return None
        rel = self.relation
        if not rel.diagonal().all():
            return ("reflexivity", ())
        if (rel & rel.T & ~np.eye(n, dtype=bool)).any():
            i, j = np.argwhere(rel & rel.T & ~np.eye(n, dtype=bool))[0]
            return ("antisymmetry", (self.elements[i], self.elements[j]))
        rng = np.random.default_rng(seed)
        for i, j, k in rng.integers(0, n, size=(samples, 3)):
            if rel[i, j] and rel[j, k] and not rel[i, k]:
                return ("transitivity", (self.elements[i], self.elements[j], self.elements[k]))
        return None


class Interval(Poset):
    """Bounded poset [bottom, top]."""

    def __init__(self, elements: Sequence[Hashable], bottom: Hashable, top: Hashable, **kwargs):
        super().__init__(elements, **kwargs)
        self.bottom_key = bottom
        self.top_key = top

    @property
    def bottom(self) -> Hashable:
        return self.bottom_key

    @property
    def top(self) -> Hashable:
        return self.top_key

    @property
    def length(self) -> Optional[int]:
        if self.rank is None:
            return None
        return self.rank[self.top_key] - self.rank[self.bottom_key]

    def proper_part(self) -> Poset:
        return self.subposet(x for x in self.elements if x != self.bottom_key and x != self.top_key)

    def __repr__(self) -> str:
        return f"Interval([{label(self.bottom_key)}, {label(self.top_key)}], {len(self)} elements)"


def as_interval(poset: Poset) -> Interval:
    """View a bounded Poset as an Interval."""
    if isinstance(poset, Interval):
        return poset
    if not poset.is_bounded():
        raise PreconditionError("poset is not bounded", witness=(poset.minimal(), poset.maximal()))
    return poset.interval(poset.bottom, poset.top)


def build_interval(order: str | Leq, universe: Iterable[Element], u: Element, v: Element,
                   system: CoxeterSystem | None = None) -> Interval:
    """[u, v] inside `universe` under the Bruhat, weak or a custom order."""
    if system is None and isinstance(u, Element):
        system = u.system
    leq = order_leq(order, system)
    if not leq(u, v):
        raise EmptyIntervalError(f"{label(u)} is not below {label(v)}")
    elements = [x for x in universe if leq(u, x) and leq(x, v)]
    if order in ("bruhat", "weak"):
        rank = {x: x.length - u.length for x in elements}
        result = Interval(elements, u, v, leq=leq, rank=rank, graded_by_rank=True)
    else:
        result = Interval(elements, u, v, leq=leq)
    logger.debug("built %r", result)
    return result


def induced_subposet(order: str | Leq, universe: Iterable[Element], predicate: Callable[[Any], bool],
                     system: CoxeterSystem | None = None) -> Poset:
    elements = [x for x in universe if predicate(x)]
    if system is None and elements and isinstance(elements[0], Element):
        system = elements[0].system
    leq = order_leq(order, system)
    monotone = None
    if order in ("bruhat", "weak"):
        monotone = {x: x.length for x in elements}
    return Poset(elements, leq=leq, monotone=monotone)


# ----- Moebius function, grading, Eulerian test -----


def mobius_matrix(poset: Poset) -> np.ndarray:
    """mu[i, j] for the poset's internal (linear extension) indexing; 0 off the relation."""
    n = len(poset)
    rel = poset.relation
    strict_below = rel & ~np.eye(n, dtype=bool)
    mu = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        row = mu[i]
        row[i] = 1
        for j in range(i + 1, n):
            if rel[i, j]:
                row[j] = -row[strict_below[:, j]].sum()
    return mu


def mobius(interval: Poset) -> Dict[Tuple[Hashable, Hashable], int]:
    """mu(x, y) for all x <= y."""
    mu = mobius_matrix(interval)
    rows, cols = np.nonzero(interval.relation)
    return {(interval.elements[i], interval.elements[j]): int(mu[i, j]) for i, j in zip(rows, cols)}


def _chain_lengths(poset: Poset, source: Hashable) -> Tuple[Dict, Dict, Dict, Dict]:
    """Shortest and longest saturated-chain lengths from `source`, with parents."""
    cover = poset.cover_matrix
    s = poset.index[source]
    n = len(poset)
    lo = {s: 0}
    hi = {s: 0}
    lo_parent: Dict[int, int] = {}
    hi_parent: Dict[int, int] = {}
    for j in range(s + 1, n):
        preds = [i for i in np.nonzero(cover[:, j])[0] if i in lo]
        if not preds:
            continue
        best_lo = min(preds, key=lambda i: lo[i])
        best_hi = max(preds, key=lambda i: hi[i])
        lo[j], lo_parent[j] = lo[best_lo] + 1, best_lo
        hi[j], hi_parent[j] = hi[best_hi] + 1, best_hi
    return lo, hi, lo_parent, hi_parent


def _unwind(poset: Poset, parents: Dict[int, int], j: int) -> List[Hashable]:
    chain = [j]
    while chain[-1] in parents:
        chain.append(parents[chain[-1]])
    return [poset.elements[i] for i in reversed(chain)]


def is_graded(interval: Poset) -> Tuple[bool, Any]:
    """(True, rank map with rho(bottom)=0) or (False, (short chain, long chain))."""
    interval = as_interval(interval)
    lo, hi, lo_parent, hi_parent = _chain_lengths(interval, interval.bottom)
    top = interval.index[interval.top]
    if lo[top] != hi[top]:
        return False, (_unwind(interval, lo_parent, top), _unwind(interval, hi_parent, top))
    for j in lo:
        if lo[j] != hi[j]:
            return False, (_unwind(interval, lo_parent, j), _unwind(interval, hi_parent, j))
    return True, {interval.elements[j]: lo[j] for j in lo}


def is_eulerian(interval: Poset) -> bool:
    """mu(p, q) = (-1)^(rho(q) - rho(p)) for all p <= q."""
    graded, rho = is_graded(interval)
    if not graded:
        raise PreconditionError("poset is not graded", witness=rho)
    ranks = np.array([rho[x] for x in interval.elements])
    expected = np.where((ranks[None, :] - ranks[:, None]) % 2 == 0, 1, -1)
    mu = mobius_matrix(interval)
    return bool((mu[interval.relation] == expected[interval.relation]).all())


def has_diamond_property(interval: Poset) -> bool:
    """Every length-2 interval has exactly two middle elements (thinness)."""
    graded, rho = is_graded(interval)
    if not graded:
        return False
    for i, p in enumerate(interval.elements):
        for j in np.nonzero(interval.relation[i, :])[0]:
            q = interval.elements[j]
            if rho[q] - rho[p] == 2:
                middle = (interval.relation[i, :] & interval.relation[:, j]).sum() - 2
                if middle != 2:
                    return False
    return True


# ----- Deodhar characterisation and dumps -----


def check_deodhar_property(system: CoxeterSystem, elements: Sequence[Element]) -> Optional[Tuple]:
    """Property (2) of Deodhar's characterisation on all pairs of `elements`.

    For s with l(s w1) <= l(w1) and l(s w2) <= l(w2):
    w1 <= w2  iff  s w1 <= w2  iff  s w1 <= s w2.
    Returns the first violating (s, w1, w2) or None.
    """
    for s in range(system.rank):
        lower = [w for w in elements if s in w.descents]
        for w1 in lower:
            sw1 = system.left_mul(s, w1)
            for w2 in lower:
                sw2 = system.left_mul(s, w2)
                a = bruhat_leq(system, w1, w2)
                b = bruhat_leq(system, sw1, w2)
                c = bruhat_leq(system, sw1, sw2)
                if not a == b == c:
                    return (s, w1, w2)
    return None


def dump_interval(interval: Poset) -> List[str]:
    """One `u < v` line per cover, sorted."""
    return sorted(f"{label(a)} < {label(b)}" for a, b in interval.covers())
