"""
coxfix
======
Coxeter systems given by an arbitrary Coxeter matrix: word problem, length,
reduced expressions, balls, parabolic longest elements, descents, reflections.

Elements are interned per system. Each non-identity element is stored as
(first letter, tail) where the first letter is its least left descent, so the
canonical word read off the chain is the lexicographically least reduced word.
Left descents of a new element s*x are derived from alternating runs inside the
rank-2 parabolics <s, t>; no braid-class search is needed for the word problem.
"""

import logging
import threading
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from errors import InfiniteParabolicError, InputError, InternalError, ResourceError

logger = logging.getLogger(__name__)

# Sentinel for an infinite bond m(s, t) = inf. Valid finite entries are >= 1.
INF = 0

DEFAULT_MAX_NODES = 1_000_000

Word = Tuple[int, ...]


def format_word(word: Sequence[int]) -> str:
    """Hyphen-joined 1-based letters; the empty word is 'e'."""
    if not word:
        return "e"
    return "-".join(str(a + 1) for a in word)


def parse_word(text: str) -> Word:
    """Inverse of format_word."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(tok) - 1 for tok in text.split("-"))


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric bond-order matrix, diagonal 1, INF (0) for infinite bonds."""

    m: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.m)
        if n == 0:
            raise InputError("Coxeter matrix must have positive rank")
        for i, row in enumerate(self.m):
            if len(row) != n:
                raise InputError(f"row {i + 1} has {len(row)} entries, expected {n}")
            if row[i] != 1:
                raise InputError(f"diagonal entry m[{i + 1}][{i + 1}] must be 1")
            for j, entry in enumerate(row):
                if entry != self.m[j][i]:
                    raise InputError(f"matrix not symmetric at ({i + 1},{j + 1})")
                if i != j and entry != INF and entry < 2:
                    raise InputError(f"off-diagonal entry at ({i + 1},{j + 1}) must be >= 2 or inf")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "CoxeterMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.m)

    def bond(self, i: int, j: int) -> int:
        return self.m[i][j]

    def is_infinite(self, i: int, j: int) -> bool:
        return self.m[i][j] == INF

    def as_array(self) -> np.ndarray:
        """Integer array view with INF kept as the 0 sentinel."""
        return np.array(self.m, dtype=np.int64)

    def gram(self) -> np.ndarray:
        """Tits bilinear form B(a_s, a_t) = -cos(pi / m(s, t)); -1 for infinite bonds."""
        arr = self.as_array().astype(float)
        with np.errstate(divide="ignore"):
            form = -np.cos(np.pi / np.where(arr == INF, 1.0, arr))
        form[arr == INF] = -1.0
        return form

    def components(self, J: Iterable[int]) -> List[List[int]]:
        """Connected components of the Coxeter graph restricted to J."""
        graph = nx.Graph()
        graph.add_nodes_from(J)
        graph.add_edges_from((i, j) for i, j in combinations(sorted(graph), 2) if self.m[i][j] != 2)
        return sorted(sorted(c) for c in nx.connected_components(graph))

    def is_finite_parabolic(self, J: Iterable[int]) -> bool:
        """W_J is finite iff every irreducible component of J is.

        Rank 1 and 2 components are decided exactly (finite iff no infinite
        bond). Larger ones are infinite as soon as a bond exceeds 5, otherwise
        finite iff the form restricted to them is positive definite.
        """
        for comp in self.components(J):
            if len(comp) == 1:
                continue
            bonds = [self.m[i][j] for i, j in combinations(comp, 2)]
            if len(comp) == 2:
                if bonds[0] == INF:
                    return False
                continue
            if any(b == INF or b > 5 for b in bonds):
                return False
            block = self.gram()[np.ix_(comp, comp)]
            if np.linalg.eigvalsh(block).min() <= 1e-9:
                return False
        return True

    def permuted(self, perm: Sequence[int]) -> "CoxeterMatrix":
        """Matrix with generator i renamed to perm[i]."""
        n = self.rank
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return CoxeterMatrix(tuple(tuple(self.m[inv[i]][inv[j]] for j in range(n)) for i in range(n)))

    def to_text(self) -> str:
        lines = [f"rank {self.rank}"]
        for row in self.m:
            lines.append(" ".join("inf" if x == INF else str(x) for x in row))
        return "\n".join(lines) + "\n"


class Element:
    """Interned group element. Equality is identity within one system."""

    __slots__ = ("system", "id", "length", "first", "tail", "descents", "_left", "_word", "_inverse")

    def __init__(self, system: "CoxeterSystem", eid: int, first: Optional[int],
                 tail: Optional["Element"], descents: FrozenSet[int]):
        self.system = system
        self.id = eid
        self.first = first
        self.tail = tail
        self.length = 0 if tail is None else tail.length + 1
        self.descents = descents  # left descents
        self._left: List[Optional[Element]] = [None] * system.rank
        self._word: Optional[Word] = () if tail is None else None
        self._inverse: Optional[Element] = None

    @property
    def word(self) -> Word:
        """Canonical (lexicographically least) reduced word, 0-based letters."""
        if self._word is None:
            letters = []
            node = self
            while node.tail is not None:
                if node._word is not None:
                    break
                letters.append(node.first)
                node = node.tail
            self._word = tuple(letters) + node._word
        return self._word

    @property
    def sort_key(self) -> Tuple[int, Word]:
        return (self.length, self.word)

    def __lt__(self, other: "Element") -> bool:
        return self.sort_key < other.sort_key

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"Element({format_word(self.word)})"


class CoxeterSystem:
    """(W, S) for a CoxeterMatrix; owns the intern table and product caches."""

    def __init__(self, matrix: CoxeterMatrix, max_nodes: int = DEFAULT_MAX_NODES, name: str | None = None):
        self.matrix = matrix
        self.rank = matrix.rank
        self.max_nodes = max_nodes
        self.name = name or f"rank{matrix.rank}"
        self._lock = threading.RLock()
        self._registry: Dict[Tuple[int, int], Element] = {}
        self._elements: List[Element] = []
        self._reflections: Dict[int, FrozenSet[Element]] = {}
        self.identity = self._intern(None, None, frozenset())

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.name})"

    @property
    def generators(self) -> List[Element]:
        return [self.left_mul(s, self.identity) for s in range(self.rank)]

    @property
    def size(self) -> int:
        """Number of elements interned so far."""
        return len(self._elements)

    # ----- interning and left multiplication -----

    def _intern(self, first: Optional[int], tail: Optional[Element], descents: FrozenSet[int]) -> Element:
        key = (-1, -1) if tail is None else (first, tail.id)
        found = self._registry.get(key)
        if found is not None:
            return found
        if len(self._elements) >= self.max_nodes:
            raise ResourceError(f"{self!r}: intern table exceeds node cap {self.max_nodes}")
        x = Element(self, len(self._elements), first, tail, descents)
        self._elements.append(x)
        self._registry[key] = x
        if tail is not None:
            x._left[first] = tail
            tail._left[first] = x
        return x

    def check_letter(self, s: int) -> None:
        if not isinstance(s, (int, np.integer)) or not 0 <= s < self.rank:
            raise InputError(f"generator index {s!r} out of range for rank {self.rank}")

    def check_element(self, x: Element) -> None:
        if not isinstance(x, Element) or x.system is not self:
            raise InputError(f"{x!r} does not belong to {self!r}")

    def left_mul(self, s: int, x: Element) -> Element:
        """Canonical element s*x."""
        found = x._left[s]
        if found is not None:
            return found
        with self._lock:
            found = x._left[s]
            if found is None:
                found = self._lower(s, x) if s in x.descents else self._raise(s, x)
                x._left[s] = found
                found._left[s] = x
        return found

    def _other(self, letter: int, s: int, t: int) -> int:
        return t if letter == s else s

    def _apply_alternating(self, start: int, other: int, count: int, x: Element) -> Element:
        """(start other start ...)[count letters] * x."""
        letters = [start if k % 2 == 0 else other for k in range(count)]
        y = x
        for letter in reversed(letters):
            y = self.left_mul(letter, y)
        return y

    def _lower(self, s: int, x: Element) -> Element:
        # s is a left descent of x.
        t = x.first
        if s == t:
            return x.tail
        m = self.matrix.bond(s, t)
        # x = w0(s, t) * u with u minimal in its coset; strip the w0 part.
        u = x
        letter = t
        for _ in range(m):
            u = self.left_mul(letter, u)
            letter = self._other(letter, s, t)
        return self._apply_alternating(t, s, m - 1, u)

    def _raise(self, s: int, x: Element) -> Element:
        # s is not a left descent of x; build y = s*x of length l(x) + 1.
        descents = {s}
        bottoms: Dict[int, Element] = {}
        for t in range(self.rank):
            if t == s or self.matrix.is_infinite(s, t):
                continue
            m = self.matrix.bond(s, t)
            run = 1
            z = x
            letter = t
            while run < m and letter in z.descents:
                z = self.left_mul(letter, z)
                letter = self._other(letter, s, t)
                run += 1
            if run >= m:
                descents.add(t)
                bottoms[t] = z
        t_min = min(descents)
        if t_min == s:
            tail = x
        else:
            m = self.matrix.bond(s, t_min)
            tail = self._apply_alternating(s, t_min, m - 1, bottoms[t_min])
        return self._intern(t_min, tail, frozenset(descents))

    # ----- word level -----

    def canonicalize(self, word: Iterable[int]) -> Element:
        """Element represented by `word` (reduced or not)."""
        letters = list(word)
        for a in letters:
            self.check_letter(a)
        x = self.identity
        for a in reversed(letters):
            x = self.left_mul(int(a), x)
        return x

    def is_reduced(self, word: Sequence[int]) -> bool:
        return self.canonicalize(word).length == len(word)

    def multiply(self, x: Element, y: Element) -> Element:
        self.check_element(x)
        self.check_element(y)
        z = y
        for a in reversed(x.word):
            z = self.left_mul(a, z)
        return z

    def right_mul(self, x: Element, s: int) -> Element:
        return self.invert(self.left_mul(s, self.invert(x)))

    def invert(self, x: Element) -> Element:
        self.check_element(x)
        if x._inverse is None:
            inv = self.canonicalize(reversed(x.word))
            x._inverse = inv
            inv._inverse = x
        return x._inverse

    def descents(self, x: Element, side: str = "right") -> FrozenSet[int]:
        self.check_element(x)
        if side == "left":
            return x.descents
        if side == "right":
            return self.invert(x).descents
        raise InputError(f"side must be 'left' or 'right', got {side!r}")

    def support(self, x: Element) -> FrozenSet[int]:
        """J(x): the generators occurring in any reduced word of x."""
        return frozenset(x.word)

    def braid_moves(self, word: Word) -> List[Word]:
        """All words one braid move away from `word`."""
        out = []
        n = len(word)
        for i in range(n - 1):
            s, t = word[i], word[i + 1]
            if s == t or self.matrix.is_infinite(s, t):
                continue
            m = self.matrix.bond(s, t)
            if i + m > n:
                continue
            block = word[i:i + m]
            if all(block[k] == (s if k % 2 == 0 else t) for k in range(m)):
                swapped = tuple(t if k % 2 == 0 else s for k in range(m))
                out.append(word[:i] + swapped + word[i + m:])
        return out

    def reduced_expressions(self, x: Element) -> Set[Word]:
        """Full braid class of the canonical word (Tits)."""
        self.check_element(x)
        start = x.word
        seen = {start}
        queue = deque([start])
        while queue:
            word = queue.popleft()
            for nxt in self.braid_moves(word):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    # ----- balls and parabolics -----

    def enumerate_ball(self, radius: int | None) -> List[Element]:
        """All elements of length <= radius in shortlex order; radius None means all of W."""
        if radius is not None and radius < 0:
            raise InputError("ball radius must be >= 0")
        layer = [self.identity]
        out = [self.identity]
        depth = 0
        while layer and (radius is None or depth < radius):
            seen: Set[Element] = set()
            nxt = []
            for x in layer:
                for s in range(self.rank):
                    if s in x.descents:
                        continue
                    y = self.left_mul(s, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            out.extend(nxt)
            if len(out) > self.max_nodes:
                raise ResourceError(f"{self!r}: ball exceeds node cap {self.max_nodes}")
            layer = nxt
            depth += 1
        out.sort()
        logger.debug("%r: ball of radius %s has %d elements", self, radius, len(out))
        return out

    def all_elements(self) -> List[Element]:
        """Every element of a finite W; ResourceError if the node cap is hit."""
        return self.enumerate_ball(None)

    def longest_element(self, J: Iterable[int]) -> Element:
        """w0(J). Raises InfiniteParabolicError if W_J is not finite."""
        J = sorted(set(J))
        for s in J:
            self.check_letter(s)
        if not self.matrix.is_finite_parabolic(J):
            raise InfiniteParabolicError(f"W_J infinite for J={[s + 1 for s in J]}")
        # Ascend inside W_J; only w0(J) has every s in J as a left descent.
        x = self.identity
        steps = 0
        while True:
            ascents = [s for s in J if s not in x.descents]
            if not ascents:
                return x
            x = self.left_mul(ascents[0], x)
            steps += 1
            if steps >= self.max_nodes:
                raise InfiniteParabolicError(
                    f"W_J for J={[s + 1 for s in J]} is infinite or exceeds {self.max_nodes} nodes"
                )

    def is_finite(self) -> bool:
        return self.matrix.is_finite_parabolic(range(self.rank))

    # ----- reflections -----

    def reflections(self, radius: int) -> FrozenSet[Element]:
        """T intersected with the ball of the given radius (cached per radius)."""
        found = self._reflections.get(radius)
        if found is not None:
            return found
        conj_radius = max(0, (radius - 1) // 2)
        out = set()
        for w in self.enumerate_ball(conj_radius):
            w_inv = self.invert(w)
            for s in range(self.rank):
                t = self.multiply(w, self.left_mul(s, w_inv))
                if t.length <= radius:
                    out.add(t)
        result = frozenset(out)
        self._reflections[radius] = result
        return result

    def is_reflection(self, x: Element) -> bool:
        return x.length % 2 == 1 and x in self.reflections(x.length)

    def absolute_length(self, x: Element, ball: Iterable[Element]) -> int:
        """l'(x): least number of reflections with product x, searched inside `ball`."""
        self.check_element(x)
        if x is self.identity:
            return 0
        members = set(ball)
        if x not in members:
            raise ResourceError(f"{x!r} lies outside the supplied ball")
        radius = max(y.length for y in members)
        refl = [t for t in self.reflections(radius) if t in members]
        frontier = {self.identity}
        seen = {self.identity}
        for depth in range(1, x.length + 1):
            nxt = set()
            for y in frontier:
                for t in refl:
                    z = self.multiply(y, t)
                    if z in members and z not in seen:
                        seen.add(z)
                        nxt.add(z)
            if x in nxt:
                return depth
            frontier = nxt
        raise ResourceError(f"ball of radius {radius} too small for absolute length of {x!r}")


# ----- module-level operations -----


def canonicalize(system: CoxeterSystem, word: Sequence[int]) -> Element:
    return system.canonicalize(word)


def is_reduced(system: CoxeterSystem, word: Sequence[int]) -> bool:
    return system.is_reduced(word)


def multiply(system: CoxeterSystem, x: Element, y: Element) -> Element:
    return system.multiply(x, y)


def invert(x: Element) -> Element:
    return x.system.invert(x)


def reduced_expressions(x: Element) -> Set[Word]:
    return x.system.reduced_expressions(x)


def enumerate_ball(system: CoxeterSystem, radius: int) -> List[Element]:
    return system.enumerate_ball(radius)


def longest_element(system: CoxeterSystem, J: Iterable[int]) -> Element:
    return system.longest_element(J)


def descents(x: Element, side: str = "right") -> FrozenSet[int]:
    return x.system.descents(x, side)


def absolute_length(system: CoxeterSystem, x: Element, ball: Iterable[Element]) -> int:
    return system.absolute_length(x, ball)


def delete_letters(word: Sequence[int], positions: Iterable[int]) -> Word:
    drop = set(positions)
    return tuple(a for k, a in enumerate(word) if k not in drop)


def check_deletion(system: CoxeterSystem, word: Sequence[int]) -> Optional[Tuple[int, int]]:
    """For a non-reduced word, a pair i < j whose deletion keeps the product. None if reduced."""
    target = system.canonicalize(word)
    if target.length == len(word):
        return None
    for i, j in combinations(range(len(word)), 2):
        if system.canonicalize(delete_letters(word, (i, j))) is target:
            return (i, j)
    raise InternalError(f"deletion property failed for {format_word(word)}")


def check_exchange(system: CoxeterSystem, x: Element, t: Element) -> Optional[int]:
    """Position whose deletion from x's canonical word yields x*t, when l(xt) < l(x).

    Works for simple t (Exchange) and any reflection t (Strong Exchange).
    Returns None when x*t is longer than x.
    """
    target = system.multiply(x, t)
    if target.length > x.length:
        return None
    word = x.word
    for i in range(len(word)):
        if system.canonicalize(delete_letters(word, (i,))) is target:
            return i
    raise InternalError(f"exchange failed for {x!r} and {t!r}")


def check_strong_exchange(system: CoxeterSystem, x: Element, t: Element) -> Optional[int]:
    """Exchange for an arbitrary reflection t."""
    if not system.is_reflection(t):
        raise InputError(f"{t!r} is not a reflection")
    return check_exchange(system, x, t)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification: truthy iff it passed, with a witness on failure."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)
