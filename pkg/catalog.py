"""
coxfix
======
Built-in Coxeter types, the matrix text format, and exponent data of the
finite irreducible types.

Generator numbering (1-based, as used by `perm=` specs):
  A<n>    path 1-2-...-n
  B<n>    path 1-2-...-n, m(1,2) = 4
  D<n>    path 1-2-...-(n-1), node n attached to n-2
  E6/7/8  path 1-2-...-(n-1), node n attached to 3
  F4      path 1-2-3-4, m(2,3) = 4
  H3/H4   path, m(1,2) = 5
  I2(m)   two nodes, m(1,2) = m (I2(inf) allowed)
  affA<n> cycle 1-2-...-(n+1)-1 (affA1 is I2(inf))
"""

import logging
import re
from pathlib import Path
from typing import Dict, Iterator, List, Tuple

import pandas as pd

from coxeter import INF, CoxeterMatrix
from errors import ParseError

logger = logging.getLogger(__name__)

CATALOG_PATTERNS = [
    ("A<n>", "n >= 1", "path 1-2-...-n"),
    ("B<n>", "n >= 2", "path 1-2-...-n, m(1,2)=4"),
    ("D<n>", "n >= 4", "path 1-...-(n-1), node n attached to n-2"),
    ("E6, E7, E8", "", "path 1-...-(n-1), node n attached to 3"),
    ("F4", "", "path 1-2-3-4, m(2,3)=4"),
    ("H3, H4", "", "path, m(1,2)=5"),
    ("I2(<m>)", "m >= 2 or inf", "m(1,2)=m"),
    ("affA<n>", "n >= 1", "cycle 1-...-(n+1)-1"),
]

_NAME_RE = re.compile(r"^(A|B|D|E|F|H|affA)(\d+)$|^I2\((\d+|inf)\)$")


def _path(n: int, bonds: Dict[Tuple[int, int], int] | None = None) -> List[List[int]]:
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 3
    for (i, j), value in (bonds or {}).items():
        m[i][j] = m[j][i] = value
    return m


def _attach(m: List[List[int]], node: int, to: int) -> List[List[int]]:
    m[node][to] = m[to][node] = 3
    return m


def type_a(n: int) -> CoxeterMatrix:
    return CoxeterMatrix.from_rows(_path(n))


def type_b(n: int) -> CoxeterMatrix:
    return CoxeterMatrix.from_rows(_path(n, {(0, 1): 4}))


def type_d(n: int) -> CoxeterMatrix:
    m = _path(n - 1)
    m = [row + [2] for row in m] + [[2] * (n - 1) + [1]]
    return CoxeterMatrix.from_rows(_attach(m, n - 1, n - 3))


def type_e(n: int) -> CoxeterMatrix:
    m = _path(n - 1)
    m = [row + [2] for row in m] + [[2] * (n - 1) + [1]]
    return CoxeterMatrix.from_rows(_attach(m, n - 1, 2))


def dihedral(m: int) -> CoxeterMatrix:
    return CoxeterMatrix.from_rows([[1, m], [m, 1]])


def affine_a(n: int) -> CoxeterMatrix:
    if n == 1:
        return dihedral(INF)
    size = n + 1
    m = [[1 if i == j else 2 for j in range(size)] for i in range(size)]
    for i in range(size):
        j = (i + 1) % size
        m[i][j] = m[j][i] = 3
    return CoxeterMatrix.from_rows(m)


def catalog(name: str) -> CoxeterMatrix:
    """Standard Coxeter matrix for a catalog name such as 'B3', 'I2(7)', 'affA2'."""
    match = _NAME_RE.match(name.strip())
    if match is None:
        raise ParseError(f"unknown Coxeter type {name!r}")
    family, n_text, m_text = match.groups()
    if m_text is not None:
        m = INF if m_text == "inf" else int(m_text)
        if m != INF and m < 2:
            raise ParseError(f"I2(m) needs m >= 2, got {m}")
        return dihedral(m)
    n = int(n_text)
    if family == "A" and n >= 1:
        return type_a(n)
    if family == "B" and n >= 2:
        return type_b(n)
    if family == "D" and n >= 4:
        return type_d(n)
    if family == "E" and n in (6, 7, 8):
        return type_e(n)
    if family == "F" and n == 4:
        return CoxeterMatrix.from_rows(_path(4, {(1, 2): 4}))
    if family == "H" and n in (3, 4):
        return CoxeterMatrix.from_rows(_path(n, {(0, 1): 5}))
    if family == "affA" and n >= 1:
        return affine_a(n)
    raise ParseError(f"unsupported Coxeter type {name!r}")


def parse_matrix_text(text: str) -> CoxeterMatrix:
    """Parse `rank n` followed by n rows of n entries (`inf` allowed)."""
    lines = [(k + 1, line.strip()) for k, line in enumerate(text.splitlines())]
    lines = [(k, line) for k, line in lines if line]
    if not lines:
        raise ParseError("empty matrix file", line=1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "rank" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(f"expected 'rank <n>', got {header!r}", line=lineno)
    n = int(parts[1])
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} matrix rows, got {len(body)}", line=lineno)
    rows: List[List[int]] = []
    for i, (lineno, line) in enumerate(body):
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, got {len(tokens)}", line=lineno)
        row = []
        for j, tok in enumerate(tokens):
            if tok == "inf":
                value = INF
            elif tok.isdigit() and int(tok) >= 1:
                value = int(tok)
            else:
                raise ParseError(f"bad entry {tok!r}", line=lineno)
            if i == j and value != 1:
                raise ParseError(f"diagonal entry must be 1, got {tok}", line=lineno)
            if i != j and value != INF and value < 2:
                raise ParseError(f"off-diagonal entry must be >= 2 or inf, got {tok}", line=lineno)
            row.append(value)
        rows.append(row)
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ParseError(f"matrix not symmetric at ({i + 1},{j + 1})", line=body[i][0])
    return CoxeterMatrix.from_rows(rows)


def parse_matrix_file(path: str | Path) -> CoxeterMatrix:
    path = Path(path)
    logger.debug("reading Coxeter matrix from %s", path)
    return parse_matrix_text(path.read_text())


def resolve_group(spec: str) -> Tuple[str, CoxeterMatrix]:
    """(display name, matrix) for a catalog name or a matrix file path."""
    path = Path(spec)
    if path.is_file():
        return path.stem, parse_matrix_file(path)
    return spec, catalog(spec)


# ----- exponent data of finite irreducible types -----


def type_exponents(family: str, n: int) -> List[int]:
    """Exponent multiset of a finite irreducible type (n is the rank, or m for I2)."""
    if family == "A":
        return list(range(1, n + 1))
    if family == "B":
        return list(range(1, 2 * n, 2))
    if family == "D":
        return sorted(list(range(1, 2 * n - 2, 2)) + [n - 1])
    if family == "E":
        return {6: [1, 4, 5, 7, 8, 11], 7: [1, 5, 7, 9, 11, 13, 17], 8: [1, 7, 11, 13, 17, 19, 23, 29]}[n]
    if family == "F":
        return [1, 5, 7, 11]
    if family == "H":
        return {3: [1, 5, 9], 4: [1, 11, 19, 29]}[n]
    if family == "I2":
        return [1, n - 1]
    raise ParseError(f"no exponent data for {family}{n}")


def finite_types(rank: int) -> Iterator[Tuple[str, List[int]]]:
    """(catalog name, exponents) of every finite irreducible type of the given rank.

    Each isomorphism class is listed once: A2, B2 and I2(6) stand for I2(3),
    I2(4) and I2(6); the remaining dihedral types are I2(m) with m = 5 or m >= 7.
    """
    if rank == 1:
        yield "A1", type_exponents("A", 1)
        return
    yield f"A{rank}", type_exponents("A", rank)
    yield f"B{rank}", type_exponents("B", rank)
    if rank >= 4:
        yield f"D{rank}", type_exponents("D", rank)
    if rank in (6, 7, 8):
        yield f"E{rank}", type_exponents("E", rank)
    if rank == 4:
        yield "F4", type_exponents("F", 4)
    if rank in (3, 4):
        yield f"H{rank}", type_exponents("H", rank)
    if rank == 2:
        yield "I2(6)", type_exponents("I2", 6)


def match_exponents(exponents: List[int]) -> List[str]:
    """Catalog names whose exponent multiset equals `exponents`."""
    target = sorted(exponents)
    rank = len(target)
    out = [name for name, exps in finite_types(rank) if sorted(exps) == target]
    if rank == 2 and target[0] == 1 and target[1] + 1 not in (3, 4, 6) and target[1] >= 4:
        out.append(f"I2({target[1] + 1})")
    return out


def catalog_table() -> pd.DataFrame:
    return pd.DataFrame(CATALOG_PATTERNS, columns=["name", "parameters", "numbering"])
