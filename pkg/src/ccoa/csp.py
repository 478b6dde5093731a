"""Constraint-network model: a binary matrix paired with a ternary tensor.

A problem over variables ``x_0 .. x_{n-1}`` is stored as the pair of a
dense n x n matrix of cardinal-direction relations and a dense n^3
tensor of orientation relations.  Both structures keep the permutation
closures as invariants:

* binary: the diagonal is contained in {Eq} and ``B[j][i]`` is the
  converse of ``B[i][j]``;
* ternary: ``T[i][i][i]`` is contained in {de}, swapping the last two
  indices takes the converse, and cycling the indices takes the
  rotation.

Cells are 9-bit masks (see :mod:`ccoa.algebra`).  Assertion is
intersection; cells only ever shrink.  A cell with no atoms left is a
legal value and signals inconsistency.  Instances have a single writer;
completed values may be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    CDA_ATOM_NAMES,
    CP_BIT,
    CR_BIT,
    DD_BIT,
    DE_BIT,
    EQ_BIT,
    ROA_ATOM_NAMES,
    UNIVERSAL,
    cda_converse,
    format_cda,
    format_roa,
    roa_converse,
    roa_rotation,
)


def tensor_index(n: int, i: int, j: int, k: int) -> int:
    """Flat index of cell (i, j, k) in an order-n tensor."""
    return (i * n + j) * n + k


def initial_ternary(i: int, j: int, k: int) -> int:
    """Initialization mask for a ternary cell by its index pattern.

    Cells whose index pattern repeats a variable are restricted up front
    to the atoms geometrically realizable under that pattern: with the
    first two arguments equal only de/dd can hold, with primary equal to
    parent only de/cp, with primary equal to reference only de/cr.
    """
    if i == j:
        if j == k:
            return DE_BIT
        return DE_BIT | DD_BIT
    if i == k:
        return DE_BIT | CP_BIT
    if j == k:
        return DE_BIT | CR_BIT
    return UNIVERSAL


@dataclass
class BinaryMatrix:
    """Dense matrix of cardinal-direction relation masks."""

    n: int
    cells: list

    def get(self, i: int, j: int) -> int:
        return self.cells[i * self.n + j]

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.n, list(self.cells))

    def closure_violations(self) -> list:
        """Human-readable descriptions of broken matrix invariants."""
        n = self.n
        c = self.cells
        bad = []
        for i in range(n):
            if c[i * n + i] & ~EQ_BIT:
                bad.append(f"diagonal cell ({i},{i}) = {format_cda(c[i * n + i])}")
            for j in range(n):
                if c[i * n + j] != cda_converse(c[j * n + i]):
                    bad.append(f"converse broken at ({i},{j})")
        return bad


@dataclass
class TernaryTensor:
    """Dense tensor of orientation relation masks."""

    n: int
    cells: list

    def get(self, i: int, j: int, k: int) -> int:
        return self.cells[tensor_index(self.n, i, j, k)]

    def copy(self) -> "TernaryTensor":
        return TernaryTensor(self.n, list(self.cells))

    def closure_violations(self) -> list:
        n = self.n
        c = self.cells
        bad = []
        for i in range(n):
            if c[tensor_index(n, i, i, i)] & ~DE_BIT:
                bad.append(f"identity cell ({i},{i},{i})")
            for j in range(n):
                for k in range(n):
                    v = c[tensor_index(n, i, j, k)]
                    if v != roa_converse(c[tensor_index(n, i, k, j)]):
                        bad.append(f"converse broken at ({i},{j},{k})")
                    if v != roa_rotation(c[tensor_index(n, k, i, j)]):
                        bad.append(f"rotation broken at ({i},{j},{k})")
        return bad


@dataclass
class CcoaCsp:
    """A combined CSP: named variables, binary matrix, ternary tensor."""

    variables: tuple
    b: BinaryMatrix
    t: TernaryTensor

    @property
    def n(self) -> int:
        return len(self.variables)

    def copy(self) -> "CcoaCsp":
        return CcoaCsp(self.variables, self.b.copy(), self.t.copy())

    def get_cda(self, i: int, j: int) -> int:
        return self.b.get(i, j)

    def get_roa(self, i: int, j: int, k: int) -> int:
        return self.t.get(i, j, k)

    def index_of(self, name: str) -> int:
        return self.variables.index(name)

    def refines(self, other: "CcoaCsp") -> bool:
        """True when every cell is a subset of the matching cell of ``other``."""
        return all(a & ~b == 0 for a, b in zip(self.b.cells, other.b.cells)) and all(
            a & ~b == 0 for a, b in zip(self.t.cells, other.t.cells)
        )

    def closure_violations(self) -> list:
        return self.b.closure_violations() + self.t.closure_violations()


def new_csp(variables) -> CcoaCsp:
    """Fresh CSP with every cell at its initialization value.

    Off-diagonal binary cells start universal, the diagonal starts at
    {Eq}; ternary cells start at :func:`initial_ternary` for their index
    pattern.  Raises ``ValueError`` on duplicate or empty names.
    """
    names = tuple(variables)
    if not names:
        raise ValueError("a CSP needs at least one variable")
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    n = len(names)
    b = [UNIVERSAL] * (n * n)
    for i in range(n):
        b[i * n + i] = EQ_BIT
    t = [0] * (n * n * n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                t[tensor_index(n, i, j, k)] = initial_ternary(i, j, k)
    return CcoaCsp(names, BinaryMatrix(n, b), TernaryTensor(n, t))


def assert_cda(csp: CcoaCsp, i: int, j: int, relation: int) -> bool:
    """Intersect ``relation`` into cell (i, j), maintaining the converse cell.

    Returns False when a touched cell became empty.
    """
    n = csp.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"variable index out of range: ({i},{j})")
    cells = csp.b.cells
    new = cells[i * n + j] & relation
    cells[i * n + j] = new
    cells[j * n + i] = cda_converse(new) if i != j else new
    return new != 0


def assert_roa(csp: CcoaCsp, i: int, j: int, k: int, relation: int) -> bool:
    """Intersect ``relation`` into cell (i, j, k) and close under permutation.

    All six permutation images are intersected into place, which stays
    well defined when indices repeat.  Returns False when a touched cell
    became empty.
    """
    n = csp.n
    if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
        raise IndexError(f"variable index out of range: ({i},{j},{k})")
    cells = csp.t.cells
    base = cells[tensor_index(n, i, j, k)] & relation
    rot1 = roa_rotation(base)
    rot2 = roa_rotation(rot1)
    ok = True
    for (a, b_, c), value in (
        ((i, j, k), base),
        ((i, k, j), roa_converse(base)),
        ((j, k, i), rot1),
        ((j, i, k), roa_converse(rot1)),
        ((k, i, j), rot2),
        ((k, j, i), roa_converse(rot2)),
    ):
        idx = tensor_index(n, a, b_, c)
        cells[idx] &= value
        if cells[idx] == 0:
            ok = False
    return ok


def project_cda(csp: CcoaCsp) -> BinaryMatrix:
    """Deep copy of the cardinal-direction component."""
    return csp.b.copy()


def project_roa(csp: CcoaCsp) -> TernaryTensor:
    """Deep copy of the orientation component."""
    return csp.t.copy()


def csp_from_components(variables, b: BinaryMatrix = None, t: TernaryTensor = None) -> CcoaCsp:
    """CSP from projections; missing components start at initialization."""
    csp = new_csp(variables)
    if b is not None:
        if b.n != csp.n:
            raise ValueError("binary matrix order does not match variable count")
        csp.b = b.copy()
    if t is not None:
        if t.n != csp.n:
            raise ValueError("ternary tensor order does not match variable count")
        csp.t = t.copy()
    return csp


def describe_cell(csp: CcoaCsp, kind: str, indices: tuple) -> str:
    """Readable rendering of one cell, for diagnostics."""
    names = [csp.variables[x] for x in indices]
    if kind == "pair":
        return f"({names[0]},{names[1]}) = {format_cda(csp.b.get(*indices))}"
    return f"({','.join(names)}) = {format_roa(csp.t.get(*indices))}"


__all__ = [
    "BinaryMatrix",
    "TernaryTensor",
    "CcoaCsp",
    "tensor_index",
    "initial_ternary",
    "new_csp",
    "assert_cda",
    "assert_roa",
    "project_cda",
    "project_roa",
    "csp_from_components",
    "describe_cell",
    "CDA_ATOM_NAMES",
    "ROA_ATOM_NAMES",
]
