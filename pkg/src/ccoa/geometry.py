"""Ground-truth geometric semantics over integer 2D grids.

The two calculi are interpreted over points of the plane with north as
+y and east as +x.  Every atom is a sign condition on coordinate
differences and cross products, so exact integer arithmetic decides each
case with no ties.  "Left" is the positive cross product side: from
``a`` looking towards ``b``, points ``c`` with
``cross(b - a, c - a) > 0`` are to the left.

Bounded integer grids also provide a brute-force model search, used as
the independent oracle for table derivation and for consistency checks
at small scale.  A failed search on a bounded grid does not prove
inconsistency; a found model is always genuine.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .algebra import CdaAtom, RoaAtom
from .csp import CcoaCsp, initial_ternary, tensor_index


class Point(NamedTuple):
    x: int
    y: int


class EnumerationBudgetError(RuntimeError):
    """Raised when a grid search exceeds its candidate budget."""

    def __init__(self, budget: int):
        super().__init__(f"grid enumeration budget of {budget} candidates exceeded")
        self.budget = budget


def cda_of(p, s) -> CdaAtom:
    """Cardinal-direction atom of point ``p`` relative to point ``s``."""
    px, py = p
    sx, sy = s
    if px == sx:
        if py == sy:
            return CdaAtom.Eq
        return CdaAtom.No if py > sy else CdaAtom.So
    if px > sx:
        if py == sy:
            return CdaAtom.Ea
        return CdaAtom.NE if py > sy else CdaAtom.SE
    if py == sy:
        return CdaAtom.We
    return CdaAtom.NW if py > sy else CdaAtom.SW


def roa_of(a, b, c) -> RoaAtom:
    """Orientation atom of primary ``c`` relative to parent ``a`` and reference ``b``.

    For distinct parent and reference the sign of
    ``cross(b - a, c - a)`` separates left from right; collinear
    positions are classified by where ``c = a + t * (b - a)`` falls
    against t = 0 and t = 1, compared without division.
    """
    ax, ay = a
    bx, by = b
    cx, cy = c
    if ax == bx and ay == by:
        return RoaAtom.de if (cx == ax and cy == ay) else RoaAtom.dd
    dx = bx - ax
    dy = by - ay
    ex = cx - ax
    ey = cy - ay
    cross = dx * ey - dy * ex
    if cross > 0:
        return RoaAtom.lr
    if cross < 0:
        return RoaAtom.rr
    if ex == 0 and ey == 0:
        return RoaAtom.cp
    dot = ex * dx + ey * dy
    if dot < 0:
        return RoaAtom.bp
    if ex == dx and ey == dy:
        return RoaAtom.cr
    if dot < dx * dx + dy * dy:
        return RoaAtom.bw
    return RoaAtom.br


def verify_assignment(csp: CcoaCsp, assignment: dict) -> bool:
    """Check every binary and ternary constraint membership of ``assignment``."""
    n = csp.n
    b = csp.b.cells
    t = csp.t.cells
    pts = [assignment[i] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not (1 << cda_of(pts[i], pts[j])) & b[i * n + j]:
                return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not (1 << roa_of(pts[i], pts[j], pts[k])) & t[tensor_index(n, i, j, k)]:
                    return False
    return True


def model_search(csp: CcoaCsp, radius: int, *, budget: int = 10**8) -> Optional[dict]:
    """Brute-force search for a point model on the grid [-radius, radius]^2.

    Variables are assigned in index order; every constraint among already
    assigned variables prunes the branch.  Returns a map from variable
    index to :class:`Point` satisfying every cell of the CSP, or ``None``
    when the grid is exhausted (which does not prove inconsistency).

    Raises :class:`EnumerationBudgetError` after ``budget`` candidate
    placements.
    """
    n = csp.n
    b = csp.b.cells
    t = csp.t.cells
    if any(cell == 0 for cell in b) or any(cell == 0 for cell in t):
        return None

    span = range(-radius, radius + 1)
    grid = [Point(x, y) for x in span for y in span]

    # Constraints involving variable d and only earlier variables, with
    # always-satisfied cells dropped.  Binary checks list (other, cell,
    # flip) where flip says the cell constrains (other, d) instead of
    # (d, other); converse closure would make one direction enough, but
    # raw matrices are not required to be closed here.
    universal = 0x1FF
    bin_checks: list[list] = []
    tri_checks: list[list] = []
    for d in range(n):
        bc = []
        for e in range(d):
            cell = b[d * n + e]
            if cell != universal:
                bc.append((e, cell, False))
            cell = b[e * n + d]
            if cell != universal:
                bc.append((e, cell, True))
        bin_checks.append(bc)
        tc = []
        for i in range(d + 1):
            for j in range(i, d + 1):
                for k in range(j, d + 1):
                    if max(i, j, k) != d:
                        continue
                    cell = t[tensor_index(n, i, j, k)]
                    # Cells still at their initialization value hold for any
                    # assignment and need no check.
                    if cell != initial_ternary(i, j, k):
                        tc.append((i, j, k, cell))
        tri_checks.append(tc)

    assign: list = [None] * n
    count = 0

    def place(d: int) -> bool:
        nonlocal count
        if d == n:
            return True
        bc = bin_checks[d]
        tc = tri_checks[d]
        for p in grid:
            count += 1
            if count > budget:
                raise EnumerationBudgetError(budget)
            ok = True
            for e, cell, flip in bc:
                q = assign[e]
                atom = cda_of(q, p) if flip else cda_of(p, q)
                if not (1 << atom) & cell:
                    ok = False
                    break
            if ok:
                assign[d] = p
                for i, j, k, cell in tc:
                    if not (1 << roa_of(assign[i], assign[j], assign[k])) & cell:
                        ok = False
                        break
                if ok and place(d + 1):
                    return True
                assign[d] = None
        return False

    if not place(0):
        return None
    witness = {i: assign[i] for i in range(n)}
    assert verify_assignment(csp, witness)
    return witness
