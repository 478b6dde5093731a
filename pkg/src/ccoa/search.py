"""Backtracking scenario search with propagation filtering.

A scenario is a refinement of a CSP in which every cell is a single
atom.  The search refines one non-atomic cell per node of a depth-first
tree, re-propagates, and backtracks on an empty cell.  Cell selection is
smallest domain first, pairs before triples on ties, then index order;
atoms are tried in stable index order, so runs are deterministic.

Tensor cells over repeated variables are not branch targets; once the
binary matrix is atomic their single realizable atom is written directly
(de against Eq, and dd / cp / cr otherwise, by index pattern).

Finding a scenario does not by itself decide consistency of a combined
CSP; realizability is reported separately through the grid oracle.  For
pure direction networks, path consistency is complete on atomic cells,
so the pair-only search is a decision procedure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .algebra import CP_BIT, CR_BIT, DD_BIT, DE_BIT, EQ_BIT, atoms_in
from .csp import BinaryMatrix, CcoaCsp, assert_cda, assert_roa, csp_from_components, tensor_index
from .propagation import path_consistency, pcs4c_plus
from .tables import AlgebraTables, get_tables


class SearchOutcome(Enum):
    SCENARIO_FOUND = "scenario-found"
    EXHAUSTED = "exhausted"


@dataclass
class SearchResult:
    outcome: SearchOutcome
    scenario: Optional[CcoaCsp]
    nodes_explored: int

    @property
    def found(self) -> bool:
        return self.outcome is SearchOutcome.SCENARIO_FOUND


class SearchBudgetExceeded(RuntimeError):
    """Raised when the node budget runs out before the search finishes."""

    def __init__(self, budget: int):
        super().__init__(f"scenario search exceeded its budget of {budget} nodes")
        self.budget = budget


def _pick_cell(csp: CcoaCsp, include_triples: bool):
    """Smallest non-atomic cell; pairs before triples, then index order."""
    n = csp.n
    b = csp.b.cells
    t = csp.t.cells
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            count = b[i * n + j].bit_count()
            if count > 1:
                key = (count, 0, (i, j))
                if best is None or key < best:
                    best = key
    if include_triples:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    count = t[tensor_index(n, i, j, k)].bit_count()
                    if count > 1:
                        key = (count, 1, (i, j, k))
                        if best is None or key < best:
                            best = key
    return best


def _fix_degenerate_cells(csp: CcoaCsp) -> None:
    """Write the atom forced on each repeated-index tensor cell.

    Requires an atomic binary matrix: Eq on (i, j) forces de, anything
    else forces the pattern's non-degenerate atom.
    """
    n = csp.n
    b = csp.b.cells
    t = csp.t.cells
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            equal = b[i * n + j] == EQ_BIT
            t[tensor_index(n, i, i, j)] = DE_BIT if equal else DD_BIT
            t[tensor_index(n, i, j, i)] = DE_BIT if equal else CP_BIT
            t[tensor_index(n, i, j, j)] = DE_BIT if equal else CR_BIT


def find_scenario(
    csp: CcoaCsp,
    tables: Optional[AlgebraTables] = None,
    *,
    budget: int = 100_000,
) -> SearchResult:
    """Depth-first search for an atomic, propagation-stable refinement.

    A returned scenario refines the input, has no empty cell, and is a
    fixpoint of the full closure.  ``EXHAUSTED`` means every branch hit
    an empty cell.  Raises :class:`SearchBudgetExceeded` after ``budget``
    branch attempts.
    """
    if tables is None:
        tables = get_tables()
    work = csp.copy()
    if pcs4c_plus(work, tables).inconsistent:
        return SearchResult(SearchOutcome.EXHAUSTED, None, 0)
    nodes = 0

    def dfs(state: CcoaCsp) -> Optional[CcoaCsp]:
        nonlocal nodes
        cell = _pick_cell(state, include_triples=True)
        if cell is None:
            leaf = state.copy()
            _fix_degenerate_cells(leaf)
            out = pcs4c_plus(leaf, tables)
            if out.inconsistent:
                return None
            assert out.stats.refinements == 0, "atomic leaf was not a fixpoint"
            return leaf
        _, kind, indices = cell
        mask = state.b.cells[indices[0] * state.n + indices[1]] if kind == 0 else state.t.get(*indices)
        for atom in atoms_in(mask):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(budget)
            child = state.copy()
            if kind == 0:
                assert_cda(child, indices[0], indices[1], 1 << atom)
            else:
                assert_roa(child, indices[0], indices[1], indices[2], 1 << atom)
            if pcs4c_plus(child, tables).inconsistent:
                continue
            result = dfs(child)
            if result is not None:
                return result
        return None

    scenario = dfs(work)
    if scenario is None:
        return SearchResult(SearchOutcome.EXHAUSTED, None, nodes)
    return SearchResult(SearchOutcome.SCENARIO_FOUND, scenario, nodes)


def cda_consistency(
    matrix: BinaryMatrix,
    tables: Optional[AlgebraTables] = None,
    *,
    budget: int = 100_000,
) -> bool:
    """Decide consistency of a pure direction network.

    Scenario search over the binary matrix alone with path-consistency
    filtering; complete because path consistency decides atomic direction
    networks.  Raises :class:`SearchBudgetExceeded` on budget exhaustion.
    """
    if tables is None:
        tables = get_tables()
    names = tuple(f"v{i}" for i in range(matrix.n))
    work = csp_from_components(names, b=matrix)
    if path_consistency(work, tables).inconsistent:
        return False
    nodes = 0

    def dfs(state: CcoaCsp) -> bool:
        nonlocal nodes
        cell = _pick_cell(state, include_triples=False)
        if cell is None:
            return True
        _, _, (i, j) = cell
        for atom in atoms_in(state.b.cells[i * state.n + j]):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(budget)
            child = state.copy()
            assert_cda(child, i, j, 1 << atom)
            if path_consistency(child, tables).inconsistent:
                continue
            if dfs(child):
                return True
        return False

    return dfs(work)
