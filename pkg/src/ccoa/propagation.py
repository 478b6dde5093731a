"""Queue-driven closure engine for combined direction/orientation CSPs.

The full procedure interleaves four refinement channels over one work
queue until a fixpoint or an empty cell is reached:

* ``pc``: path consistency on the binary matrix
  (``B[i][k] &= B[i][j] o B[j][k]`` and the symmetric step);
* ``s4c``: the ternary closure towards strong 4-consistency
  (``T[x][y][m] &= T[x][y][z] o T[x][z][m]`` for every ordered pair
  (x, z) drawn from the dequeued triple, y being its third member);
* ``cda->roa``: whenever a pair is dequeued, the interaction operation
  refines the orientation cell of every covering triple;
* ``roa->cda``: whenever a triple is dequeued, its orientation cell
  refines the direction cells of its three sides; pair dequeues re-fire
  the projection for every covering triple because its side formulas
  read the binary cells.

The queue holds pairs ``(i, j)`` with ``i <= j`` and strictly increasing
triples, FIFO with membership deduplication, so runs are reproducible.
Triples over repeated variables are never refinement targets: their
tensor cells are fixed by the initialization closures and participate in
compositions read-only.

Every refinement strictly shrinks a nine-atom set, so each pair or
triple re-enters the queue at most a constant number of times and the
whole run performs O(n^4) work.  When a cell empties, the empty value is
written through its permutation closure, the culprit cell and the
refining operand are recorded, and the engine stops; refinements made so
far are preserved for explanation.

The engine mutates one CSP and is single-threaded per call; distinct
CSPs may be propagated in parallel against shared tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .algebra import (
    BP_BIT,
    BR_BIT,
    BW_BIT,
    CP_BIT,
    CR_BIT,
    DD_BIT,
    DE_BIT,
    EQ_BIT,
    LR_BIT,
    NOT_EQ,
    RR_BIT,
    format_cda,
    format_roa,
)
from .csp import CcoaCsp, tensor_index
from .tables import AlgebraTables, get_tables


class PropagationStatus(Enum):
    FIXPOINT = "fixpoint"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Culprit:
    """Where an empty relation arose: cell kind, indices, channel, operands."""

    kind: str
    indices: tuple
    channel: str
    cell: int
    operand: int


@dataclass
class PropagationStats:
    dequeues: int = 0
    pair_dequeues: int = 0
    triple_dequeues: int = 0
    pc_refinements: int = 0
    s4c_refinements: int = 0
    cda_to_roa_refinements: int = 0
    roa_to_cda_refinements: int = 0

    @property
    def refinements(self) -> int:
        return (
            self.pc_refinements
            + self.s4c_refinements
            + self.cda_to_roa_refinements
            + self.roa_to_cda_refinements
        )

    def as_dict(self) -> dict:
        return {
            "dequeues": self.dequeues,
            "pair_dequeues": self.pair_dequeues,
            "triple_dequeues": self.triple_dequeues,
            "refinements": {
                "pc": self.pc_refinements,
                "s4c": self.s4c_refinements,
                "cda_to_roa": self.cda_to_roa_refinements,
                "roa_to_cda": self.roa_to_cda_refinements,
            },
        }


@dataclass(frozen=True)
class TraceStep:
    channel: str
    kind: str
    indices: tuple
    before: int
    after: int

    def render(self, variables) -> str:
        names = ",".join(variables[x] for x in self.indices)
        fmt = format_cda if self.kind == "pair" else format_roa
        cell = "B" if self.kind == "pair" else "T"
        return f"{self.channel}: {cell}[{names}] {fmt(self.before)} -> {fmt(self.after)}"


@dataclass
class PropagationOutcome:
    status: PropagationStatus
    culprit: Optional[Culprit]
    stats: PropagationStats
    trace: Optional[list] = field(default=None, repr=False)

    @property
    def inconsistent(self) -> bool:
        return self.status is PropagationStatus.INCONSISTENT


class WorkQueue:
    """FIFO of pair/triple work items with membership deduplication.

    Pairs are stored with i <= j and triples with i < j < k, so each
    unordered item has one canonical form in the queue.
    """

    __slots__ = ("_items", "_members")

    def __init__(self):
        self._items = deque()
        self._members = set()

    def push_pair(self, i: int, j: int) -> None:
        item = (i, j) if i <= j else (j, i)
        if item not in self._members:
            self._members.add(item)
            self._items.append(item)

    def push_triple(self, i: int, j: int, k: int) -> None:
        item = tuple(sorted((i, j, k)))
        if item not in self._members:
            self._members.add(item)
            self._items.append(item)

    def pop(self) -> tuple:
        item = self._items.popleft()
        self._members.discard(item)
        return item

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item) -> bool:
        return item in self._members


class _EmptyCell(Exception):
    def __init__(self, culprit: Culprit):
        self.culprit = culprit


def pcs4c_plus(
    csp: CcoaCsp,
    tables: Optional[AlgebraTables] = None,
    *,
    trace: Optional[list] = None,
    check_invariants: bool = False,
) -> PropagationOutcome:
    """Run the full closure with both interaction channels, in place.

    On a fixpoint the binary matrix is path consistent, the tensor is
    closed under the ternary composition step, and neither interaction
    channel can refine anything further.  Output refines input cell-wise,
    and any point model of the input still satisfies the output.
    Inconsistency (an empty cell) is a result, not an error.
    """
    return _propagate(csp, tables, True, True, True, trace, check_invariants)


def path_consistency(
    csp: CcoaCsp,
    tables: Optional[AlgebraTables] = None,
    *,
    trace: Optional[list] = None,
    check_invariants: bool = False,
) -> PropagationOutcome:
    """Binary-only closure: no ternary steps, no interaction."""
    return _propagate(csp, tables, True, False, False, trace, check_invariants)


def strong_4_consistency(
    csp: CcoaCsp,
    tables: Optional[AlgebraTables] = None,
    *,
    trace: Optional[list] = None,
    check_invariants: bool = False,
) -> PropagationOutcome:
    """Ternary-only closure: no binary steps, no interaction."""
    return _propagate(csp, tables, False, True, False, trace, check_invariants)


def _propagate(csp, tables, use_pairs, use_triples, use_interaction, trace, check_invariants):
    if tables is None:
        tables = get_tables()
    n = csp.n
    B = csp.b.cells
    T = csp.t.cells
    stats = PropagationStats()

    conv_c = tables.cda_conv_rel
    conv_r = tables.roa_conv_rel
    rot_r = tables.roa_rot_rel
    cda_rows = tables._cda_rows
    roa_rows = tables._roa_rows
    ot_rows = tables._otimes_rows
    lir_rel = tables.lir_rel
    rir_rel = tables.rir_rel
    # Local bindings of the atom bits for the hot loops.
    EQ = EQ_BIT
    NEQ = NOT_EQ
    DE = DE_BIT
    DD = DD_BIT
    LR = LR_BIT
    BP = BP_BIT
    CP = CP_BIT
    BW = BW_BIT
    CR = CR_BIT
    BR = BR_BIT
    RR = RR_BIT

    queue = WorkQueue()

    def record(channel, kind, indices, before, after):
        if trace is not None:
            trace.append(TraceStep(channel, kind, indices, before, after))

    # A cell that is already empty means the input was inconsistent before
    # any propagation; report it as the culprit directly.
    for i in range(n):
        for j in range(n):
            if B[i * n + j] == 0:
                return PropagationOutcome(
                    PropagationStatus.INCONSISTENT,
                    Culprit("pair", (i, j), "input", 0, 0),
                    stats,
                    trace,
                )
            for k in range(n):
                if T[tensor_index(n, i, j, k)] == 0:
                    return PropagationOutcome(
                        PropagationStatus.INCONSISTENT,
                        Culprit("triple", (i, j, k), "input", 0, 0),
                        stats,
                        trace,
                    )

    def compose_cda(r, s):
        out = 0
        while r:
            low = r & -r
            r ^= low
            out |= cda_rows[low.bit_length() - 1][s]
        return out

    def compose_roa(r, s):
        out = 0
        while r:
            low = r & -r
            r ^= low
            out |= roa_rows[low.bit_length() - 1][s]
        return out

    def otimes(r, s):
        out = 0
        while r:
            low = r & -r
            r ^= low
            out |= ot_rows[low.bit_length() - 1][s]
        return out

    def write_pair(i, j, value):
        B[i * n + j] = value
        B[j * n + i] = conv_c[value] if i != j else value

    def write_triple(i, j, k, value):
        # One cell write fans out to all six permutation images.
        r1 = rot_r[value]
        r2 = rot_r[r1]
        T[tensor_index(n, i, j, k)] = value
        T[tensor_index(n, i, k, j)] = conv_r[value]
        T[tensor_index(n, j, k, i)] = r1
        T[tensor_index(n, j, i, k)] = conv_r[r1]
        T[tensor_index(n, k, i, j)] = r2
        T[tensor_index(n, k, j, i)] = conv_r[r2]

    def cda_to_roa(i, j, k):
        idx = tensor_index(n, i, j, k)
        cur = T[idx]
        implied = otimes(B[i * n + j], B[j * n + k])
        new = cur & implied
        if new == cur:
            return
        write_triple(i, j, k, new)
        record("cda->roa", "triple", (i, j, k), cur, new)
        if new == 0:
            raise _EmptyCell(Culprit("triple", (i, j, k), "cda->roa", cur, implied))
        stats.cda_to_roa_refinements += 1
        queue.push_triple(i, j, k)

    def pair_propagation(i, j, k):
        ij = B[i * n + j]
        ik = i * n + k
        cur = B[ik]
        comp = compose_cda(ij, B[j * n + k])
        new = cur & comp
        if new == 0:
            write_pair(i, k, 0)
            record("pc", "pair", (i, k), cur, 0)
            raise _EmptyCell(Culprit("pair", (i, k), "pc", cur, comp))
        if new != cur:
            stats.pc_refinements += 1
            write_pair(i, k, new)
            record("pc", "pair", (i, k), cur, new)
            queue.push_pair(i, k)
        if use_interaction and k != i and k != j and i != j:
            cda_to_roa(i, j, k)
        kj = k * n + j
        cur = B[kj]
        comp = compose_cda(B[k * n + i], B[i * n + j])
        new = cur & comp
        if new == 0:
            write_pair(k, j, 0)
            record("pc", "pair", (k, j), cur, 0)
            raise _EmptyCell(Culprit("pair", (k, j), "pc", cur, comp))
        if new != cur:
            stats.pc_refinements += 1
            write_pair(k, j, new)
            record("pc", "pair", (k, j), cur, new)
            queue.push_pair(k, j)
        if use_interaction and k != i and k != j and i != j:
            cda_to_roa(k, i, j)
            # The side projections read the binary cells, so a pair
            # dequeue must also re-fire them for every covering triple;
            # triple dequeues alone would never see pure binary changes.
            a, b, c = sorted((i, j, k))
            roa_to_cda(a, b, c)

    def s4c_step(a, b, m, source1, source2):
        # T[a][b][m] &= T[source1] o T[source2] with closure and requeue.
        idx = tensor_index(n, a, b, m)
        cur = T[idx]
        comp = compose_roa(T[source1], T[source2])
        new = cur & comp
        if new == 0:
            write_triple(a, b, m, 0)
            record("s4c", "triple", (a, b, m), cur, 0)
            raise _EmptyCell(Culprit("triple", (a, b, m), "s4c", cur, comp))
        if new != cur:
            stats.s4c_refinements += 1
            write_triple(a, b, m, new)
            record("s4c", "triple", (a, b, m), cur, new)
            queue.push_triple(a, b, m)

    def roa_to_cda(i, j, k):
        # Three sequential side refinements; each union reads the matrix
        # as left by the previous one.
        for side in (0, 1, 2):
            R = T[tensor_index(n, i, j, k)]
            bij = B[i * n + j]
            bji = B[j * n + i]
            bik = B[i * n + k]
            bki = B[k * n + i]
            bjk = B[j * n + k]
            bkj = B[k * n + j]
            u = 0
            if side == 0:
                if R & (DE | DD):
                    u |= bij & EQ
                if R & (LR | RR):
                    u |= bij & NEQ
                if R & BP:
                    u |= bij & bki & bkj & NEQ
                if R & CP:
                    u |= bij & bkj & NEQ
                if R & BW:
                    u |= bij & bik & bkj & NEQ
                if R & CR:
                    u |= bij & bik & NEQ
                if R & BR:
                    u |= bij & bik & bjk & NEQ
                a, b = i, j
                cur = bij
            elif side == 1:
                if R & DE:
                    u |= bik & EQ
                if R & DD:
                    u |= bik & bjk & NEQ
                if R & LR:
                    u |= bik & lir_rel[bij]
                if R & BP:
                    u |= bji
                if R & CP:
                    u |= bik & EQ
                if R & (BW | CR | BR):
                    u |= bij
                if R & RR:
                    u |= bik & rir_rel[bij]
                a, b = i, k
                cur = bik
            else:
                if R & DE:
                    u |= bjk & EQ
                if R & (DD | BP):
                    u |= bik
                if R & LR:
                    u |= bjk & rir_rel[bji]
                if R & (CP | BW):
                    u |= bji
                if R & CR:
                    u |= bjk & EQ
                if R & BR:
                    u |= bij
                if R & RR:
                    u |= bjk & lir_rel[bji]
                a, b = j, k
                cur = bjk
            new = cur & u
            if new == 0:
                write_pair(a, b, 0)
                record("roa->cda", "pair", (a, b), cur, 0)
                raise _EmptyCell(Culprit("pair", (a, b), "roa->cda", cur, u))
            if new != cur:
                stats.roa_to_cda_refinements += 1
                write_pair(a, b, new)
                record("roa->cda", "pair", (a, b), cur, new)
                queue.push_pair(a, b)

    def triple_propagation(i, j, k, m):
        # The symmetric sweep: the dequeued cell feeds the composition as
        # the left operand in all six of its orderings.  Three orderings
        # would leave the queue unable to revisit every reading of a
        # changed cell (the binary channel gets away with two because the
        # converse law folds the left and right positions together), and
        # the closure would stop short of a true fixpoint.
        if m != i and m != j:
            s4c_step(i, j, m, tensor_index(n, i, j, k), tensor_index(n, i, k, m))
            s4c_step(j, i, m, tensor_index(n, j, i, k), tensor_index(n, j, k, m))
        if m != i and m != k:
            s4c_step(i, k, m, tensor_index(n, i, k, j), tensor_index(n, i, j, m))
            s4c_step(k, i, m, tensor_index(n, k, i, j), tensor_index(n, k, j, m))
        if m != j and m != k:
            s4c_step(j, k, m, tensor_index(n, j, k, i), tensor_index(n, j, i, m))
            s4c_step(k, j, m, tensor_index(n, k, j, i), tensor_index(n, k, i, m))
        if use_interaction:
            roa_to_cda(i, j, k)

    if use_pairs:
        for i in range(n):
            for j in range(i, n):
                queue.push_pair(i, j)
    if use_triples:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    queue.push_triple(i, j, k)

    try:
        while queue:
            item = queue.pop()
            stats.dequeues += 1
            if len(item) == 2:
                stats.pair_dequeues += 1
                i, j = item
                for k in range(n):
                    pair_propagation(i, j, k)
            else:
                stats.triple_dequeues += 1
                i, j, k = item
                for m in range(n):
                    triple_propagation(i, j, k, m)
            if check_invariants:
                bad = csp.closure_violations()
                if bad:
                    raise AssertionError(f"closure invariant broken: {bad[0]}")
    except _EmptyCell as stop:
        return PropagationOutcome(PropagationStatus.INCONSISTENT, stop.culprit, stats, trace)
    return PropagationOutcome(PropagationStatus.FIXPOINT, None, stats, trace)
