"""Random and planted-model instance generation, plus the bench harness."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from random import Random
from typing import Optional

from .csp import CcoaCsp, assert_cda, assert_roa, new_csp
from .geometry import cda_of, roa_of
from .propagation import pcs4c_plus
from .tables import AlgebraTables, get_tables


def _names(n: int) -> tuple:
    return tuple(f"v{i}" for i in range(n))


def random_nonempty_relation(rng: Random) -> int:
    return rng.randrange(1, 512)


def random_ccoa_csp(n: int, density: float, rng: Random) -> CcoaCsp:
    """Each pair and triple is constrained with probability ``density``
    to a uniformly random nonempty relation."""
    csp = new_csp(_names(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                assert_cda(csp, i, j, random_nonempty_relation(rng))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if rng.random() < density:
                    assert_roa(csp, i, j, k, random_nonempty_relation(rng))
    return csp


def random_atomic_cda_csp(n: int, rng: Random) -> CcoaCsp:
    """Every pair constrained to one uniformly random direction atom."""
    csp = new_csp(_names(n))
    for i in range(n):
        for j in range(i + 1, n):
            assert_cda(csp, i, j, 1 << rng.randrange(9))
    return csp


def planted_atomic_cda_csp(n: int, rng: Random, radius: Optional[int] = None) -> CcoaCsp:
    """Atomic direction network read off a random grid assignment.

    Satisfiable by construction; complements the uniform generator, which
    is almost always inconsistent at larger sizes.
    """
    if radius is None:
        radius = n
    points = [(rng.randint(-radius, radius), rng.randint(-radius, radius)) for _ in range(n)]
    csp = new_csp(_names(n))
    for i in range(n):
        for j in range(i + 1, n):
            assert_cda(csp, i, j, 1 << cda_of(points[i], points[j]))
    return csp


def weaken(mask: int, rng: Random, widen: float) -> int:
    """Add each absent atom with probability ``widen``."""
    for a in range(9):
        if not mask & (1 << a) and rng.random() < widen:
            mask |= 1 << a
    return mask


def planted_ccoa_csp(
    n: int,
    rng: Random,
    *,
    radius: Optional[int] = None,
    keep: float = 0.75,
    widen: float = 0.35,
) -> tuple:
    """Sample a grid model, read off its atomic relations, then weaken.

    Each canonical pair and triple keeps its read-off constraint with
    probability ``keep`` (widened by :func:`weaken`); the rest stay
    universal.  Returns ``(csp, assignment)``; the assignment satisfies
    the CSP by construction, so it must survive any sound refinement.
    """
    if radius is None:
        radius = 2 * n
    points = [(rng.randint(-radius, radius), rng.randint(-radius, radius)) for _ in range(n)]
    csp = new_csp(_names(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < keep:
                assert_cda(csp, i, j, weaken(1 << cda_of(points[i], points[j]), rng, widen))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if rng.random() < keep:
                    assert_roa(
                        csp, i, j, k, weaken(1 << roa_of(points[i], points[j], points[k]), rng, widen)
                    )
    return csp, {i: points[i] for i in range(n)}


@dataclass
class BenchRow:
    n: int
    seconds: list
    dequeues: list
    statuses: list

    @property
    def median_seconds(self) -> float:
        return statistics.median(self.seconds)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "median_seconds": self.median_seconds,
            "seconds": self.seconds,
            "dequeues": self.dequeues,
            "statuses": self.statuses,
        }


def bench_run(
    sizes,
    density: float,
    seed: int,
    *,
    instances: int = 5,
    satisfiable: bool = False,
    tables: Optional[AlgebraTables] = None,
) -> list:
    """Propagate random instances per size; report wall times and dequeues."""
    if tables is None:
        tables = get_tables()
    rows = []
    for n in sizes:
        seconds = []
        dequeues = []
        statuses = []
        for idx in range(instances):
            rng = Random(seed * 1_000_003 + n * 1_009 + idx)
            if satisfiable:
                csp, _ = planted_ccoa_csp(n, rng)
            else:
                csp = random_ccoa_csp(n, density, rng)
            start = time.perf_counter()
            outcome = pcs4c_plus(csp, tables)
            seconds.append(time.perf_counter() - start)
            dequeues.append(outcome.stats.dequeues)
            statuses.append(outcome.status.value)
        rows.append(BenchRow(n=n, seconds=seconds, dequeues=dequeues, statuses=statuses))
    return rows
