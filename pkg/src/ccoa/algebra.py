"""Atoms and relation values for the two orientation calculi.

Two finite relation algebras over 2D points are combined in this package:

* a binary cardinal-direction algebra with nine atoms
  ``No NE Ea SE So SW We NW Eq`` ("north of", "north-east of", ...,
  "equal"), read against a global west-east / south-north frame; and
* a ternary relative-orientation algebra with nine atoms
  ``de dd lr bp cp bw cr br rr``.  A ternary atom
  ``t(parent, reference, primary)`` locates the primary point relative
  to the directed line from the parent to the reference point;
  ``lr(A, B, C)`` reads "viewed from A, C is to the left of B".

A relation of either calculus is any subset of its nine atoms.  Relations
are represented as 9-bit integer masks, bit ``i`` standing for the atom
with index ``i``.  Plain ints keep the values hashable, cheap to copy and
directly usable as table indices, so they are safe to share between
threads.  Everything in this module is a pure function.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, Iterator


class CdaAtom(IntEnum):
    """Cardinal-direction atoms with their stable indices."""

    No = 0
    NE = 1
    Ea = 2
    SE = 3
    So = 4
    SW = 5
    We = 6
    NW = 7
    Eq = 8


class RoaAtom(IntEnum):
    """Relative-orientation atoms with their stable indices.

    de: degenerate equal, dd: degenerate distinct, lr: left of the
    reference, bp: behind the parent, cp: coincides with the parent,
    bw: between parent and reference, cr: coincides with the reference,
    br: behind the reference, rr: right of the reference.
    """

    de = 0
    dd = 1
    lr = 2
    bp = 3
    cp = 4
    bw = 5
    cr = 6
    br = 7
    rr = 8


# Relation values are 9-bit masks; these aliases mark intent in signatures.
CdaRelation = int
RoaRelation = int

CDA_ATOM_NAMES = tuple(a.name for a in CdaAtom)
ROA_ATOM_NAMES = tuple(a.name for a in RoaAtom)

EMPTY = 0
UNIVERSAL = 0x1FF  # all nine atoms, either calculus

EQ_BIT = 1 << CdaAtom.Eq
NOT_EQ = UNIVERSAL ^ EQ_BIT

DE_BIT = 1 << RoaAtom.de
DD_BIT = 1 << RoaAtom.dd
LR_BIT = 1 << RoaAtom.lr
BP_BIT = 1 << RoaAtom.bp
CP_BIT = 1 << RoaAtom.cp
BW_BIT = 1 << RoaAtom.bw
CR_BIT = 1 << RoaAtom.cr
BR_BIT = 1 << RoaAtom.br
RR_BIT = 1 << RoaAtom.rr


def bit(atom: int) -> int:
    """Mask containing exactly the given atom."""
    return 1 << atom


def mask_of(*atoms: int) -> int:
    """Mask containing the given atoms."""
    m = 0
    for a in atoms:
        m |= 1 << a
    return m


def atoms_in(mask: int) -> Iterator[int]:
    """Atom indices present in ``mask``, in stable index order."""
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def atom_count(mask: int) -> int:
    """Number of atoms in the relation."""
    return mask.bit_count()


def is_empty(mask: int) -> bool:
    return mask == 0


def is_subset(r: int, s: int) -> bool:
    """True when every atom of ``r`` is in ``s``."""
    return r & ~s == 0


def intersect(r: int, s: int) -> int:
    return r & s


def union(r: int, s: int) -> int:
    return r | s


# Atom permutation tables.  The cardinal-direction converse swaps the two
# arguments, which maps every directional atom to the opposite compass
# direction (the eight directional atoms sit at indices 0..7 in 45-degree
# steps) and fixes Eq.  The ternary converse swaps reference and primary,
# the rotation cycles the three arguments; both are certified against the
# geometric point semantics by the test suite and the table oracle.
CDA_CONVERSE_ATOM = tuple(
    CdaAtom((a + 4) % 8) if a != CdaAtom.Eq else CdaAtom.Eq for a in CdaAtom
)

ROA_CONVERSE_ATOM = (
    RoaAtom.de,  # de
    RoaAtom.cp,  # dd
    RoaAtom.rr,  # lr
    RoaAtom.bp,  # bp
    RoaAtom.dd,  # cp
    RoaAtom.br,  # bw
    RoaAtom.cr,  # cr
    RoaAtom.bw,  # br
    RoaAtom.lr,  # rr
)

ROA_ROTATION_ATOM = (
    RoaAtom.de,  # de
    RoaAtom.cp,  # dd
    RoaAtom.lr,  # lr
    RoaAtom.bw,  # bp
    RoaAtom.cr,  # cp
    RoaAtom.br,  # bw
    RoaAtom.dd,  # cr
    RoaAtom.bp,  # br
    RoaAtom.rr,  # rr
)


def lift_atom_map(atom_map: tuple) -> tuple:
    """Lift a per-atom permutation to all 512 relation masks by union."""
    out = [0] * 512
    for m in range(1, 512):
        low = m & -m
        out[m] = out[m ^ low] | (1 << atom_map[low.bit_length() - 1])
    return tuple(out)


def lift_mask_map(mask_map: Iterable[int]) -> tuple:
    """Lift a per-atom mask table to all 512 relation masks by union."""
    mm = tuple(mask_map)
    out = [0] * 512
    for m in range(1, 512):
        low = m & -m
        out[m] = out[m ^ low] | mm[low.bit_length() - 1]
    return tuple(out)


_CDA_CONVERSE_REL = lift_atom_map(CDA_CONVERSE_ATOM)
_ROA_CONVERSE_REL = lift_atom_map(ROA_CONVERSE_ATOM)
_ROA_ROTATION_REL = lift_atom_map(ROA_ROTATION_ATOM)


def cda_converse(r: CdaRelation) -> CdaRelation:
    """Converse of a cardinal-direction relation (argument swap)."""
    return _CDA_CONVERSE_REL[r]


def roa_converse(r: RoaRelation) -> RoaRelation:
    """Converse of an orientation relation (swap reference and primary)."""
    return _ROA_CONVERSE_REL[r]


def roa_rotation(r: RoaRelation) -> RoaRelation:
    """Rotation of an orientation relation (cycle the three arguments).

    Applying the rotation three times is the identity.
    """
    return _ROA_ROTATION_REL[r]


_CDA_INDEX = {name: i for i, name in enumerate(CDA_ATOM_NAMES)}
_ROA_INDEX = {name: i for i, name in enumerate(ROA_ATOM_NAMES)}


def _format(mask: int, names: tuple, bare_atoms: bool) -> str:
    if mask == UNIVERSAL:
        return "?"
    parts = [names[a] for a in atoms_in(mask)]
    if bare_atoms and len(parts) == 1:
        return parts[0]
    return "{" + ",".join(parts) + "}"


def _parse(token: str, index: dict, kind: str) -> int:
    if token == "?":
        return UNIVERSAL
    if token.startswith("{") and token.endswith("}"):
        body = token[1:-1].strip()
        if not body:
            raise ValueError(f"empty {kind} relation literal")
        mask = 0
        for part in body.split(","):
            name = part.strip()
            if name not in index:
                raise ValueError(f"unknown {kind} atom {name!r}")
            mask |= 1 << index[name]
        return mask
    if token in index:
        return 1 << index[token]
    raise ValueError(f"unknown {kind} atom {token!r}")


def format_cda(mask: CdaRelation, *, bare_atoms: bool = False) -> str:
    """Serialize: ``?`` for the universal relation, else ``{a,b,...}``."""
    return _format(mask, CDA_ATOM_NAMES, bare_atoms)


def format_roa(mask: RoaRelation, *, bare_atoms: bool = False) -> str:
    return _format(mask, ROA_ATOM_NAMES, bare_atoms)


def parse_cda(token: str) -> CdaRelation:
    """Parse an atom name, ``?``, or ``{a,b,...}`` into a mask."""
    return _parse(token, _CDA_INDEX, "cardinal-direction")


def parse_roa(token: str) -> RoaRelation:
    return _parse(token, _ROA_INDEX, "orientation")
