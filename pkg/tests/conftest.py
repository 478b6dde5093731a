import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

KB_DIR = Path(__file__).resolve().parents[1] / "kb"

from ccoa.algebra import CDA_ATOM_NAMES, ROA_ATOM_NAMES  # noqa: E402

_CDA = {name: i for i, name in enumerate(CDA_ATOM_NAMES)}
_ROA = {name: i for i, name in enumerate(ROA_ATOM_NAMES)}


def cda_mask(*names: str) -> int:
    mask = 0
    for name in names:
        mask |= 1 << _CDA[name]
    return mask


def roa_mask(*names: str) -> int:
    mask = 0
    for name in names:
        mask |= 1 << _ROA[name]
    return mask


def kb_path(name: str) -> str:
    return str(KB_DIR / name)


@pytest.fixture(scope="session")
def tables():
    from ccoa.tables import get_tables

    return get_tables()
