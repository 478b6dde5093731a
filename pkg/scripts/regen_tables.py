#!/usr/bin/env python3
"""Re-derive the algebra tables and refresh the packaged JSON.

The packaged file is the engine's runtime ground truth; regenerate it
after touching the geometric semantics or the derivation, then run
``ccoa tables verify`` and the test suite.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ccoa.tables import DERIVED_TABLES_FILE, derive_tables, tables_to_json  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--radius", type=int, default=4, help="difference-grid radius")
    parser.add_argument("--out", default=str(DERIVED_TABLES_FILE))
    args = parser.parse_args()
    text = tables_to_json(derive_tables(args.radius))
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote {args.out} ({len(text)} bytes, radius {args.radius})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
