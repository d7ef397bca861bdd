#!/usr/bin/env python3
"""Run a few bundled example systems through the command-line interface.

Each example is written to a temporary file and dispatched exactly as
``sdres <command> <file>`` would be; the structured result documents are
printed as JSON.
"""

import json
import sys
import tempfile
from pathlib import Path

from sdres.cli import run

EXAMPLES = (
    (
        "derivative-triple",
        "vars y1 y2;\n"
        "P0: y1'', y1''', y2''';\n"
        "P1: y1'', y1''', y2''';\n"
        "P2: y1'', y1''', y2''';\n",
        (["essential"], ["bounds"], ["resultant", "--verify"]),
    ),
    (
        "cascade",
        "vars y1 y2;\nP0: 1, y1*y1';\nP1: 1, y1;\nP2: 1, y2';\n",
        (["rank-essential"], ["resultant", "--verify"]),
    ),
    (
        "product-pair",
        "vars y1 y2;\nP0: 1, y1*y2;\nP1: 1, y1*y2';\nP2: 1, y1'*y2';\n",
        (["bounds"], ["resultant", "--verify"]),
    ),
    (
        "monomial-set",
        "vars y1 y2 y3 y4 y5;\n"
        "B: y1'''*y2'''*y3'*y4*y5^2, y1''*y2'''*y3'*y3''*y4*y5^2,"
        " y1'*y3*y3', y1', y1^2;\n",
        (["tshape"], ["dtrdeg"]),
    ),
)


def main() -> int:
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, text, commands in EXAMPLES:
            path = Path(tmp) / f"{name}.txt"
            path.write_text(text)
            for cmd in commands:
                code, doc = run([cmd[0], str(path), *cmd[1:]])
                doc.pop("_format", None)
                print(f"=== {name}: {' '.join(cmd)} (exit {code}) ===")
                print(json.dumps(doc, sort_keys=True, indent=2))
                if code != 0:
                    failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
