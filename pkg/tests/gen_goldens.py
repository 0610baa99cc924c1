"""Regenerate the CLI golden files.

Run from the repository root::

    python tests/gen_goldens.py

Outputs are deterministic for a fixed environment; regenerate after any
intentional change to CLI formatting and review the diff.
"""

from __future__ import annotations

import contextlib
import io
import pathlib

from polylens.cli import main

GOLDEN_DIR = pathlib.Path(__file__).parent / "goldens"

COMMANDS = {
    "analyze_text.txt": ["analyze", "--expr", "1/w + w", "--n", "1", "--lambda", "1"],
    "analyze_json.txt": [
        "analyze", "--expr", "1/w + w", "--n", "1", "--lambda", "1", "--json",
    ],
    "sweep.csv": [
        "sweep", "--expr", "1/w + w", "--n", "1",
        "--lambda-min", "0.25", "--lambda-max", "4", "--steps", "33",
    ],
    "measure_quarter.txt": ["measure", "--interval", "0:pi/2"],
    "measure_full.txt": ["measure", "--interval", "-pi:pi"],
    "measure_product.txt": [
        "measure", "--dims", "2", "--interval", "0:pi/2", "--interval", "0:pi",
    ],
    "transform.txt": [
        "transform", "--expr", "1/u1", "--morph", "2*w1", "--n", "1",
        "--lambda", "0.5",
    ],
}


def run_command(argv: list[str]) -> tuple[int, str]:
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = main(argv)
    return code, buffer.getvalue()


def regenerate() -> None:
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, argv in COMMANDS.items():
        code, text = run_command(argv)
        if code != 0:
            raise SystemExit(f"{name}: exit code {code}")
        (GOLDEN_DIR / name).write_text(text)
        print(f"wrote {name} ({len(text)} bytes)")


if __name__ == "__main__":
    regenerate()
