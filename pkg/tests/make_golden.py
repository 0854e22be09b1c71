"""Regenerate the CLI golden files: ``python tests/make_golden.py``.

Review the diff before committing; the goldens are the CLI contract.
"""

import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent
FIXTURES = ("section4", "example51", "example52")
COMMANDS = ("spectrum", "bounds", "compare", "certify")


def run(command, fixture):
    path = HERE / "data" / f"{fixture}.tensor"
    return subprocess.run(
        [sys.executable, "-m", "tensorbounds", command, str(path)],
        capture_output=True,
        text=True,
    )


def main():
    out = HERE / "golden"
    out.mkdir(exist_ok=True)
    for fixture in FIXTURES:
        for command in COMMANDS:
            result = run(command, fixture)
            (out / f"{fixture}.{command}.txt").write_text(result.stdout)
            print(f"{fixture} {command}: exit {result.returncode}")


if __name__ == "__main__":
    main()
