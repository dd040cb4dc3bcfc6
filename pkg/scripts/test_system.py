"""
Smoke Script

Quick end-to-end run of dgx over the shipped fixture workspaces.
"""
import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

import logging
from typing import List, Tuple

# Setup logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

FIXTURES = Path(__file__).parent.parent / "data" / "fixtures"


def banner(text: str):
    print("\n" + "=" * 70)
    print(f" {text} ".center(70))
    print("=" * 70 + "\n")


def smoke_commands() -> List[Tuple[List[str], int]]:
    """Command lines with the exit code each should give"""
    a2 = str(FIXTURES / "a2.dgx")
    cycle = str(FIXTURES / "three_cycle.dgx")
    return [
        (["h0", a2, "--cat", "A2"], 0),
        (["check-hses", a2, "--hcomplex", "alpha"], 0),
        (["check-hses", a2, "--hcomplex", "alpha0"], 1),
        (["check-square", a2, "--square", "beta_sq"], 0),
        (["ext-group", a2, "--cat", "A2", "--from", "SP1", "--to", "P2"], 0),
        (["almost-split", a2, "--cat", "A2"], 0),
        (["lattice", a2, "--cat", "A2"], 0),
        (["verify-exact", a2, "--structure", "Esplit"], 0),
        (["greatest", cycle, "--cat", "A3p"], 0),
        (["lambda-simplex", "2"], 0),
        (["doldkan-check"], 0),
    ]


def smoke_cli() -> bool:
    """Run every smoke command and compare exit codes"""
    from main import main

    banner("dgx smoke run")
    ok = True
    for argv, expected in smoke_commands():
        code = main(argv)
        mark = "✓" if code == expected else "✗"
        print(f"{mark} dgx {' '.join(argv)} -> {code}")
        ok = ok and code == expected
    return ok


if __name__ == "__main__":
    passed = smoke_cli()
    banner("Smoke run complete" if passed else "Smoke run FAILED")
    sys.exit(0 if passed else 1)
