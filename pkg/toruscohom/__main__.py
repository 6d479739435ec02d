"""
Batch entry point.

Usage:
    python -m toruscohom spectrum --config problem.json
    python -m toruscohom check --config problem.json
    python -m toruscohom gen cat --b 1/2,0 --coboundary-radius 2 | python -m toruscohom solve --config - --out result/
"""

import os
import sys

# Django reserves "check" for its system checks
SUBCOMMAND_ALIASES = {
    "check": "obstructions",
}


def main(argv=None):
    """Dispatch `toruscohom <subcommand>` to the matching management command."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "toruscohom.settings")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv if argv is None else argv)
    argv[0] = "toruscohom"
    if len(argv) > 1:
        argv[1] = SUBCOMMAND_ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
