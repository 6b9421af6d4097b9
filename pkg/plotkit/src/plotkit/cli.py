"""plotkit <command> <in.csv> <out.png>

Commands: jointspace, workspace, transitions.  Exit codes: 0 success,
2 usage error, 1 bad input file.
"""

from __future__ import annotations

import sys

from .mapfile import SchemaError
from .render import render_jointspace, render_transitions, render_workspace

_COMMANDS = {
    "jointspace": render_jointspace,
    "workspace": render_workspace,
    "transitions": render_transitions,
}


def run(argv: list[str]) -> int:
    if len(argv) != 3 or argv[0] not in _COMMANDS:
        print("usage: plotkit {jointspace|workspace|transitions} <in.csv> <out.png>",
              file=sys.stderr)
        return 2
    command, src, dst = argv
    try:
        _COMMANDS[command](src, dst)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
