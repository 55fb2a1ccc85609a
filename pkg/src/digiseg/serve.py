"""Serve a segment system over the line protocol used by external oracles.

``python -m digiseg.serve <system-spec>`` answers each ``SEG px py qx qy``
line on standard input with ``n x1 y1 ... xn yn``.
"""

from __future__ import annotations

import sys

from .segments import format_reply, parse_system


def serve(spec: str, stdin=sys.stdin, stdout=sys.stdout) -> None:
    system = parse_system(spec)
    for line in stdin:
        parts = line.split()
        if not parts:
            continue
        if parts[0] != "SEG" or len(parts) != 5:
            stdout.write("ERR\n")
        else:
            px, py, qx, qy = (int(t) for t in parts[1:])
            stdout.write(format_reply(system.segment((px, py), (qx, qy))))
        stdout.flush()


if __name__ == "__main__":  # pragma: no cover
    serve(sys.argv[1])
