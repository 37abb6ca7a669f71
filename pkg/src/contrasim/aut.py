"""Reading and writing transition systems in the Aldebaran `.aut` format.

A file consists of a header ``des (<initial>, <#transitions>, <#states>)``
followed by one ``(<src>, "<label>", <dst>)`` record per line.  The labels
``tau`` and ``i`` denote the internal action; everything else is a visible
action name.  Output is ASCII with newline-terminated records and serializes
the internal action as ``tau``.
"""

import re

from .errors import ParseError
from .lts import Action, Lts, TAU

_HEADER_RE = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE_RE = re.compile(r'^\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)\s*$')

_INTERNAL_LABELS = ("tau", "i")


def parse_aut(text: str) -> tuple[Lts, int]:
    """Parse `.aut` text into an LTS plus its declared initial state."""
    lines = text.splitlines()
    header_idx = None
    for i, line in enumerate(lines):
        if line.strip():
            header_idx = i
            break
    if header_idx is None:
        raise ParseError("empty input, expected a des(...) header")

    m = _HEADER_RE.match(lines[header_idx].strip())
    if m is None:
        raise ParseError(
            f"malformed header {lines[header_idx].strip()!r}, "
            f"expected des (<initial>, <#transitions>, <#states>)",
            line=header_idx + 1,
        )
    initial, n_edges, n_states = (int(g) for g in m.groups())
    if initial >= n_states:
        raise ParseError(
            f"initial state {initial} not below state count {n_states}",
            line=header_idx + 1,
        )

    transitions = []
    for lineno, raw in enumerate(lines[header_idx + 1 :], start=header_idx + 2):
        line = raw.strip()
        if not line:
            continue
        m = _EDGE_RE.match(line)
        if m is None:
            raise ParseError(f"malformed transition record {line!r}", line=lineno)
        src, label, dst = int(m.group(1)), m.group(2), int(m.group(3))
        if src >= n_states or dst >= n_states:
            raise ParseError(
                f"transition ({src}, {label!r}, {dst}) exceeds state count {n_states}",
                line=lineno,
            )
        if label in _INTERNAL_LABELS:
            action = TAU
        else:
            try:
                action = Action(label)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
        transitions.append((src, action, dst))

    if len(transitions) != n_edges:
        raise ParseError(
            f"header declares {n_edges} transitions but {len(transitions)} were found"
        )
    return Lts(n_states, transitions), initial


def write_aut(lts: Lts, initial: int) -> str:
    """Serialize an LTS in the format accepted by :func:`parse_aut`."""
    if not (0 <= initial < lts.state_count):
        raise IndexError(f"initial state {initial} outside 0..{lts.state_count - 1}")
    out = [f"des ({initial},{len(lts.transitions)},{lts.state_count})"]
    for src, action, dst in lts.transitions:
        out.append(f'({src},"{action}",{dst})')
    return "\n".join(out) + "\n"
