"""Ticket rendering: plain text lines plus the ESC/POS byte stream.

Every rumour leaves the mill clearly labelled as a rumour, with the input
settings echoed on the slip. The byte stream targets the common 58 mm
thermal printer profile: initialize, per-line emphasis flags, code page
437 text, feed, partial cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from rumourmill.milling import Rumour

DEFAULT_WIDTH = 32
MIN_WIDTH = 8

MARKER = "*** RUMOUR ***"
SUBTITLE = "automatically generated"
APOLOGY_MARKER = "* THE MILL IS RESTING *"
APOLOGY_BODY = (
    "The rumour mill has milled all it can for the moment. "
    "No fresh rumour could be ground and the local stock is bare. "
    "Please crank again in a little while."
)

ESC_INIT = b"\x1b\x40"
ESC_EMPH_ON = b"\x1b\x45\x01"
ESC_EMPH_OFF = b"\x1b\x45\x00"
ESC_FEED_4 = b"\x1b\x64\x04"
ESC_PARTIAL_CUT = b"\x1d\x56\x01"
LINE_FEED = b"\x0a"


@dataclass(frozen=True)
class Ticket:
    lines: Tuple[str, ...]
    escpos: bytes
    rumour_id: str


def wrap_text(text: str, width: int) -> List[str]:
    """Greedy word wrap; words longer than the width are hard-split."""
    if width < 1:
        raise ValueError(f"width {width} must be >= 1")
    lines: List[str] = []
    current = ""
    for word in text.split():
        if len(word) > width:
            if current:
                lines.append(current)
            while len(word) > width:
                lines.append(word[:width])
                word = word[width:]
            current = word
            continue
        if not current:
            current = word
        elif len(current) + 1 + len(word) <= width:
            current = f"{current} {word}"
        else:
            lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines


def _centered(text: str, width: int) -> str:
    return text.center(width).rstrip()


def encode_escpos(lines: Sequence[str], emphasized: Iterable[int] = ()) -> bytes:
    """Assemble the printer byte stream for the given ticket lines."""
    emphasized = set(emphasized)
    chunks = [ESC_INIT]
    for i, line in enumerate(lines):
        chunks.append(ESC_EMPH_ON if i in emphasized else ESC_EMPH_OFF)
        chunks.append(line.encode("cp437", errors="replace"))
        chunks.append(LINE_FEED)
    chunks.append(ESC_FEED_4)
    chunks.append(ESC_PARTIAL_CUT)
    return b"".join(chunks)


def render_ticket(rumour: Rumour, width: int = DEFAULT_WIDTH) -> Ticket:
    """Lay out one rumour as a printable slip.

    The genre echoed on the slip is the effective genre, so a visitor who
    chose Random sees which genre the mill actually used.
    """
    if width < MIN_WIDTH:
        raise ValueError(f"ticket width {width} below minimum {MIN_WIDTH}")
    rule = "=" * width
    lines: List[str] = [rule, _centered(MARKER, width), _centered(SUBTITLE, width), ""]
    headline_lines = wrap_text(rumour.headline, width)
    emphasized = range(len(lines), len(lines) + len(headline_lines))
    lines.extend(headline_lines)
    lines.append("")
    lines.extend(wrap_text(rumour.body, width))
    lines.append("")
    settings = (
        f"wackiness: {rumour.settings.wackiness.value:.2f}"
        f" / genre: {rumour.spec.effective_genre.slug}"
        f" / when: {rumour.settings.when.slug}"
    )
    lines.extend(wrap_text(settings, width))
    lines.append(f"source: {rumour.provenance.value}")
    lines.append(rumour.created_at.isoformat(timespec="seconds"))
    lines.append(rule)
    return Ticket(tuple(lines), encode_escpos(lines, emphasized), rumour.id)


def render_apology_ticket(ticket_id: str, created_at: datetime, width: int = DEFAULT_WIDTH) -> Ticket:
    """The fixed fallback slip; a crank never goes unanswered."""
    rule = "=" * width
    lines: List[str] = [rule, _centered(APOLOGY_MARKER, width), ""]
    lines.extend(wrap_text(APOLOGY_BODY, width))
    lines.append("")
    lines.append(created_at.isoformat(timespec="seconds"))
    lines.append(rule)
    return Ticket(tuple(lines), encode_escpos(lines), ticket_id)


def write_spool(ticket: Ticket, spool_dir: Union[str, Path]) -> Path:
    """Archive the plain-text ticket as <rumour-id>.txt."""
    spool = Path(spool_dir)
    spool.mkdir(parents=True, exist_ok=True)
    path = spool / f"{ticket.rumour_id}.txt"
    path.write_text("\n".join(ticket.lines) + "\n", encoding="utf-8")
    return path
