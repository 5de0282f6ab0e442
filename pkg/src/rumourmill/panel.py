"""Panel state and input event handling.

The event API is the hardware boundary: pot, 12-step switch, 3-position
toggle, and a crank that triggers one milling per full revolution.
apply_event is pure, so the state owner can serialize it however it likes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from enum import Enum
from typing import Optional, Tuple

from rumourmill.errors import InvalidEvent
from rumourmill.params import Genre, MillSettings, POT_MAX, WhenSetting, pot_to_wackiness

SWITCH_DEBOUNCE = timedelta(milliseconds=30)
CRANK_IDLE_RESET = timedelta(seconds=5)
CRANK_TRIGGER_DEG = 360.0

GENRE_WHEEL = tuple(Genre)  # switch position p maps to GENRE_WHEEL[p - 1]


class EventKind(Enum):
    Pot = "pot"
    Switch = "switch"
    Toggle = "toggle"
    Crank = "crank"


@dataclass(frozen=True)
class InputEvent:
    kind: EventKind
    value: int
    at: datetime


@dataclass(frozen=True)
class PanelState:
    pot_raw: int = 0
    switch_pos: int = 1
    toggle_pos: WhenSetting = WhenSetting.Present
    crank_accum_deg: float = 0.0
    last_crank_event: Optional[datetime] = None
    last_switch_event: Optional[datetime] = None


def apply_event(state: PanelState, event: InputEvent) -> Tuple[PanelState, bool]:
    """Fold one event into the panel; True means a milling was triggered.

    Switch changes within 30 ms of the previous switch event are contact
    bounce and are dropped. Crank degrees accumulate while activity stays
    within 5 s windows; reaching a full revolution triggers and resets the
    accumulator. Reverse cranking never accumulates.
    """
    if event.kind is EventKind.Pot:
        if not 0 <= event.value <= POT_MAX:
            raise InvalidEvent(f"pot value {event.value} outside 0..{POT_MAX}")
        return replace(state, pot_raw=event.value), False

    if event.kind is EventKind.Switch:
        if not 1 <= event.value <= len(GENRE_WHEEL):
            raise InvalidEvent(f"switch position {event.value} outside 1..{len(GENRE_WHEEL)}")
        bouncing = (
            state.last_switch_event is not None
            and event.at - state.last_switch_event < SWITCH_DEBOUNCE
        )
        new = state if bouncing else replace(state, switch_pos=event.value)
        return replace(new, last_switch_event=event.at), False

    if event.kind is EventKind.Toggle:
        try:
            toggle = WhenSetting(event.value)
        except ValueError:
            raise InvalidEvent(f"toggle index {event.value} outside 0..2") from None
        return replace(state, toggle_pos=toggle), False

    delta = float(max(0, event.value))
    recent = (
        state.last_crank_event is not None
        and event.at - state.last_crank_event <= CRANK_IDLE_RESET
    )
    accum = state.crank_accum_deg + delta if recent else delta
    trigger = accum >= CRANK_TRIGGER_DEG
    return (
        replace(state, crank_accum_deg=0.0 if trigger else accum, last_crank_event=event.at),
        trigger,
    )


def current_settings(state: PanelState) -> MillSettings:
    """The settings the panel is dialled to right now."""
    return MillSettings(
        wackiness=pot_to_wackiness(state.pot_raw),
        genre=GENRE_WHEEL[state.switch_pos - 1],
        when=state.toggle_pos,
    )
