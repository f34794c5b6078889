"""Acquisition/tracking state labels shared across the simulator."""

from __future__ import annotations

from enum import IntEnum


class AptState(IntEnum):
    STABILIZE = 0
    ACQUIRE = 1
    COARSE_TRACK = 2
    FINE_TRACK1 = 3
    FINE_TRACK2 = 4
    LINKED = 5
    REACQUIRE = 6


# states in which a beacon is being tracked and the budget is defined
LOCK_STATES = frozenset(
    {AptState.COARSE_TRACK, AptState.FINE_TRACK1, AptState.FINE_TRACK2, AptState.LINKED}
)

STATE_NAMES = {
    AptState.STABILIZE: "Stabilize",
    AptState.ACQUIRE: "Acquire",
    AptState.COARSE_TRACK: "CoarseTrack",
    AptState.FINE_TRACK1: "FineTrack1",
    AptState.FINE_TRACK2: "FineTrack2",
    AptState.LINKED: "Linked",
    AptState.REACQUIRE: "Reacquire",
}

NAME_TO_STATE = {name: state for state, name in STATE_NAMES.items()}
