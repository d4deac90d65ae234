"""Scan-policy decision engines.

Two pure state machines over the same event vocabulary.  The baseline
mirrors a stock supplicant: periodic active scans whose interval grows
3, 9, 27, ... capped at 300 seconds, plus active scans on maintenance
trouble and weak signal.  The modified strategy only goes active for
connection establishment (including the sub -70 dBm handover trigger)
and answers everything else with passive scans or nothing; periodic
scanning is disabled entirely while associated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from .causes import CauseLabel, MAINTENANCE_CAUSES

MIN_SCAN_INTERVAL_S = 3.0
MAX_SCAN_INTERVAL_S = 300.0
INTERVAL_GROWTH = 3.0

HANDOVER_TRIGGER_DBM = -70.0
# Re-arm the handover trigger only after the signal recovers past this,
# so a noisy boundary cannot fire scan after scan.
HANDOVER_REARM_DBM = -65.0


class OutOfOrderEvent(ValueError):
    pass


class ScanDecision(str, Enum):
    NONE = "none"
    PASSIVE_SCAN = "passive-scan"
    ACTIVE_SCAN = "active-scan"


@dataclass(frozen=True)
class RssiSample:
    t: float
    dbm: float


@dataclass(frozen=True)
class AssociationChange:
    t: float
    associated: bool


@dataclass(frozen=True)
class MaintenanceCause:
    t: float
    cause: CauseLabel

    def __post_init__(self) -> None:
        if self.cause not in MAINTENANCE_CAUSES:
            raise ValueError("%s is not a maintenance cause" % self.cause)


@dataclass(frozen=True)
class TimerTick:
    t: float


@dataclass(frozen=True)
class ConnectRequest:
    t: float


PolicyEvent = Union[RssiSample, AssociationChange, MaintenanceCause, TimerTick, ConnectRequest]


@dataclass(frozen=True)
class PolicyState:
    associated: bool = False
    last_rssi: Optional[float] = None
    next_periodic_at: Optional[float] = MIN_SCAN_INTERVAL_S
    periodic_interval: float = MIN_SCAN_INTERVAL_S
    handover_armed: bool = True
    last_event_at: float = float("-inf")


def initial_state(now: float = 0.0, associated: bool = False) -> PolicyState:
    """Fresh policy state; the first periodic scan is due one interval out."""
    return PolicyState(
        associated=associated,
        next_periodic_at=now + MIN_SCAN_INTERVAL_S,
        last_event_at=now,
    )


def _check_order(state: PolicyState, t: float) -> None:
    if t < state.last_event_at:
        raise OutOfOrderEvent("event at %.6f precedes %.6f" % (t, state.last_event_at))


def _grow(interval: float) -> float:
    return min(interval * INTERVAL_GROWTH, MAX_SCAN_INTERVAL_S)


def modified_decide(
    state: PolicyState, event: PolicyEvent
) -> tuple[PolicyState, ScanDecision]:
    """Decide the modified strategy's reaction to one event.

    Active scans happen only on a connect request or on an armed handover
    trigger (associated, sample below -70 dBm).  Maintenance causes get a
    passive scan; unassociated discovery runs as periodic passive scans
    on the backoff schedule; periodic scanning is off while associated.
    """
    _check_order(state, event.t)
    state = replace(state, last_event_at=event.t)

    if isinstance(event, ConnectRequest):
        return state, ScanDecision.ACTIVE_SCAN

    if isinstance(event, RssiSample):
        state = replace(state, last_rssi=event.dbm)
        if event.dbm >= HANDOVER_REARM_DBM and not state.handover_armed:
            state = replace(state, handover_armed=True)
        if state.associated and state.handover_armed and event.dbm < HANDOVER_TRIGGER_DBM:
            return replace(state, handover_armed=False), ScanDecision.ACTIVE_SCAN
        return state, ScanDecision.NONE

    if isinstance(event, MaintenanceCause):
        if state.associated:
            return state, ScanDecision.PASSIVE_SCAN
        return state, ScanDecision.NONE

    if isinstance(event, AssociationChange):
        if event.associated:
            state = replace(
                state,
                associated=True,
                next_periodic_at=None,
                periodic_interval=MIN_SCAN_INTERVAL_S,
            )
        else:
            state = replace(
                state,
                associated=False,
                periodic_interval=MIN_SCAN_INTERVAL_S,
                next_periodic_at=event.t + MIN_SCAN_INTERVAL_S,
            )
        return state, ScanDecision.NONE

    # TimerTick
    if (
        not state.associated
        and state.next_periodic_at is not None
        and event.t >= state.next_periodic_at
    ):
        interval = _grow(state.periodic_interval)
        state = replace(
            state,
            periodic_interval=interval,
            next_periodic_at=event.t + interval,
        )
        return state, ScanDecision.PASSIVE_SCAN
    if state.associated and state.next_periodic_at is not None:
        state = replace(state, next_periodic_at=None)
    return state, ScanDecision.NONE


def baseline_decide(
    state: PolicyState, event: PolicyEvent
) -> tuple[PolicyState, ScanDecision]:
    """Decide the stock supplicant's reaction to one event.

    Due timer ticks trigger active scans regardless of association, with
    the interval tripling up to the 300 s cap.  Maintenance causes, weak
    signal while associated, and connect requests also scan actively.
    Association changes reset the interval to 3 s.
    """
    _check_order(state, event.t)
    state = replace(state, last_event_at=event.t)

    if isinstance(event, ConnectRequest):
        return state, ScanDecision.ACTIVE_SCAN

    if isinstance(event, RssiSample):
        state = replace(state, last_rssi=event.dbm)
        if state.associated and event.dbm < HANDOVER_TRIGGER_DBM:
            return state, ScanDecision.ACTIVE_SCAN
        return state, ScanDecision.NONE

    if isinstance(event, MaintenanceCause):
        return state, ScanDecision.ACTIVE_SCAN

    if isinstance(event, AssociationChange):
        return (
            replace(
                state,
                associated=event.associated,
                periodic_interval=MIN_SCAN_INTERVAL_S,
                next_periodic_at=event.t + MIN_SCAN_INTERVAL_S,
            ),
            ScanDecision.NONE,
        )

    # TimerTick
    if state.next_periodic_at is not None and event.t >= state.next_periodic_at:
        interval = _grow(state.periodic_interval)
        state = replace(
            state,
            periodic_interval=interval,
            next_periodic_at=event.t + interval,
        )
        return state, ScanDecision.ACTIVE_SCAN
    return state, ScanDecision.NONE
