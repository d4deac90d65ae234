"""Classify scanning episodes into causes using per-client rule evidence.

Each episode is labelled by inspecting the window of the client's frames
that precedes it, together with the client's association status at the
end of that window.  Explicit-evidence rules (frames observed) run before
statistical rules, and a periodic-scan fallback keeps the labelling
total.  All numeric boundaries live in :class:`Thresholds` so the rules
can be re-tuned per deployment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from enum import Enum
from statistics import fmean, pstdev
from typing import Optional

from .capture import BROADCAST, ClientTimeline, Frame, Subtype, UNKNOWN_MAC
from .metrics import data_ack_status
from .segmentation import ScanEpisode, Window, segment_episodes, windows


class EmptyInput(ValueError):
    pass


class InvalidThresholds(ValueError):
    pass


class CauseLabel(str, Enum):
    """The eight episode causes, in report row order."""

    PERIODIC_SCAN_UNASSOCIATED = "periodic-scan-unassociated"
    PERIODIC_SCAN_ASSOCIATED = "periodic-scan-associated"
    CONNECTION_ESTABLISHMENT = "connection-establishment"
    POWER_STATE_LOW_TO_HIGH = "power-state-low-to-high"
    LOSS_OF_BEACONS = "loss-of-beacons"
    AP_SIDE_PROCEDURES = "ap-side-procedures"
    LOW_RSSI = "low-rssi"
    DATA_FRAME_LOSSES = "data-frame-losses"


DISPLAY_NAMES = {
    CauseLabel.PERIODIC_SCAN_UNASSOCIATED: "Periodic Scan (Unassociated)",
    CauseLabel.PERIODIC_SCAN_ASSOCIATED: "Periodic Scan (Associated)",
    CauseLabel.CONNECTION_ESTABLISHMENT: "Connection Establishment",
    CauseLabel.POWER_STATE_LOW_TO_HIGH: "Power State: Low to High",
    CauseLabel.LOSS_OF_BEACONS: "Loss of Beacons",
    CauseLabel.AP_SIDE_PROCEDURES: "AP-side Procedures",
    CauseLabel.LOW_RSSI: "Low RSSI",
    CauseLabel.DATA_FRAME_LOSSES: "Data Frame Losses",
}

# Connection-maintenance labels that a scan policy may react to.
MAINTENANCE_CAUSES = frozenset(
    {
        CauseLabel.LOSS_OF_BEACONS,
        CauseLabel.DATA_FRAME_LOSSES,
        CauseLabel.AP_SIDE_PROCEDURES,
        CauseLabel.LOW_RSSI,
    }
)


@dataclass(frozen=True)
class AssociationState:
    """A client's association status as inferred from the sniffed stream."""

    client_mac: str
    associated: bool = False
    current_bssid: Optional[str] = None


@dataclass(frozen=True)
class Thresholds:
    """Numeric boundaries of the inference rules.

    Defaults: mean signal below -72 dBm with a deviation above 12 dB flags
    weak links; half the data frames retried, unacknowledged, or a rate
    drop past half flags loss; seven consecutive beacon gaps above the
    103 ms nominal interval flags beacon loss; below two frames per second
    marks a low-activity bin; one second separates scanning episodes.
    """

    rssi_mean_dbm: float = -72.0
    rssi_std_db: float = 12.0
    loss_fraction: float = 0.50
    beacon_count: int = 7
    nominal_beacon_interval_ms: float = 103.0
    low_rate_fps: float = 2.0
    gap_threshold_s: float = 1.0

    def __post_init__(self) -> None:
        if self.rssi_mean_dbm >= 0:
            raise InvalidThresholds("rssi_mean_dbm must be negative (dBm)")
        if self.rssi_std_db <= 0:
            raise InvalidThresholds("rssi_std_db must be positive")
        if not 0 < self.loss_fraction <= 1:
            raise InvalidThresholds("loss_fraction must be in (0, 1]")
        for name in ("beacon_count", "nominal_beacon_interval_ms", "low_rate_fps", "gap_threshold_s"):
            if getattr(self, name) <= 0:
                raise InvalidThresholds("%s must be positive" % name)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "Thresholds":
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise InvalidThresholds("unknown threshold keys: %s" % ", ".join(sorted(unknown)))
        for key, value in mapping.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidThresholds("threshold %s must be a number" % key)
        kwargs = dict(mapping)
        if "beacon_count" in kwargs:
            kwargs["beacon_count"] = int(kwargs["beacon_count"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "Thresholds":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                mapping = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidThresholds("cannot read thresholds file: %s" % exc) from exc
        if not isinstance(mapping, dict):
            raise InvalidThresholds("thresholds file must hold a JSON object")
        return cls.from_mapping(mapping)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_ESTABLISHMENT_SUBTYPES = frozenset(
    {
        Subtype.ASSOC_REQUEST,
        Subtype.ASSOC_RESPONSE,
        Subtype.REASSOC_REQUEST,
        Subtype.REASSOC_RESPONSE,
        Subtype.AUTHENTICATION,
    }
)

_PAYLOAD_DATA_SUBTYPES = (Subtype.DATA, Subtype.QOS_DATA)


def update_association(state: AssociationState, frame: Frame) -> AssociationState:
    """Advance a client's association state by one frame of its timeline.

    A successful (re)association response flips the client to associated;
    deauthentication or disassociation involving the client flips it
    back.  Data-kind traffic exchanged with a BSS also implies an
    association (APs only bridge traffic for associated clients), which
    covers captures that begin mid-session.
    """
    client = state.client_mac
    sub = frame.subtype

    if sub in (Subtype.ASSOC_RESPONSE, Subtype.REASSOC_RESPONSE):
        if frame.receiver == client and frame.status_code in (None, 0):
            bssid = frame.bssid if frame.bssid != UNKNOWN_MAC else frame.transmitter
            return replace(state, associated=True, current_bssid=bssid)
        return state

    if sub in (Subtype.DEAUTHENTICATION, Subtype.DISASSOCIATION):
        involved = frame.receiver == client or frame.transmitter == client
        if not involved and frame.receiver == BROADCAST:
            involved = frame.transmitter == state.current_bssid
        if involved:
            return replace(state, associated=False, current_bssid=None)
        return state

    if sub in (Subtype.DATA, Subtype.QOS_DATA, Subtype.NULL_DATA):
        bssid = frame.bssid
        if bssid in (UNKNOWN_MAC, BROADCAST):
            return state
        if frame.transmitter == client or (
            frame.receiver == client and frame.transmitter == bssid
        ):
            return replace(state, associated=True, current_bssid=bssid)
    return state


def _client_tx(window: Window, client: str) -> list[Frame]:
    return [f for f in window.frames if f.transmitter == client]


def _establishment_frames(window: Window, client: str) -> bool:
    return any(
        f.subtype in _ESTABLISHMENT_SUBTYPES
        and (f.transmitter == client or f.receiver == client)
        for f in window.frames
    )


def _ap_deauth(window: Window, client: str) -> bool:
    # AP-originated deauth has transmitter == BSSID.
    return any(
        f.subtype is Subtype.DEAUTHENTICATION
        and f.transmitter == f.bssid
        and f.transmitter != client
        and (f.receiver == client or f.receiver == BROADCAST)
        for f in window.frames
    )


def _beacon_loss(window: Window, state: AssociationState, thresholds: Thresholds) -> bool:
    if state.current_bssid is None:
        return False
    nulls = [
        f
        for f in window.frames
        if f.subtype is Subtype.NULL_DATA and f.transmitter == state.client_mac
    ]
    awake = any(
        not a.power_mgmt_flag and not b.power_mgmt_flag for a, b in zip(nulls, nulls[1:])
    )
    if not awake:
        return False
    beacons = [
        f
        for f in window.frames
        if f.subtype is Subtype.BEACON and f.transmitter == state.current_bssid
    ]
    nominal_s = thresholds.nominal_beacon_interval_ms / 1000.0
    run = 0
    for prev, cur in zip(beacons, beacons[1:]):
        if cur.timestamp - prev.timestamp > nominal_s:
            run += 1
            if run >= thresholds.beacon_count:
                return True
        else:
            run = 0
    return False


def _data_frame_losses(window: Window, client: str, thresholds: Thresholds) -> bool:
    data = [
        f
        for f in window.frames
        if f.subtype in _PAYLOAD_DATA_SUBTYPES and f.transmitter == client
    ]
    if not data:
        return False

    retried = sum(1 for f in data if f.retry_flag)
    if retried / len(data) > thresholds.loss_fraction:
        return True

    acks = data_ack_status(window.frames, transmitter=client)
    if acks:
        unacked = sum(1 for _f, ok in acks if not ok)
        if unacked / len(acks) > thresholds.loss_fraction:
            return True

    # Rate reduction relative to the window's opening second.
    opening = [f.phy_rate for f in data if f.timestamp < window.start + 1.0]
    anchor = data[-1].timestamp
    closing = [f.phy_rate for f in data if f.timestamp > anchor - 1.0]
    if opening and closing:
        if fmean(closing) < (1.0 - thresholds.loss_fraction) * fmean(opening):
            return True
    return False


def _low_rssi(window: Window, client: str, thresholds: Thresholds) -> bool:
    values = [f.rssi for f in _client_tx(window, client) if f.rssi is not None]
    if len(values) < 2:
        return False
    return fmean(values) < thresholds.rssi_mean_dbm and pstdev(values) > thresholds.rssi_std_db


def _power_state_transition(window: Window, client: str, thresholds: Thresholds) -> bool:
    span = window.end - window.start
    nbins = int(span)
    if nbins < 2:
        return False
    counts = [0] * nbins
    for frame in window.frames:
        if frame.transmitter != client:
            continue
        idx = int(frame.timestamp - window.start)
        if 0 <= idx < nbins:
            counts[idx] += 1
    # A quiet bin followed later by a markedly busier one.
    suffix_max = [0] * (nbins + 1)
    for i in range(nbins - 1, -1, -1):
        suffix_max[i] = max(counts[i], suffix_max[i + 1])
    fps = thresholds.low_rate_fps
    for i in range(nbins - 1):
        if counts[i] < fps and suffix_max[i + 1] >= max(fps, 2 * counts[i]):
            return True
    return False


def infer_cause(
    episode: ScanEpisode,
    window: Window,
    state_at_window_end: AssociationState,
    thresholds: Optional[Thresholds] = None,
) -> CauseLabel:
    """Label one episode from its preceding window.

    Rules run in a fixed precedence: connection establishment, AP-side
    deauthentication, then the associated-only maintenance rules (beacon
    loss, data-frame losses, low RSSI, power-state transition), with the
    periodic fallback split by association status.  The fallback is
    total, so every episode receives a label.
    """
    thresholds = thresholds or Thresholds()
    client = episode.client_mac
    state = state_at_window_end

    if state.associated and _establishment_frames(window, client):
        return CauseLabel.CONNECTION_ESTABLISHMENT
    if _ap_deauth(window, client):
        return CauseLabel.AP_SIDE_PROCEDURES
    if state.associated:
        if _beacon_loss(window, state, thresholds):
            return CauseLabel.LOSS_OF_BEACONS
        if _data_frame_losses(window, client, thresholds):
            return CauseLabel.DATA_FRAME_LOSSES
        if _low_rssi(window, client, thresholds):
            return CauseLabel.LOW_RSSI
        if _power_state_transition(window, client, thresholds):
            return CauseLabel.POWER_STATE_LOW_TO_HIGH
        return CauseLabel.PERIODIC_SCAN_ASSOCIATED
    return CauseLabel.PERIODIC_SCAN_UNASSOCIATED


@dataclass
class ClassifiedEpisode:
    episode: ScanEpisode
    window: Window
    label: CauseLabel
    state_at_window_end: AssociationState


def classify_episodes(
    timeline: ClientTimeline, thresholds: Optional[Thresholds] = None
) -> list[ClassifiedEpisode]:
    """Segment a timeline and label every episode, in order."""
    thresholds = thresholds or Thresholds()
    episodes = segment_episodes(timeline, thresholds.gap_threshold_s)
    wins = windows(episodes, timeline)
    state = AssociationState(client_mac=timeline.client_mac)
    out: list[ClassifiedEpisode] = []
    idx = 0
    frames = timeline.frames
    for episode, window in zip(episodes, wins):
        while idx < len(frames) and frames[idx].timestamp < episode.start:
            state = update_association(state, frames[idx])
            idx += 1
        label = infer_cause(episode, window, state, thresholds)
        out.append(ClassifiedEpisode(episode, window, label, state))
    return out


def cause_distribution(labels: list[CauseLabel]) -> dict[CauseLabel, float]:
    """Percentage of episodes per cause, over all eight causes.

    Raises EmptyInput when no episodes were labelled.
    """
    if not labels:
        raise EmptyInput("no episode labels")
    total = len(labels)
    return {cause: 100.0 * sum(1 for l in labels if l is cause) / total for cause in CauseLabel}
