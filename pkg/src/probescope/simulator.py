"""Deterministic synthetic 802.11 traces with ground-truth episode labels.

A scenario declares clients (each running one scan policy), APs, and a
time-ordered list of condition injections.  Generation runs in two
phases.  The control phase replays every client through its policy
engine: injections shape the radio evidence (signal ramps, loss bursts,
thinned beacons, quiet-then-burst activity, deauthentications) and feed
the matching policy events, and each resulting active scan is recorded
together with the cause that provoked it.  The materialization phase
then lays down the actual frames: beacons, background data and
keepalives, probe exchanges, handshakes and acknowledgements.

The same seed and scenario always produce byte-identical traces.  The
recorded ground truth matches what the inference rules recover as long
as a client's injections are spaced far enough apart that their evidence
windows do not overlap (the reference builders below guarantee this).
Scheduled scans are deferred past an ongoing injection's evidence span
so periodic episodes keep clean windows.
"""

from __future__ import annotations

import heapq
import json
import random
import struct
from dataclasses import dataclass, field, replace
from typing import Optional

from .capture import (
    BROADCAST,
    Frame,
    FrameKind,
    Subtype,
    UNKNOWN_MAC,
    freq_for_channel,
    quantize_ts,
    ts_to_sec_usec,
)
from .causes import CauseLabel
from .policy import (
    AssociationChange,
    ConnectRequest,
    MaintenanceCause,
    PolicyState,
    RssiSample,
    ScanDecision,
    TimerTick,
    baseline_decide,
    initial_state,
    modified_decide,
)


class InvalidSpec(ValueError):
    pass


class IOFailure(OSError):
    pass


SCAN_CHANNELS_24GHZ = (1, 6, 11)
SCAN_DWELL_S = 0.05
PRES_DELAY_S = 0.005
ACK_DELAY_S = 0.00006
RETRY_DELAY_S = 0.0003
HANDSHAKE_STEP_S = 0.02
HANDSHAKE_LAG_S = 0.15
ESTABLISHMENT_LAG_S = 1.2
RECONNECT_REQUEST_LAG_S = 0.05
EPISODE_GUARD_S = 1.5

BURST_DATA_FPS = 10.0
WAKE_DATA_FPS = 20.0
QUIET_NULL_FPS = 0.5
OUTAGE_BEACON_GAP_S = 0.25
FLOOD_LOSS_FRACTION = 0.6
ROGUE_CLIENT_COUNT = 5

# Every Nth active scan performed while associated briefly drops the
# link: chatty scanners destabilise their own connections.
DROP_SCAN_PERIOD = 30

AP_RSSI_DBM = -30
DEFAULT_RSSI_DROP_TARGET = -95.0
DEFAULT_RSSI_DROP_SLOPE = 2.5
# The signal holds at the drop target this long before the policy sees a
# sample, so the weak period dominates window statistics even against a
# full periodic interval of healthy preamble.
DEFAULT_RSSI_HOLD_S = 420.0
RSSI_RECOVERY_S = 3.0

BEACON_BYTES = 180
PRES_BYTES = 160
PREQ_BYTES = 72
NULL_BYTES = 28
ACK_BYTES = 14
AUTH_BYTES = 34
ASSOC_REQ_BYTES = 62
ASSOC_RESP_BYTES = 44
REASSOC_REQ_BYTES = 68
DEAUTH_BYTES = 26

INJECTION_KINDS = frozenset(
    {
        "rssi-drop",
        "beacon-outage",
        "frame-loss-burst",
        "deauth",
        "power-wake",
        "probe-flood",
        "connect",
        "disconnect",
    }
)


@dataclass(frozen=True)
class ApSpec:
    bssid: str
    ssid: str
    channel: int
    beacon_interval_ms: float = 102.4
    phy_rate: float = 24.0
    station_count: int = 4
    channel_utilization_raw: int = 64


@dataclass(frozen=True)
class ClientSpec:
    mac: str
    policy: str = "baseline"  # baseline | modified
    mobility: str = "stationary"  # stationary | rssi-trajectory
    associated_ap: Optional[str] = None
    base_rssi: float = -45.0
    data_fps: float = 0.2
    data_bytes: int = 120
    keepalive_fps: float = 2.0
    driver_scan_interval_s: Optional[float] = None
    phy_rate: float = 24.0


@dataclass(frozen=True)
class Injection:
    at: float
    client: str
    kind: str
    target_dbm: Optional[float] = None
    slope_db_per_s: Optional[float] = None
    duration_s: Optional[float] = None
    fraction: Optional[float] = None
    rate_per_s: Optional[float] = None


@dataclass(frozen=True)
class ScenarioSpec:
    duration: float
    clients: tuple[ClientSpec, ...]
    aps: tuple[ApSpec, ...]
    injections: tuple[Injection, ...] = ()
    seed: int = 0
    sniffer_drop: float = 0.0

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioSpec":
        try:
            clients = tuple(ClientSpec(**c) for c in raw.get("clients", []))
            aps = tuple(ApSpec(**a) for a in raw.get("aps", []))
            injections = tuple(Injection(**i) for i in raw.get("injections", []))
            spec = cls(
                duration=raw["duration"],
                clients=clients,
                aps=aps,
                injections=injections,
                seed=int(raw.get("seed", 0)),
                sniffer_drop=float(raw.get("sniffer_drop", 0.0)),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidSpec("bad scenario document: %s" % exc) from exc
        validate_spec(spec)
        return spec

    @classmethod
    def from_file(cls, path) -> "ScenarioSpec":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidSpec("cannot read scenario: %s" % exc) from exc
        if not isinstance(raw, dict):
            raise InvalidSpec("scenario file must hold a JSON object")
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return {
            "duration": self.duration,
            "seed": self.seed,
            "sniffer_drop": self.sniffer_drop,
            "aps": [vars_of(a) for a in self.aps],
            "clients": [vars_of(c) for c in self.clients],
            "injections": [
                {k: v for k, v in vars_of(i).items() if v is not None}
                for i in self.injections
            ],
        }


def vars_of(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in obj.__dataclass_fields__.values()}


def validate_spec(spec: ScenarioSpec) -> None:
    if spec.duration <= 0:
        raise InvalidSpec("duration must be positive")
    if not spec.aps:
        raise InvalidSpec("scenario needs at least one AP")
    macs = [c.mac for c in spec.clients]
    if len(set(macs)) != len(macs):
        raise InvalidSpec("client MACs must be unique")
    bssids = [a.bssid for a in spec.aps]
    if len(set(bssids)) != len(bssids):
        raise InvalidSpec("AP BSSIDs must be unique")
    if set(macs) & set(bssids):
        raise InvalidSpec("client MACs and AP BSSIDs must not overlap")
    if not 0 <= spec.sniffer_drop < 1:
        raise InvalidSpec("sniffer_drop must be in [0, 1)")
    by_mac = {c.mac: c for c in spec.clients}
    for client in spec.clients:
        if client.policy not in ("baseline", "modified"):
            raise InvalidSpec("unknown policy %r" % client.policy)
        if client.mobility not in ("stationary", "rssi-trajectory"):
            raise InvalidSpec("unknown mobility %r" % client.mobility)
        if client.associated_ap is not None and client.associated_ap not in bssids:
            raise InvalidSpec("client %s references unknown AP" % client.mac)
    for inj in spec.injections:
        if not 0 <= inj.at <= spec.duration:
            raise InvalidSpec("injection at %.3f outside scenario" % inj.at)
        if inj.kind not in INJECTION_KINDS:
            raise InvalidSpec("unknown injection kind %r" % inj.kind)
        if inj.client not in by_mac:
            raise InvalidSpec("injection targets unknown client %r" % inj.client)
        if inj.kind == "rssi-drop" and by_mac[inj.client].mobility != "rssi-trajectory":
            raise InvalidSpec("rssi-drop requires an rssi-trajectory client")
        for name in ("duration_s", "rate_per_s", "slope_db_per_s"):
            value = getattr(inj, name)
            if value is not None and value <= 0:
                raise InvalidSpec("injection %s must be positive" % name)
        if inj.fraction is not None and not 0 < inj.fraction <= 1:
            raise InvalidSpec("injection fraction must be in (0, 1]")


@dataclass(frozen=True)
class TruthEntry:
    client: str
    episode_start: float
    label: CauseLabel


@dataclass
class GroundTruth:
    entries: list[TruthEntry] = field(default_factory=list)

    def for_client(self, mac: str) -> list[TruthEntry]:
        return [e for e in self.entries if e.client == mac]


@dataclass
class ClientOutcome:
    mac: str
    policy: str
    preqs_per_hour: list[int]
    ttc: list[float]
    persistence: list[float]
    passive_scans: int


@dataclass
class ComparisonReport:
    duration: float
    clients: list[ClientOutcome]

    def _of(self, policy: str) -> list[ClientOutcome]:
        return [c for c in self.clients if c.policy == policy]

    def total_preqs(self, policy: str) -> int:
        return sum(sum(c.preqs_per_hour) for c in self._of(policy))

    def preqs_in_hour(self, policy: str, hour: int) -> int:
        return sum(
            c.preqs_per_hour[hour]
            for c in self._of(policy)
            if hour < len(c.preqs_per_hour)
        )

    def ttc_samples(self, policy: str) -> list[float]:
        return sorted(t for c in self._of(policy) for t in c.ttc)

    def persistence_samples(self, policy: str) -> list[float]:
        return sorted(t for c in self._of(policy) for t in c.persistence)


def _median(values: list[float]) -> float:
    if not values:
        raise ValueError("no samples")
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return 0.5 * (ordered[mid - 1] + ordered[mid])


# --------------------------------------------------------------------------
# Control phase
# --------------------------------------------------------------------------


@dataclass
class _Scan:
    t: float
    channels: tuple[int, ...]
    ssid: Optional[str]
    label: CauseLabel

    @property
    def preq_times(self) -> list[float]:
        return [quantize_ts(self.t + i * SCAN_DWELL_S) for i in range(len(self.channels))]

    @property
    def end(self) -> float:
        return self.t + (len(self.channels) - 1) * SCAN_DWELL_S


@dataclass
class _TrafficOverride:
    t0: float
    t1: float
    data_fps: float
    data_bytes: int
    null_fps: float
    power_save: bool
    loss_fraction: float


@dataclass
class _RssiSeg:
    t0: float
    t1: float
    v0: float
    v1: float


@dataclass
class _Flood:
    t0: float
    t1: float
    rate_per_s: float
    channel: int


@dataclass
class _ClientPlan:
    spec: ClientSpec
    scans: list[_Scan] = field(default_factory=list)
    handshakes: list[tuple[float, str, bool]] = field(default_factory=list)
    leaves: list[tuple[float, str, str, bool]] = field(default_factory=list)
    overrides: list[_TrafficOverride] = field(default_factory=list)
    rssi_segs: list[_RssiSeg] = field(default_factory=list)
    assoc_intervals: list[tuple[float, float, str]] = field(default_factory=list)
    connects: list[float] = field(default_factory=list)
    disconnects: list[float] = field(default_factory=list)
    passive_scans: int = 0


class _ClientSim:
    """Replays one client's policy over the scenario's injections."""

    def __init__(self, spec: ScenarioSpec, cspec: ClientSpec):
        self.spec = spec
        self.cspec = cspec
        self.aps = {a.bssid: a for a in spec.aps}
        self.plan = _ClientPlan(spec=cspec)
        self.decide = modified_decide if cspec.policy == "modified" else baseline_decide

        start_associated = cspec.associated_ap is not None
        periodic = cspec.policy == "baseline" or not start_associated
        self.state = initial_state(0.0, associated=start_associated)
        if not periodic:
            self.state = replace(self.state, next_periodic_at=None)
        self.associated = start_associated
        self.current_ap = cspec.associated_ap
        self.assoc_since = 0.0 if start_associated else None
        self.want_connection = False
        self.pending_label: Optional[CauseLabel] = None
        self.busy_until = 0.0
        self.assoc_scan_count = 0
        self.outage_requests: list[tuple[str, float, float]] = []
        self.floods: list[_Flood] = []

        self._heap: list[tuple] = []
        self._seq = 0
        self._tick_serial = 0
        self._driver_serial = 0

    # -- scheduling ---------------------------------------------------

    def _push(self, t: float, prio: int, kind: str, payload=None) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (t, prio, self._seq, kind, payload))

    def _push_tick(self) -> None:
        if self.state.next_periodic_at is not None:
            self._tick_serial += 1
            self._push(self.state.next_periodic_at, 5, "tick", self._tick_serial)

    def _push_driver(self, t: float) -> None:
        self._driver_serial += 1
        self._push(t, 6, "driver", self._driver_serial)

    def _feed(self, event) -> ScanDecision:
        self.state, decision = self.decide(self.state, event)
        return decision

    # -- scan + connection machinery -----------------------------------

    def _home_ap(self) -> ApSpec:
        if self.current_ap is not None:
            return self.aps[self.current_ap]
        if self.cspec.associated_ap is not None:
            return self.aps[self.cspec.associated_ap]
        return self.spec.aps[0]

    def _scan_channels(self) -> tuple[int, ...]:
        home = self._home_ap()
        if home.channel >= 36:
            return (36, 40, home.channel) if home.channel not in (36, 40) else (36, 40, 44)
        return SCAN_CHANNELS_24GHZ

    def _schedule_scan(self, t: float, label: CauseLabel, ssid: Optional[str]) -> _Scan:
        scan = _Scan(t=t, channels=self._scan_channels(), ssid=ssid, label=label)
        self.plan.scans.append(scan)
        self.busy_until = max(self.busy_until, scan.end + EPISODE_GUARD_S)
        if self.associated:
            self.assoc_scan_count += 1
            if self.assoc_scan_count % DROP_SCAN_PERIOD == 0:
                self._push(scan.end + 0.2, 4, "drop")
        return scan

    def _consume_label(self, default: CauseLabel) -> CauseLabel:
        if self.pending_label is not None:
            label, self.pending_label = self.pending_label, None
            return label
        return default

    def _periodic_label(self) -> CauseLabel:
        return (
            CauseLabel.PERIODIC_SCAN_ASSOCIATED
            if self.associated
            else CauseLabel.PERIODIC_SCAN_UNASSOCIATED
        )

    def _active_scan(self, t: float, origin_label: CauseLabel) -> None:
        scan = self._schedule_scan(t, self._consume_label(origin_label), None)
        if not self.associated and self.want_connection:
            handshake_at = scan.end + HANDSHAKE_LAG_S
            self._plan_handshake(handshake_at, self._home_ap().bssid, reassoc=False)

    def _plan_handshake(self, t: float, bssid: str, reassoc: bool) -> None:
        self.plan.handshakes.append((t, bssid, reassoc))
        connected_at = t + 3 * HANDSHAKE_STEP_S
        self._push(connected_at, 1, "assoc_change", (True, bssid))
        self._push(connected_at + ESTABLISHMENT_LAG_S, 4, "estab", bssid)
        self.busy_until = max(
            self.busy_until,
            connected_at + ESTABLISHMENT_LAG_S + 2 * SCAN_DWELL_S + EPISODE_GUARD_S,
        )

    def _go_unassociated(self, t: float) -> None:
        if self.assoc_since is not None:
            self.plan.assoc_intervals.append((self.assoc_since, t, self.current_ap))
        self.assoc_since = None
        self.associated = False
        self.current_ap = None
        self.plan.disconnects.append(t)
        self._feed(AssociationChange(t=t, associated=False))
        self._push_tick()

    def _reconnect(self, t: float) -> None:
        self.want_connection = True
        if self.cspec.policy == "modified":
            self._push(t + RECONNECT_REQUEST_LAG_S, 2, "connect_req", None)
        # The baseline waits for its own (reset) periodic timer.

    # -- event handlers -------------------------------------------------

    def _on_assoc_change(self, t: float, associated: bool, bssid: Optional[str]) -> None:
        if associated:
            was_roaming = self.associated
            if not was_roaming:
                self.plan.connects.append(t)
                if self.assoc_since is None:
                    self.assoc_since = t
            elif self.current_ap != bssid and self.assoc_since is not None:
                self.plan.assoc_intervals.append((self.assoc_since, t, self.current_ap))
                self.assoc_since = t
            self.associated = True
            self.current_ap = bssid
            self.want_connection = False
            self._feed(AssociationChange(t=t, associated=True))
            self._push_tick()
            if self.cspec.driver_scan_interval_s:
                self._push_driver(t + self.cspec.driver_scan_interval_s)
        else:
            self._go_unassociated(t)

    def _on_injection(self, inj: Injection) -> None:
        t = inj.at
        kind = inj.kind
        cspec = self.cspec

        if kind == "connect":
            if self.associated:
                return  # already connected; nothing to do
            self.want_connection = True
            self._push(t, 2, "connect_req", None)
            return

        if kind == "disconnect":
            if not self.associated:
                return
            self.plan.leaves.append((t, "disassociation", self.current_ap, False))
            self._go_unassociated(t)
            return

        if not self.associated:
            return  # condition injections need a live association; skip

        if kind == "deauth":
            self.plan.leaves.append((t, "deauthentication", self.current_ap, True))
            self.pending_label = CauseLabel.AP_SIDE_PROCEDURES
            self._go_unassociated(t)
            self._reconnect(t)
            return

        if kind == "rssi-drop":
            target = inj.target_dbm if inj.target_dbm is not None else DEFAULT_RSSI_DROP_TARGET
            slope = inj.slope_db_per_s or DEFAULT_RSSI_DROP_SLOPE
            hold = inj.duration_s if inj.duration_s is not None else DEFAULT_RSSI_HOLD_S
            base = cspec.base_rssi
            ramp = max((base - target) / slope, 1.0)
            trig = t + ramp + hold
            self.plan.rssi_segs.append(_RssiSeg(t, t + ramp, base, target))
            self.plan.rssi_segs.append(_RssiSeg(t + ramp, trig, target, target))
            self.plan.rssi_segs.append(
                _RssiSeg(trig + 0.5, trig + 0.5 + RSSI_RECOVERY_S, target, base)
            )
            self._push(trig, 3, "sample", (target, CauseLabel.LOW_RSSI))
            self._push(trig + 1.0 + RSSI_RECOVERY_S, 3, "sample", (base, None))
            self.busy_until = max(self.busy_until, trig + EPISODE_GUARD_S)
            return

        if kind == "frame-loss-burst":
            duration = inj.duration_s or 20.0
            fraction = inj.fraction or 0.8
            self.plan.overrides.append(
                _TrafficOverride(
                    t0=t,
                    t1=t + duration,
                    data_fps=BURST_DATA_FPS,
                    data_bytes=cspec.data_bytes,
                    null_fps=cspec.keepalive_fps,
                    power_save=False,
                    loss_fraction=fraction,
                )
            )
            self._push(t + duration, 3, "maintenance", CauseLabel.DATA_FRAME_LOSSES)
            self.busy_until = max(self.busy_until, t + duration + EPISODE_GUARD_S)
            return

        if kind == "beacon-outage":
            duration = inj.duration_s or 3.0
            self.outage_requests.append((self.current_ap, t, t + duration))
            self._push(t + duration, 3, "maintenance", CauseLabel.LOSS_OF_BEACONS)
            self.busy_until = max(self.busy_until, t + duration + EPISODE_GUARD_S)
            return

        if kind == "power-wake":
            quiet = inj.duration_s or 12.0
            self.plan.overrides.append(
                _TrafficOverride(
                    t0=t - quiet,
                    t1=t,
                    data_fps=0.0,
                    data_bytes=cspec.data_bytes,
                    null_fps=QUIET_NULL_FPS,
                    power_save=True,
                    loss_fraction=0.0,
                )
            )
            self.plan.overrides.append(
                _TrafficOverride(
                    t0=t,
                    t1=t + 2.0,
                    data_fps=WAKE_DATA_FPS,
                    data_bytes=cspec.data_bytes,
                    null_fps=cspec.keepalive_fps,
                    power_save=False,
                    loss_fraction=0.0,
                )
            )
            self.busy_until = max(self.busy_until, t + 2.0 + EPISODE_GUARD_S)
            self._push(t + 2.0, 4, "wake_scan")
            return

        if kind == "probe-flood":
            duration = inj.duration_s or 600.0
            rate = inj.rate_per_s or 40.0
            fraction = inj.fraction if inj.fraction is not None else FLOOD_LOSS_FRACTION
            self.floods.append(_Flood(t, t + duration, rate, self._home_ap().channel))
            self.plan.overrides.append(
                _TrafficOverride(
                    t0=t,
                    t1=t + duration,
                    data_fps=cspec.data_fps,
                    data_bytes=cspec.data_bytes,
                    null_fps=cspec.keepalive_fps,
                    power_save=False,
                    loss_fraction=fraction,
                )
            )
            self._push(t + duration, 3, "maintenance", CauseLabel.DATA_FRAME_LOSSES)
            self.busy_until = max(self.busy_until, t + duration + EPISODE_GUARD_S)
            return

        raise InvalidSpec("unhandled injection kind %r" % kind)

    # -- main loop ------------------------------------------------------

    def run(self, injections: list[Injection]) -> _ClientPlan:
        for inj in sorted(injections, key=lambda i: i.at):
            self._push(inj.at, 0, "inj", inj)
        self._push_tick()
        if self.associated and self.cspec.driver_scan_interval_s:
            self._push_driver(self.cspec.driver_scan_interval_s)

        duration = self.spec.duration
        while self._heap:
            t, _prio, _seq, kind, payload = heapq.heappop(self._heap)
            if t > duration:
                break

            if kind == "inj":
                self._on_injection(payload)

            elif kind == "tick":
                if payload != self._tick_serial:
                    continue  # superseded schedule
                due = self.state.next_periodic_at
                if due is None:
                    continue
                if t < due:
                    self._push_tick()
                    continue
                if self.associated and t < self.busy_until:
                    self._tick_serial += 1
                    self._push(self.busy_until, 5, "tick", self._tick_serial)
                    continue
                decision = self._feed(TimerTick(t=t))
                if decision is ScanDecision.ACTIVE_SCAN:
                    self._active_scan(t + 0.001, self._periodic_label())
                elif decision is ScanDecision.PASSIVE_SCAN:
                    self.plan.passive_scans += 1
                self._push_tick()

            elif kind == "driver":
                if payload != self._driver_serial:
                    continue
                if not self.associated:
                    continue  # resumes on the next association
                if t < self.busy_until:
                    self._push_driver(self.busy_until)
                    continue
                self._schedule_scan(t + 0.001, self._consume_label(self._periodic_label()), None)
                self._push_driver(t + self.cspec.driver_scan_interval_s)

            elif kind == "sample":
                dbm, label = payload
                decision = self._feed(RssiSample(t=t, dbm=dbm))
                if decision is ScanDecision.ACTIVE_SCAN:
                    scan = self._schedule_scan(
                        t + 0.001, self._consume_label(label or CauseLabel.LOW_RSSI), None
                    )
                    target = self._roam_target()
                    self._plan_handshake(scan.end + HANDSHAKE_LAG_S, target, reassoc=True)

            elif kind == "maintenance":
                decision = self._feed(MaintenanceCause(t=t, cause=payload))
                if decision is ScanDecision.ACTIVE_SCAN:
                    self._schedule_scan(t + 0.001, self._consume_label(payload), None)
                elif decision is ScanDecision.PASSIVE_SCAN:
                    self.plan.passive_scans += 1

            elif kind == "connect_req":
                if self.associated:
                    continue
                decision = self._feed(ConnectRequest(t=t))
                if decision is ScanDecision.ACTIVE_SCAN:
                    self._active_scan(t + 0.001, self._periodic_label())

            elif kind == "assoc_change":
                associated, bssid = payload
                self._on_assoc_change(t, associated, bssid)

            elif kind == "estab":
                home = self.aps[payload]
                self._schedule_scan(
                    t, CauseLabel.CONNECTION_ESTABLISHMENT, home.ssid
                )

            elif kind == "wake_scan":
                if self.cspec.policy == "baseline":
                    self._schedule_scan(
                        t + 0.001, CauseLabel.POWER_STATE_LOW_TO_HIGH, None
                    )

            elif kind == "drop":
                if not self.associated:
                    continue
                self.plan.leaves.append((t, "disassociation", self.current_ap, False))
                self._go_unassociated(t)
                self._reconnect(t)

        if self.assoc_since is not None:
            self.plan.assoc_intervals.append((self.assoc_since, duration, self.current_ap))
        self.plan.scans.sort(key=lambda s: s.t)
        return self.plan

    def _roam_target(self) -> str:
        home = self._home_ap()
        peers = [a.bssid for a in self.spec.aps if a.ssid == home.ssid]
        if len(peers) < 2:
            return home.bssid
        idx = peers.index(home.bssid)
        return peers[(idx + 1) % len(peers)]


# --------------------------------------------------------------------------
# Materialization phase
# --------------------------------------------------------------------------


def _rssi_at(plan: _ClientPlan, t: float) -> int:
    for seg in plan.rssi_segs:
        if seg.t0 <= t <= seg.t1:
            if seg.t1 == seg.t0:
                return round(seg.v1)
            frac = (t - seg.t0) / (seg.t1 - seg.t0)
            return round(seg.v0 + (seg.v1 - seg.v0) * frac)
    return round(plan.spec.base_rssi)


def _grid(t0: float, t1: float, fps: float) -> list[float]:
    # Half-step phase so every unit interval holds the same point count.
    if fps <= 0 or t1 <= t0:
        return []
    step = 1.0 / fps
    out = []
    t = t0 + step / 2.0
    while t < t1:
        out.append(t)
        t += step
    return out


def _in_override(overrides: list[_TrafficOverride], t: float) -> bool:
    return any(o.t0 <= t < o.t1 for o in overrides)


def _mgmt_frame(subtype, t, rate, ch, tx, rx, bssid, nbytes, rssi, **extra) -> Frame:
    kind = FrameKind.DATA if subtype in (Subtype.DATA, Subtype.QOS_DATA, Subtype.NULL_DATA) else (
        FrameKind.CONTROL if subtype is Subtype.ACK else FrameKind.MANAGEMENT
    )
    return Frame(
        timestamp=quantize_ts(t),
        phy_rate=rate,
        channel=ch,
        frame_kind=kind,
        subtype=subtype,
        transmitter=tx,
        receiver=rx,
        bssid=bssid,
        frame_bytes=nbytes,
        rssi=rssi,
        **extra,
    )


def _materialize_client(
    spec: ScenarioSpec, plan: _ClientPlan, rng: random.Random
) -> list[Frame]:
    frames: list[Frame] = []
    cspec = plan.spec
    aps = {a.bssid: a for a in spec.aps}
    mac = cspec.mac

    def client_rssi(t: float) -> int:
        return _rssi_at(plan, t)

    def add_data(t: float, ap: ApSpec, nbytes: int, lost: bool) -> None:
        base = dict(
            rate=cspec.phy_rate,
            ch=ap.channel,
            tx=mac,
            rx=ap.bssid,
            bssid=ap.bssid,
            nbytes=nbytes,
            rssi=client_rssi(t),
        )
        frames.append(_mgmt_frame(Subtype.QOS_DATA, t, **base))
        if lost:
            frames.append(
                _mgmt_frame(Subtype.QOS_DATA, t + RETRY_DELAY_S, **base, retry_flag=True)
            )
        else:
            frames.append(
                _mgmt_frame(
                    Subtype.ACK,
                    t + ACK_DELAY_S,
                    rate=cspec.phy_rate,
                    ch=ap.channel,
                    tx=UNKNOWN_MAC,
                    rx=mac,
                    bssid=UNKNOWN_MAC,
                    nbytes=ACK_BYTES,
                    rssi=AP_RSSI_DBM,
                )
            )

    def add_null(t: float, ap: ApSpec, power_save: bool) -> None:
        frames.append(
            _mgmt_frame(
                Subtype.NULL_DATA,
                t,
                rate=cspec.phy_rate,
                ch=ap.channel,
                tx=mac,
                rx=ap.bssid,
                bssid=ap.bssid,
                nbytes=NULL_BYTES,
                rssi=client_rssi(t),
                power_mgmt_flag=power_save,
            )
        )

    # Background traffic inside each association interval, carved around
    # the override segments (quiet periods, bursts, loss windows).
    for t0, t1, bssid in plan.assoc_intervals:
        ap = aps[bssid]
        for t in _grid(t0, t1, cspec.data_fps):
            if not _in_override(plan.overrides, t):
                add_data(t, ap, cspec.data_bytes, lost=False)
        for t in _grid(t0, t1, cspec.keepalive_fps):
            if not _in_override(plan.overrides, t):
                add_null(t, ap, power_save=False)
        for seg in plan.overrides:
            s0, s1 = max(seg.t0, t0), min(seg.t1, t1)
            if s1 <= s0:
                continue
            for t in _grid(s0, s1, seg.data_fps):
                lost = seg.loss_fraction > 0 and rng.random() < seg.loss_fraction
                add_data(t, ap, seg.data_bytes, lost=lost)
            for t in _grid(s0, s1, seg.null_fps):
                add_null(t, ap, power_save=seg.power_save)

    # Probe exchanges for every planned scan.
    for scan in plan.scans:
        for channel, t in zip(scan.channels, scan.preq_times):
            rate = 1.0 if channel < 36 else 6.0
            nbytes = PREQ_BYTES + (len(scan.ssid) if scan.ssid else 0)
            frames.append(
                _mgmt_frame(
                    Subtype.PROBE_REQUEST,
                    t,
                    rate=rate,
                    ch=channel,
                    tx=mac,
                    rx=BROADCAST,
                    bssid=BROADCAST,
                    nbytes=nbytes,
                    rssi=client_rssi(t),
                    ssid=scan.ssid if scan.ssid is not None else "",
                )
            )
            for idx, ap in enumerate(spec.aps):
                if ap.channel != channel:
                    continue
                pres_t = t + PRES_DELAY_S * (idx + 1)
                frames.append(
                    _mgmt_frame(
                        Subtype.PROBE_RESPONSE,
                        pres_t,
                        rate=ap.phy_rate,
                        ch=ap.channel,
                        tx=ap.bssid,
                        rx=mac,
                        bssid=ap.bssid,
                        nbytes=PRES_BYTES,
                        rssi=AP_RSSI_DBM,
                        ssid=ap.ssid,
                        station_count=ap.station_count,
                        channel_utilization_raw=ap.channel_utilization_raw,
                        beacon_interval=round(ap.beacon_interval_ms / 1.024),
                    )
                )
                frames.append(
                    _mgmt_frame(
                        Subtype.ACK,
                        pres_t + ACK_DELAY_S,
                        rate=ap.phy_rate,
                        ch=ap.channel,
                        tx=UNKNOWN_MAC,
                        rx=ap.bssid,
                        bssid=UNKNOWN_MAC,
                        nbytes=ACK_BYTES,
                        rssi=client_rssi(pres_t),
                    )
                )

    # Authentication/association exchanges.
    for t, bssid, reassoc in plan.handshakes:
        ap = aps[bssid]
        req = Subtype.REASSOC_REQUEST if reassoc else Subtype.ASSOC_REQUEST
        resp = Subtype.REASSOC_RESPONSE if reassoc else Subtype.ASSOC_RESPONSE
        steps = [
            (Subtype.AUTHENTICATION, mac, bssid, AUTH_BYTES, client_rssi(t), 0),
            (Subtype.AUTHENTICATION, bssid, mac, AUTH_BYTES, AP_RSSI_DBM, 0),
            (req, mac, bssid, REASSOC_REQ_BYTES if reassoc else ASSOC_REQ_BYTES, client_rssi(t), None),
            (resp, bssid, mac, ASSOC_RESP_BYTES, AP_RSSI_DBM, 0),
        ]
        for step, (sub, tx, rx, nbytes, rssi, status) in enumerate(steps):
            extra = {}
            if status is not None and sub in (
                Subtype.AUTHENTICATION,
                Subtype.ASSOC_RESPONSE,
                Subtype.REASSOC_RESPONSE,
            ):
                extra["status_code"] = status
            if sub in (Subtype.ASSOC_REQUEST, Subtype.REASSOC_REQUEST):
                extra["ssid"] = ap.ssid
            frames.append(
                _mgmt_frame(
                    sub,
                    t + step * HANDSHAKE_STEP_S,
                    rate=cspec.phy_rate,
                    ch=ap.channel,
                    tx=tx,
                    rx=rx,
                    bssid=bssid,
                    nbytes=nbytes,
                    rssi=rssi,
                    **extra,
                )
            )

    # Deauthentications / disassociations.
    for t, kind, bssid, from_ap in plan.leaves:
        sub = Subtype.DEAUTHENTICATION if kind == "deauthentication" else Subtype.DISASSOCIATION
        ap = aps[bssid]
        tx, rx = (bssid, mac) if from_ap else (mac, bssid)
        frames.append(
            _mgmt_frame(
                sub,
                t,
                rate=cspec.phy_rate,
                ch=ap.channel,
                tx=tx,
                rx=rx,
                bssid=bssid,
                nbytes=DEAUTH_BYTES,
                rssi=AP_RSSI_DBM if from_ap else client_rssi(t),
            )
        )

    return frames


def _materialize_beacons(
    spec: ScenarioSpec, outages: dict[str, list[tuple[float, float]]]
) -> list[Frame]:
    frames: list[Frame] = []
    for idx, ap in enumerate(spec.aps):
        interval = ap.beacon_interval_ms / 1000.0
        offset = idx * 0.0131
        holes = sorted(outages.get(ap.bssid, []))

        def in_hole(t: float) -> bool:
            return any(h0 <= t < h1 for h0, h1 in holes)

        def beacon(t: float) -> Frame:
            return _mgmt_frame(
                Subtype.BEACON,
                t,
                rate=1.0 if ap.channel < 36 else 6.0,
                ch=ap.channel,
                tx=ap.bssid,
                rx=BROADCAST,
                bssid=ap.bssid,
                nbytes=BEACON_BYTES,
                rssi=AP_RSSI_DBM,
                ssid=ap.ssid,
                station_count=ap.station_count,
                channel_utilization_raw=ap.channel_utilization_raw,
                beacon_interval=round(ap.beacon_interval_ms / 1.024),
            )

        t = offset
        while t <= spec.duration:
            if not in_hole(t):
                frames.append(beacon(t))
            t += interval
        for h0, h1 in holes:
            t = h0 + OUTAGE_BEACON_GAP_S
            while t < h1:
                frames.append(beacon(t))
                t += OUTAGE_BEACON_GAP_S
    return frames


def _materialize_floods(spec: ScenarioSpec, floods: list[_Flood]) -> list[Frame]:
    frames: list[Frame] = []
    rogues = ["f2:00:00:00:0f:%02x" % i for i in range(ROGUE_CLIENT_COUNT)]
    aps = list(spec.aps)
    for flood in floods:
        count = int((flood.t1 - flood.t0) * flood.rate_per_s)
        step = 1.0 / flood.rate_per_s
        for j in range(count):
            t = flood.t0 + j * step
            rogue = rogues[j % len(rogues)]
            rate = 1.0 if flood.channel < 36 else 6.0
            frames.append(
                _mgmt_frame(
                    Subtype.PROBE_REQUEST,
                    t,
                    rate=rate,
                    ch=flood.channel,
                    tx=rogue,
                    rx=BROADCAST,
                    bssid=BROADCAST,
                    nbytes=PREQ_BYTES,
                    rssi=-60,
                    ssid="",
                )
            )
            for idx, ap in enumerate(aps):
                if ap.channel != flood.channel:
                    continue
                frames.append(
                    _mgmt_frame(
                        Subtype.PROBE_RESPONSE,
                        t + PRES_DELAY_S * (idx + 1),
                        rate=ap.phy_rate,
                        ch=ap.channel,
                        tx=ap.bssid,
                        rx=rogue,
                        bssid=ap.bssid,
                        nbytes=PRES_BYTES,
                        rssi=AP_RSSI_DBM,
                        ssid=ap.ssid,
                        station_count=ap.station_count,
                        channel_utilization_raw=ap.channel_utilization_raw,
                        beacon_interval=round(ap.beacon_interval_ms / 1.024),
                    )
                )
    return frames


def _control_phase(spec: ScenarioSpec) -> tuple[list[_ClientPlan], dict, list[_Flood]]:
    by_client: dict[str, list[Injection]] = {c.mac: [] for c in spec.clients}
    for inj in spec.injections:
        by_client[inj.client].append(inj)
    plans = []
    outages: dict[str, list[tuple[float, float]]] = {}
    floods: list[_Flood] = []
    for cspec in spec.clients:
        sim = _ClientSim(spec, cspec)
        plans.append(sim.run(by_client[cspec.mac]))
        for bssid, t0, t1 in sim.outage_requests:
            outages.setdefault(bssid, []).append((t0, t1))
        floods.extend(sim.floods)
    return plans, outages, floods


def generate(spec: ScenarioSpec) -> tuple[list[Frame], GroundTruth]:
    """Produce a time-sorted synthetic trace plus its episode ground truth."""
    validate_spec(spec)
    plans, outages, floods = _control_phase(spec)

    frames: list[Frame] = []
    frames.extend(_materialize_beacons(spec, outages))
    frames.extend(_materialize_floods(spec, floods))
    for plan in plans:
        rng = random.Random("%d:%s:traffic" % (spec.seed, plan.spec.mac))
        frames.extend(_materialize_client(spec, plan, rng))

    frames = [f for f in frames if 0.0 <= f.timestamp <= spec.duration]
    frames.sort(key=lambda f: (f.timestamp, f.transmitter, f.receiver, f.subtype.value))

    if spec.sniffer_drop > 0:
        rng = random.Random("%d:sniffer-drop" % spec.seed)
        frames = [f for f in frames if rng.random() >= spec.sniffer_drop]

    truth = GroundTruth(
        entries=[
            TruthEntry(
                client=plan.spec.mac,
                episode_start=quantize_ts(scan.preq_times[0]),
                label=scan.label,
            )
            for plan in plans
            for scan in plan.scans
            if scan.preq_times[0] <= spec.duration
        ]
    )
    truth.entries.sort(key=lambda e: (e.client, e.episode_start))
    return frames, truth


def run_comparison(spec: ScenarioSpec) -> ComparisonReport:
    """Replay a scenario through both policies and compare their behaviour.

    Runs the control phase only, so multi-hour scenarios stay cheap.
    Requires at least one client per policy.
    """
    validate_spec(spec)
    policies = {c.policy for c in spec.clients}
    if policies != {"baseline", "modified"}:
        raise InvalidSpec("comparison needs both baseline and modified clients")

    plans, _outages, _floods = _control_phase(spec)
    hours = max(1, int(spec.duration / 3600.0 + 0.999999))
    outcomes = []
    for plan in plans:
        per_hour = [0] * hours
        for scan in plan.scans:
            for t in scan.preq_times:
                if t <= spec.duration:
                    per_hour[min(int(t / 3600.0), hours - 1)] += 1
        ttc = []
        pending_disconnect: Optional[float] = None
        events = sorted(
            [(t, "down") for t in plan.disconnects] + [(t, "up") for t in plan.connects]
        )
        for t, what in events:
            if what == "down":
                pending_disconnect = t
            elif pending_disconnect is not None:
                ttc.append(t - pending_disconnect)
                pending_disconnect = None
        persistence = [
            b - a for a, b in zip(plan.connects, plan.connects[1:])
        ]
        outcomes.append(
            ClientOutcome(
                mac=plan.spec.mac,
                policy=plan.spec.policy,
                preqs_per_hour=per_hour,
                ttc=ttc,
                persistence=persistence,
                passive_scans=plan.passive_scans,
            )
        )
    return ComparisonReport(duration=spec.duration, clients=outcomes)


# --------------------------------------------------------------------------
# Capture writing
# --------------------------------------------------------------------------

_RT_PRESENT_BASE = 0x0F  # TSFT | flags | rate | channel
_RT_PRESENT_SIGNAL = 0x2F

_MGMT_CODES = {
    Subtype.ASSOC_REQUEST: 0x0,
    Subtype.ASSOC_RESPONSE: 0x1,
    Subtype.REASSOC_REQUEST: 0x2,
    Subtype.REASSOC_RESPONSE: 0x3,
    Subtype.PROBE_REQUEST: 0x4,
    Subtype.PROBE_RESPONSE: 0x5,
    Subtype.BEACON: 0x8,
    Subtype.DISASSOCIATION: 0xA,
    Subtype.AUTHENTICATION: 0xB,
    Subtype.DEAUTHENTICATION: 0xC,
}


def _mac_bytes(mac: str) -> bytes:
    return bytes(int(part, 16) for part in mac.split(":"))


def _radiotap_header(frame: Frame) -> bytes:
    tsft = round(frame.timestamp * 1e6)
    body = struct.pack("<QBB", tsft, 0, round(frame.phy_rate * 2))
    freq = freq_for_channel(frame.channel)
    chan_flags = 0x00A0 if frame.channel < 36 else 0x0140
    body += struct.pack("<HH", freq, chan_flags)
    present = _RT_PRESENT_BASE
    if frame.rssi is not None:
        present = _RT_PRESENT_SIGNAL
        body += struct.pack("<b", frame.rssi)
    return struct.pack("<BBHI", 0, 0, 8 + len(body), present) + body


def _ssid_ie(ssid: str) -> bytes:
    encoded = ssid.encode("utf-8")
    return struct.pack("<BB", 0, len(encoded)) + encoded


def _qbss_ie(frame: Frame) -> bytes:
    return struct.pack(
        "<BBHBH",
        11,
        5,
        frame.station_count or 0,
        frame.channel_utilization_raw or 0,
        0,
    )


def _mgmt_body(frame: Frame) -> bytes:
    sub = frame.subtype
    body = b""
    ies = b""
    if sub in (Subtype.BEACON, Subtype.PROBE_RESPONSE):
        tsft = round(frame.timestamp * 1e6) & 0xFFFFFFFFFFFFFFFF
        body = struct.pack("<QHH", tsft, frame.beacon_interval or 0, 0x0401)
        if frame.ssid is not None:
            ies += _ssid_ie(frame.ssid)
        if frame.station_count is not None or frame.channel_utilization_raw is not None:
            ies += _qbss_ie(frame)
    elif sub is Subtype.PROBE_REQUEST:
        if frame.ssid is not None:
            ies += _ssid_ie(frame.ssid)
    elif sub is Subtype.ASSOC_REQUEST:
        body = struct.pack("<HH", 0x0401, 10)
        if frame.ssid is not None:
            ies += _ssid_ie(frame.ssid)
    elif sub is Subtype.REASSOC_REQUEST:
        body = struct.pack("<HH", 0x0401, 10) + _mac_bytes(frame.bssid)
        if frame.ssid is not None:
            ies += _ssid_ie(frame.ssid)
    elif sub in (Subtype.ASSOC_RESPONSE, Subtype.REASSOC_RESPONSE):
        body = struct.pack("<HHH", 0x0401, frame.status_code or 0, 0xC001)
    elif sub is Subtype.AUTHENTICATION:
        body = struct.pack("<HHH", 0, 1, frame.status_code or 0)
    elif sub in (Subtype.DEAUTHENTICATION, Subtype.DISASSOCIATION):
        body = struct.pack("<H", 3)
    return body + ies


def _encode_mac_frame(frame: Frame) -> bytes:
    retry = 0x0800 if frame.retry_flag else 0
    pm = 0x1000 if frame.power_mgmt_flag else 0

    if frame.frame_kind is FrameKind.MANAGEMENT:
        code = _MGMT_CODES.get(frame.subtype)
        if code is None:
            raise ValueError("cannot encode management subtype %s" % frame.subtype)
        fctl = (code << 4) | retry | pm
        header = struct.pack("<HH", fctl, 0)
        header += _mac_bytes(frame.receiver) + _mac_bytes(frame.transmitter)
        header += _mac_bytes(frame.bssid) + struct.pack("<H", 0)
        mac = header + _mgmt_body(frame)
        pad = frame.frame_bytes - len(mac)
        if pad < 0:
            raise ValueError(
                "frame_bytes %d below minimal encoding %d" % (frame.frame_bytes, len(mac))
            )
        # Pad with vendor elements; a lone byte is not a parseable element.
        while pad >= 2:
            chunk = min(pad - 2, 255)
            if pad - 2 - chunk == 1:
                chunk -= 1
            mac += struct.pack("<BB", 221, chunk) + b"\x00" * chunk
            pad -= 2 + chunk
        if pad == 1:
            mac += b"\xff"
        return mac

    if frame.frame_kind is FrameKind.CONTROL:
        if frame.subtype is not Subtype.ACK:
            raise ValueError("cannot encode control subtype %s" % frame.subtype)
        fctl = (0xD << 4) | (1 << 2) | retry | pm
        mac = struct.pack("<HH", fctl, 0) + _mac_bytes(frame.receiver)
        pad = frame.frame_bytes - len(mac)
        if pad < 0:
            raise ValueError("ACK frame_bytes below 10")
        return mac + b"\x00" * pad

    # data
    sub_code = {Subtype.DATA: 0x0, Subtype.NULL_DATA: 0x4, Subtype.QOS_DATA: 0x8}.get(
        frame.subtype
    )
    if sub_code is None:
        raise ValueError("cannot encode data subtype %s" % frame.subtype)
    if frame.transmitter == frame.bssid:
        ds = 0x0200  # from DS
        addrs = (frame.receiver, frame.transmitter, frame.transmitter)
    elif frame.receiver == frame.bssid:
        ds = 0x0100  # to DS
        addrs = (frame.receiver, frame.transmitter, frame.receiver)
    else:
        ds = 0
        addrs = (frame.receiver, frame.transmitter, frame.bssid)
    fctl = (sub_code << 4) | (2 << 2) | ds | retry | pm
    header = struct.pack("<HH", fctl, 0)
    header += b"".join(_mac_bytes(a) for a in addrs) + struct.pack("<H", 0)
    if frame.subtype is Subtype.QOS_DATA:
        header += struct.pack("<H", 0)
    pad = frame.frame_bytes - len(header)
    if pad < 0:
        raise ValueError("frame_bytes below data header size")
    return header + b"\x00" * pad


def capture_to_bytes(trace: list[Frame]) -> bytes:
    """Serialize frames as a radiotap pcap, bit-stable for identical input."""
    chunks = [struct.pack("<IHHiIII", 0xA1B2C3D4, 2, 4, 0, 0, 65535, 127)]
    for frame in trace:
        radiotap = _radiotap_header(frame)
        mac = _encode_mac_frame(frame)
        sec, usec = ts_to_sec_usec(frame.timestamp)
        record = radiotap + mac
        chunks.append(struct.pack("<IIII", sec, usec, len(record), len(record)))
        chunks.append(record)
    return b"".join(chunks)


def write_capture(trace: list[Frame], path) -> None:
    """Write a trace to ``path`` as a radiotap pcap.

    The emitted file re-parses to frames equal to the input, field for
    field, provided timestamps sit on the microsecond grid.
    """
    data = capture_to_bytes(trace)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


# --------------------------------------------------------------------------
# Reference scenarios
# --------------------------------------------------------------------------


def reference_comparison_scenario(
    clients_per_policy: int = 3, seed: int = 7
) -> ScenarioSpec:
    """Nine-hour two-policy scenario: idle first hour, hourly trouble after.

    All clients start unassociated and join during hour one; every
    subsequent hour each client weathers the same injection schedule
    (signal fade, loss burst, beacon outage, wake burst, deauthentication)
    so the two policy groups face symmetric conditions.
    """
    aps = (
        ApSpec(bssid="0a:00:00:00:aa:01", ssid="corp", channel=1),
        ApSpec(bssid="0a:00:00:00:aa:02", ssid="corp", channel=6),
    )
    clients = []
    for policy, prefix in (("baseline", 0x10), ("modified", 0x20)):
        for i in range(clients_per_policy):
            clients.append(
                ClientSpec(
                    mac="02:00:00:00:%02x:%02x" % (prefix, i),
                    policy=policy,
                    mobility="rssi-trajectory",
                    driver_scan_interval_s=110.0,
                )
            )
    injections = []
    schedule = (
        (300.0, "rssi-drop"),
        (900.0, "frame-loss-burst"),
        (1500.0, "beacon-outage"),
        (2100.0, "power-wake"),
        (2700.0, "deauth"),
    )
    for idx, client in enumerate(clients):
        injections.append(Injection(at=3605.0 + 2.0 * idx, client=client.mac, kind="connect"))
        for hour in range(1, 9):
            for offset, kind in schedule:
                at = 3600.0 * hour + offset + 37.0 * (idx % clients_per_policy)
                if at < 32400.0 - 60.0:
                    injections.append(Injection(at=at, client=client.mac, kind=kind))
    return ScenarioSpec(
        duration=32400.0,
        clients=tuple(clients),
        aps=aps,
        injections=tuple(sorted(injections, key=lambda i: (i.at, i.client))),
        seed=seed,
    )


def cause_recovery_scenarios(seed: int = 11) -> dict[str, ScenarioSpec]:
    """One isolated single-client scenario per cause, for oracle checks."""
    ap = ApSpec(bssid="0a:00:00:00:bb:01", ssid="lab", channel=6)
    mac = "02:00:00:00:cc:01"

    def client(associated: bool) -> ClientSpec:
        return ClientSpec(
            mac=mac,
            policy="baseline",
            mobility="rssi-trajectory",
            associated_ap=ap.bssid if associated else None,
        )

    def spec(associated: bool, injections: tuple = (), duration: float = 3600.0) -> ScenarioSpec:
        return ScenarioSpec(
            duration=duration,
            clients=(client(associated),),
            aps=(ap,),
            injections=injections,
            seed=seed,
        )

    def repeated(kind: str, count: int = 10, start: float = 600.0, step: float = 420.0, **params):
        return tuple(
            Injection(at=start + i * step, client=mac, kind=kind, **params)
            for i in range(count)
        )

    connects = []
    for i in range(6):
        base = 400.0 + i * 700.0
        connects.append(Injection(at=base, client=mac, kind="connect"))
        connects.append(Injection(at=base + 350.0, client=mac, kind="disconnect"))

    return {
        "periodic-associated": spec(True),
        "periodic-unassociated": spec(False),
        "connection-establishment": spec(False, tuple(connects), duration=4600.0),
        "low-rssi": spec(True, repeated("rssi-drop", count=6, step=700.0), duration=5000.0),
        "data-frame-losses": spec(True, repeated("frame-loss-burst"), duration=5000.0),
        "loss-of-beacons": spec(True, repeated("beacon-outage"), duration=5000.0),
        "power-state": spec(True, repeated("power-wake"), duration=5000.0),
        "ap-side": spec(True, repeated("deauth"), duration=5000.0),
    }


def probe_flood_scenario(seed: int = 3) -> ScenarioSpec:
    """Busy-network case study: a probe storm starting mid-capture."""
    ap = ApSpec(bssid="0a:00:00:00:dd:01", ssid="hotnet", channel=6)
    victim = ClientSpec(
        mac="02:00:00:00:ee:01",
        policy="baseline",
        mobility="stationary",
        associated_ap=ap.bssid,
        data_fps=10.0,
        data_bytes=1200,
    )
    return ScenarioSpec(
        duration=3600.0,
        clients=(victim,),
        aps=(ap,),
        injections=(
            Injection(
                at=1600.0,
                client=victim.mac,
                kind="probe-flood",
                rate_per_s=40.0,
                duration_s=1700.0,
            ),
        ),
        seed=seed,
    )
