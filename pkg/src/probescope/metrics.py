"""Network-wide probe-traffic and performance metrics.

Everything operates on sorted frame sequences.  Time series use
contiguous fixed-width bins anchored at t=0; histograms are percentages
over unique values; airtime follows a configurable frame-duration model
(long DSSS preamble for the 802.11b rates, short OFDM preamble
otherwise, plus payload bits divided by the PHY rate).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .capture import Frame, FrameKind, Subtype
from .segmentation import ScanEpisode


class MetricError(ValueError):
    pass


class NonPositiveBin(MetricError):
    pass


class EmptyClass(MetricError):
    pass


class TooFewFrames(MetricError):
    pass


class UnknownRate(MetricError):
    pass


class MissingQBSS(MetricError):
    pass


# SIFS + ACK transmission fits well inside this sniffer-side budget.
ACK_WINDOW_S = 0.001


@dataclass
class MetricSeries:
    """A named time series of contiguous, equal-width bins."""

    metric_name: str
    bin_width: float
    bins: list[tuple[float, float]] = field(default_factory=list)

    @property
    def values(self) -> list[float]:
        return [v for _t, v in self.bins]


@dataclass(frozen=True)
class AirtimeModel:
    """On-air duration model: preamble plus payload time per frame."""

    dsss_preamble_us: float = 192.0
    ofdm_preamble_us: float = 20.0
    dsss_rates: frozenset = frozenset({1.0, 2.0, 5.5, 11.0})

    def duration_us(self, frame: Frame) -> float:
        if frame.phy_rate <= 0:
            raise UnknownRate("frame with non-positive PHY rate %r" % frame.phy_rate)
        preamble = (
            self.dsss_preamble_us
            if frame.phy_rate in self.dsss_rates
            else self.ofdm_preamble_us
        )
        return preamble + frame.frame_bytes * 8.0 / frame.phy_rate


DEFAULT_AIRTIME_MODEL = AirtimeModel()

# Traffic class predicates.  "probe" is a subset of "management";
# {"probe", "data", "other"} partition the whole capture.
TRAFFIC_CLASSES = {
    "total": lambda f: True,
    "management": lambda f: f.frame_kind is FrameKind.MANAGEMENT,
    "control": lambda f: f.frame_kind is FrameKind.CONTROL,
    "data": lambda f: f.frame_kind is FrameKind.DATA,
    "probe": lambda f: f.subtype in (Subtype.PROBE_REQUEST, Subtype.PROBE_RESPONSE),
    "probe-request": lambda f: f.subtype is Subtype.PROBE_REQUEST,
    "probe-response": lambda f: f.subtype is Subtype.PROBE_RESPONSE,
    "other": lambda f: f.frame_kind is not FrameKind.DATA
    and f.subtype not in (Subtype.PROBE_REQUEST, Subtype.PROBE_RESPONSE),
}


def _select(frames: Sequence[Frame], traffic_class: str) -> list[Frame]:
    try:
        predicate = TRAFFIC_CLASSES[traffic_class]
    except KeyError:
        raise MetricError("unknown traffic class %r" % traffic_class) from None
    return [f for f in frames if predicate(f)]


def _bin_count(frames: Sequence[Frame], bin_s: float) -> int:
    if not frames:
        return 0
    return int(frames[-1].timestamp / bin_s) + 1


def _bin_starts(nbins: int, bin_s: float) -> list[float]:
    return [i * bin_s for i in range(nbins)]


def traffic_rates(frames: Sequence[Frame], bin_s: float) -> dict[str, MetricSeries]:
    """Frames per minute for the total/management/probe/data classes."""
    if bin_s <= 0:
        raise NonPositiveBin("bin width must be positive")
    nbins = _bin_count(frames, bin_s)
    counts = {name: np.zeros(nbins) for name in ("total", "management", "probe", "data")}
    for frame in frames:
        idx = int(frame.timestamp / bin_s)
        counts["total"][idx] += 1
        if frame.frame_kind is FrameKind.MANAGEMENT:
            counts["management"][idx] += 1
        if frame.subtype in (Subtype.PROBE_REQUEST, Subtype.PROBE_RESPONSE):
            counts["probe"][idx] += 1
        if frame.frame_kind is FrameKind.DATA:
            counts["data"][idx] += 1
    starts = _bin_starts(nbins, bin_s)
    scale = 60.0 / bin_s
    return {
        name: MetricSeries(
            metric_name="%s-frames-per-minute" % name,
            bin_width=bin_s,
            bins=list(zip(starts, (arr * scale).tolist())),
        )
        for name, arr in counts.items()
    }


def size_and_rate_distributions(
    frames: Sequence[Frame], traffic_class: str
) -> tuple[dict[int, float], dict[float, float]]:
    """Percentage of frames per unique on-air size and per unique PHY rate."""
    selected = _select(frames, traffic_class)
    if not selected:
        raise EmptyClass("no frames in class %r" % traffic_class)
    total = len(selected)
    sizes: dict[int, float] = {}
    rates: dict[float, float] = {}
    for frame in selected:
        sizes[frame.frame_bytes] = sizes.get(frame.frame_bytes, 0) + 1
        rates[frame.phy_rate] = rates.get(frame.phy_rate, 0) + 1
    return (
        {size: 100.0 * n / total for size, n in sorted(sizes.items())},
        {rate: 100.0 * n / total for rate, n in sorted(rates.items())},
    )


def ifat(frames: Sequence[Frame], traffic_class: str = "total") -> list[float]:
    """Inter-frame arrival times: gaps between consecutive frames of a class."""
    selected = _select(frames, traffic_class)
    if len(selected) < 2:
        raise TooFewFrames(
            "need at least two %r frames for arrival gaps" % traffic_class
        )
    times = [f.timestamp for f in selected]
    return [b - a for a, b in zip(times, times[1:])]


def airtime_utilization(
    frames: Sequence[Frame],
    traffic_class: str,
    bin_s: float,
    model: AirtimeModel = DEFAULT_AIRTIME_MODEL,
) -> MetricSeries:
    """Percentage of each bin occupied by the class under the duration model."""
    if bin_s <= 0:
        raise NonPositiveBin("bin width must be positive")
    predicate = TRAFFIC_CLASSES.get(traffic_class)
    if predicate is None:
        raise MetricError("unknown traffic class %r" % traffic_class)
    nbins = _bin_count(frames, bin_s)
    busy_us = np.zeros(nbins)
    for frame in frames:
        if not predicate(frame):
            continue
        busy_us[int(frame.timestamp / bin_s)] += model.duration_us(frame)
    starts = _bin_starts(nbins, bin_s)
    values = (busy_us / (bin_s * 1e6) * 100.0).tolist()
    return MetricSeries(
        metric_name="airtime-%s-pct" % traffic_class,
        bin_width=bin_s,
        bins=list(zip(starts, values)),
    )


def channel_utilization(beacons: Sequence[Frame], bin_s: float = 1.0) -> MetricSeries:
    """QBSS channel-utilization percentage announced in beacons.

    The raw 0..255 value scales to percent; values are averaged per bin.
    Bins without beacons report zero.  Every input beacon must carry the
    QBSS load element.
    """
    if bin_s <= 0:
        raise NonPositiveBin("bin width must be positive")
    for frame in beacons:
        if frame.channel_utilization_raw is None:
            raise MissingQBSS("beacon without QBSS channel utilization")
    nbins = _bin_count(beacons, bin_s)
    sums = np.zeros(nbins)
    counts = np.zeros(nbins)
    for frame in beacons:
        idx = int(frame.timestamp / bin_s)
        sums[idx] += frame.channel_utilization_raw / 255.0 * 100.0
        counts[idx] += 1
    values = np.divide(sums, counts, out=np.zeros(nbins), where=counts > 0)
    return MetricSeries(
        metric_name="channel-utilization-pct",
        bin_width=bin_s,
        bins=list(zip(_bin_starts(nbins, bin_s), values.tolist())),
    )


def data_ack_status(
    frames: Sequence[Frame], transmitter: Optional[str] = None
) -> list[tuple[Frame, bool]]:
    """Pair each payload data frame with whether an ACK followed it.

    A data frame counts as acknowledged when an ACK addressed to its
    transmitter appears within the SIFS+ACK budget after it.  Restricting
    ``transmitter`` limits the check to one client's uplink.
    """
    ack_times: dict[str, list[float]] = {}
    for frame in frames:
        if frame.subtype is Subtype.ACK:
            ack_times.setdefault(frame.receiver, []).append(frame.timestamp)
    out: list[tuple[Frame, bool]] = []
    for frame in frames:
        if frame.subtype not in (Subtype.DATA, Subtype.QOS_DATA):
            continue
        if transmitter is not None and frame.transmitter != transmitter:
            continue
        acks = ack_times.get(frame.transmitter, [])
        lo = bisect_right(acks, frame.timestamp)
        hi = bisect_right(acks, frame.timestamp + ACK_WINDOW_S)
        out.append((frame, hi > lo))
    return out


def goodput(frames: Sequence[Frame], bin_s: float) -> MetricSeries:
    """Delivered data bytes per second: acked, non-retry data frames only.

    Retransmissions are excluded so a frame delivered after retries is
    counted once, via its original transmission (the ACK that finally
    answers it lands inside the original's acknowledgement window).
    """
    if bin_s <= 0:
        raise NonPositiveBin("bin width must be positive")
    nbins = _bin_count(frames, bin_s)
    delivered = np.zeros(nbins)
    for frame, acked in data_ack_status(frames):
        if acked and not frame.retry_flag:
            delivered[int(frame.timestamp / bin_s)] += frame.frame_bytes
    values = (delivered / bin_s).tolist()
    return MetricSeries(
        metric_name="goodput-bytes-per-second",
        bin_width=bin_s,
        bins=list(zip(_bin_starts(nbins, bin_s), values)),
    )


def _presp_key(frame: Frame) -> tuple:
    return (frame.ssid, frame.bssid, frame.channel, frame.station_count)


def redundant_probe_traffic(episodes: Sequence[ScanEpisode]) -> tuple[int, int]:
    """Count probe responses repeating the previous episode's information.

    A response in episode *i* is redundant when episode *i-1* already
    delivered a response with the identical (SSID, BSSID, channel,
    station count) tuple.  Returns (redundant, total) over all episodes
    of one client, time-ordered.
    """
    redundant = 0
    total = 0
    previous: set[tuple] = set()
    for episode in episodes:
        current = set()
        for presp in episode.presps:
            total += 1
            key = _presp_key(presp)
            current.add(key)
            if key in previous:
                redundant += 1
        previous = current
    return redundant, total
