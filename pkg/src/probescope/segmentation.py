"""Split client timelines into active-scanning episodes and windows.

An episode is a maximal run of one client's probe requests whose
consecutive gaps are strictly below the gap threshold (default one
second).  The window before episode *i* holds the client's frames between
episode *i-1* and episode *i*; window 0 reaches back to the capture start
so the first episode is classifiable.  Probe responses trailing an
episode by less than the gap threshold belong to the episode (they answer
its requests), not to the following window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .capture import ClientTimeline, Frame, Subtype

DEFAULT_GAP_THRESHOLD_S = 1.0


@dataclass
class ScanEpisode:
    """One active-scanning episode: the probe requests plus their answers."""

    client_mac: str
    preqs: list[Frame]
    presps: list[Frame] = field(default_factory=list)

    @property
    def start(self) -> float:
        return self.preqs[0].timestamp

    @property
    def end(self) -> float:
        return self.preqs[-1].timestamp


@dataclass
class Window:
    """The client's frames strictly between two consecutive episodes."""

    client_mac: str
    frames: list[Frame]
    start: float
    end: float


def segment_episodes(
    timeline: ClientTimeline, gap_threshold: float = DEFAULT_GAP_THRESHOLD_S
) -> list[ScanEpisode]:
    """Group the client's probe requests into maximal sub-threshold runs.

    A gap of exactly ``gap_threshold`` starts a new episode.  Each probe
    request of the client lands in exactly one episode.  Responses
    addressed to the client within ``[start, end + gap_threshold)`` are
    attached to the episode.
    """
    if gap_threshold <= 0:
        raise ValueError("gap_threshold must be positive")
    client = timeline.client_mac
    preqs = [
        f
        for f in timeline.frames
        if f.subtype is Subtype.PROBE_REQUEST and f.transmitter == client
    ]
    if not preqs:
        return []

    episodes: list[ScanEpisode] = []
    run = [preqs[0]]
    for frame in preqs[1:]:
        if frame.timestamp - run[-1].timestamp < gap_threshold:
            run.append(frame)
        else:
            episodes.append(ScanEpisode(client_mac=client, preqs=run))
            run = [frame]
    episodes.append(ScanEpisode(client_mac=client, preqs=run))

    presps = [
        f
        for f in timeline.frames
        if f.subtype is Subtype.PROBE_RESPONSE and f.receiver == client
    ]
    idx = 0
    for episode in episodes:
        cutoff = episode.end + gap_threshold
        while idx < len(presps) and presps[idx].timestamp < cutoff:
            if presps[idx].timestamp >= episode.start:
                episode.presps.append(presps[idx])
            idx += 1
    return episodes


def windows(episodes: list[ScanEpisode], timeline: ClientTimeline) -> list[Window]:
    """Build the window preceding each episode; one window per episode.

    Window 0 spans from the capture start to the first episode.  Frames
    already attached to the previous episode (its trailing probe
    responses) are excluded from the window that follows it.
    """
    out: list[Window] = []
    attached: set[int] = set()
    for episode in episodes:
        attached.update(id(f) for f in episode.presps)
    frames = timeline.frames
    idx = 0
    prev_end = float("-inf")
    for episode in episodes:
        selected = []
        while idx < len(frames) and frames[idx].timestamp < episode.start:
            frame = frames[idx]
            idx += 1
            if frame.timestamp > prev_end and id(frame) not in attached:
                selected.append(frame)
        out.append(
            Window(
                client_mac=timeline.client_mac,
                frames=selected,
                start=max(prev_end, 0.0),
                end=episode.start,
            )
        )
        prev_end = episode.end
    return out
