"""Episode segmentation against an independent grouping oracle."""

import random

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from probescope.capture import ClientTimeline, Subtype
from probescope.segmentation import segment_episodes, windows

from conftest import CLIENT, frame, preq, presp


def timeline(frames):
    return ClientTimeline(client_mac=CLIENT, frames=sorted(frames, key=lambda f: f.timestamp))


def oracle_groups(times, gap):
    """Transitive closure of the pairwise |ti - tj| < gap relation.

    Graph connected components over the full pairwise matrix; independent
    of the maximal-run scan used by the implementation.
    """
    if not times:
        return []
    pts = np.array(sorted(times))
    adj = np.abs(pts[:, None] - pts[None, :]) < gap
    n_comp, labels = connected_components(csr_matrix(adj), directed=False)
    groups = [[] for _ in range(n_comp)]
    for value, label in zip(pts, labels):
        groups[label].append(float(value))
    groups.sort(key=lambda g: g[0])
    return groups


def test_three_then_one():
    tl = timeline([preq(t) for t in (0.0, 0.4, 0.8, 2.0)])
    episodes = segment_episodes(tl)
    assert [[f.timestamp for f in e.preqs] for e in episodes] == [[0.0, 0.4, 0.8], [2.0]]
    assert [[f.timestamp for f in e.preqs] for e in episodes] == oracle_groups(
        [0.0, 0.4, 0.8, 2.0], 1.0
    )


def test_no_probe_requests():
    tl = timeline([frame(1.0), frame(2.0)])
    assert segment_episodes(tl) == []


def test_exact_gap_starts_new_episode():
    tl = timeline([preq(0.0), preq(1.0)])
    episodes = segment_episodes(tl)
    assert len(episodes) == 2
    assert oracle_groups([0.0, 1.0], 1.0) == [[0.0], [1.0]]


def test_oracle_equivalence_random():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(0, 200)
        times, t = [], 0.0
        for _ in range(n):
            t += rng.choice([rng.uniform(0.0, 0.999), rng.uniform(1.0, 3.0), 1.0])
            times.append(t)
        tl = timeline([preq(x) for x in times])
        on_grid = [f.timestamp for f in tl.frames]
        got = [[f.timestamp for f in e.preqs] for e in segment_episodes(tl)]
        assert got == oracle_groups(on_grid, 1.0)


def test_gap_law():
    rng = random.Random(13)
    times, t = [], 0.0
    for _ in range(150):
        t += rng.uniform(0.05, 2.5)
        times.append(t)
    episodes = segment_episodes(timeline([preq(x) for x in times]), gap_threshold=1.0)
    for e in episodes:
        ts = [f.timestamp for f in e.preqs]
        assert all(b - a < 1.0 for a, b in zip(ts, ts[1:]))
    for prev, cur in zip(episodes, episodes[1:]):
        assert cur.start - prev.end >= 1.0


def test_completeness_no_duplication():
    rng = random.Random(5)
    times = sorted(rng.uniform(0, 60) for _ in range(120))
    tl = timeline([preq(x) for x in times])
    episodes = segment_episodes(tl)
    collected = [f.timestamp for e in episodes for f in e.preqs]
    assert sorted(collected) == [f.timestamp for f in tl.frames]
    assert len(collected) == len(times)


def test_trailing_probe_responses_attach_to_episode():
    tl = timeline([preq(0.0), preq(0.2), presp(0.25), presp(1.1), preq(5.0)])
    episodes = segment_episodes(tl)
    assert [f.timestamp for f in episodes[0].presps] == [0.25, 1.1]
    assert episodes[1].presps == []
    wins = windows(episodes, tl)
    # The trailing response belongs to episode 0, not window 1.
    assert all(f.subtype is not Subtype.PROBE_RESPONSE for f in wins[1].frames)


def test_windows_between_episodes():
    tl = timeline(
        [preq(0.0), frame(1.5), frame(2.5), preq(4.0), frame(5.0)]
    )
    episodes = segment_episodes(tl)
    wins = windows(episodes, tl)
    assert len(wins) == len(episodes) == 2
    assert [f.timestamp for f in wins[1].frames] == [1.5, 2.5]
    assert wins[1].start == 0.0 or wins[1].start == episodes[0].end
    assert wins[1].end == episodes[1].start


def test_window_zero_spans_capture_start():
    tl = timeline([frame(2.0), frame(5.0), preq(10.0)])
    wins = windows(segment_episodes(tl), tl)
    assert [f.timestamp for f in wins[0].frames] == [2.0, 5.0]
    assert wins[0].start == 0.0


def test_zero_episodes_zero_windows():
    tl = timeline([frame(1.0)])
    assert windows([], tl) == []


def test_gap_threshold_must_be_positive():
    with pytest.raises(ValueError):
        segment_episodes(timeline([preq(0.0)]), gap_threshold=0.0)
