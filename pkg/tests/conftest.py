import random

import pytest

from probescope.capture import BROADCAST, Frame, FrameKind, Subtype, UNKNOWN_MAC, quantize_ts

CLIENT = "02:00:00:00:00:aa"
AP = "0a:00:00:00:00:01"
AP2 = "0a:00:00:00:00:02"


def frame(
    t,
    subtype=Subtype.QOS_DATA,
    tx=CLIENT,
    rx=AP,
    bssid=AP,
    rate=24.0,
    channel=6,
    nbytes=120,
    rssi=-45,
    **kwargs,
):
    kind = {
        Subtype.DATA: FrameKind.DATA,
        Subtype.QOS_DATA: FrameKind.DATA,
        Subtype.NULL_DATA: FrameKind.DATA,
        Subtype.ACK: FrameKind.CONTROL,
    }.get(subtype, FrameKind.MANAGEMENT)
    return Frame(
        timestamp=quantize_ts(t),
        phy_rate=rate,
        channel=channel,
        frame_kind=kind,
        subtype=subtype,
        transmitter=tx,
        receiver=rx,
        bssid=bssid,
        frame_bytes=nbytes,
        rssi=rssi,
        **kwargs,
    )


def preq(t, tx=CLIENT, ssid="", **kw):
    return frame(t, Subtype.PROBE_REQUEST, tx=tx, rx=BROADCAST, bssid=BROADCAST, rate=1.0, nbytes=72, ssid=ssid, **kw)


def presp(t, rx=CLIENT, tx=AP, ssid="net", station_count=4, **kw):
    return frame(
        t,
        Subtype.PROBE_RESPONSE,
        tx=tx,
        rx=rx,
        bssid=tx,
        nbytes=160,
        ssid=ssid,
        station_count=station_count,
        **kw,
    )


def beacon(t, tx=AP, ssid="net", cu=64, station_count=4, interval=100, **kw):
    return frame(
        t,
        Subtype.BEACON,
        tx=tx,
        rx=BROADCAST,
        bssid=tx,
        rate=1.0,
        nbytes=180,
        ssid=ssid,
        channel_utilization_raw=cu,
        station_count=station_count,
        beacon_interval=interval,
        **kw,
    )


def ack(t, rx=CLIENT, **kw):
    return frame(t, Subtype.ACK, tx=UNKNOWN_MAC, rx=rx, bssid=UNKNOWN_MAC, nbytes=14, rssi=-30, **kw)


def null_data(t, tx=CLIENT, power_save=False, **kw):
    return frame(t, Subtype.NULL_DATA, tx=tx, nbytes=28, power_mgmt_flag=power_save, **kw)


_RATES = [1.0, 2.0, 5.5, 6.0, 11.0, 12.0, 24.0, 48.0, 54.0]
_CHANNELS = [1, 6, 11, 36, 149]
_MACS = ["02:00:00:00:00:%02x" % i for i in range(6)] + [AP, AP2]


def random_frames(n, seed=0, start=0.05):
    """Randomized but encodable frames for write/parse round-trip checks."""
    rng = random.Random(seed)
    frames = []
    t = start
    for _ in range(n):
        t += rng.uniform(0.00001, 0.8)
        kind = rng.random()
        tx = rng.choice(_MACS)
        rx = rng.choice(_MACS + [BROADCAST])
        rssi = rng.choice([None, rng.randint(-100, -20)])
        common = dict(
            t=t,
            rate=rng.choice(_RATES),
            channel=rng.choice(_CHANNELS),
            rssi=rssi,
            retry_flag=rng.random() < 0.2,
            power_mgmt_flag=rng.random() < 0.2,
        )
        if kind < 0.25:
            cu, sc = rng.choice([(None, None), (rng.randint(0, 255), rng.randint(0, 40))])
            frames.append(
                frame(
                    subtype=rng.choice([Subtype.BEACON, Subtype.PROBE_RESPONSE]),
                    tx=tx,
                    rx=rx,
                    bssid=tx,
                    nbytes=rng.randint(60, 300),
                    ssid=rng.choice([None, "", "net-%d" % rng.randint(0, 3)]),
                    channel_utilization_raw=cu,
                    station_count=sc,
                    beacon_interval=rng.choice([None, 100, 200]),
                    **common,
                )
            )
        elif kind < 0.45:
            frames.append(
                frame(
                    subtype=Subtype.PROBE_REQUEST,
                    tx=tx,
                    rx=BROADCAST,
                    bssid=BROADCAST,
                    nbytes=rng.randint(40, 140),
                    ssid=rng.choice([None, "", "corp"]),
                    **common,
                )
            )
        elif kind < 0.55:
            frames.append(
                frame(
                    subtype=rng.choice(
                        [Subtype.ASSOC_RESPONSE, Subtype.REASSOC_RESPONSE, Subtype.AUTHENTICATION]
                    ),
                    tx=tx,
                    rx=rx,
                    bssid=tx,
                    nbytes=rng.randint(40, 90),
                    status_code=rng.choice([0, 0, 1, 17]),
                    **common,
                )
            )
        elif kind < 0.65:
            sub = rng.choice(
                [Subtype.ASSOC_REQUEST, Subtype.REASSOC_REQUEST, Subtype.DEAUTHENTICATION,
                 Subtype.DISASSOCIATION]
            )
            ssid = None
            if sub in (Subtype.ASSOC_REQUEST, Subtype.REASSOC_REQUEST):
                ssid = rng.choice(["", "corp"])
            frames.append(frame(subtype=sub, tx=tx, rx=rx, bssid=rx, nbytes=rng.randint(40, 90), ssid=ssid, **common))
        elif kind < 0.75:
            frames.append(frame(subtype=Subtype.ACK, tx=UNKNOWN_MAC, rx=rx, bssid=UNKNOWN_MAC, nbytes=rng.randint(14, 20), **common))
        else:
            sub = rng.choice([Subtype.DATA, Subtype.QOS_DATA, Subtype.NULL_DATA])
            # to-DS, from-DS, and IBSS address layouts all round-trip
            layout = rng.random()
            if layout < 0.4:
                tx2, rx2, bssid = tx, AP, AP
            elif layout < 0.8:
                tx2, rx2, bssid = AP, tx, AP
            else:
                tx2, rx2, bssid = tx, rx if rx != tx else BROADCAST, AP2
            frames.append(
                frame(subtype=sub, tx=tx2, rx=rx2, bssid=bssid, nbytes=rng.randint(40, 1500), **common)
            )
    return frames


@pytest.fixture(scope="session")
def small_trace():
    from probescope import simulator as sim

    spec = sim.ScenarioSpec(
        duration=120.0,
        clients=(
            sim.ClientSpec(mac=CLIENT, associated_ap=AP),
            sim.ClientSpec(mac="02:00:00:00:00:ab"),
        ),
        aps=(sim.ApSpec(bssid=AP, ssid="lab", channel=6),),
        seed=42,
    )
    return sim.generate(spec)
