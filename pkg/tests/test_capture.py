"""Capture parsing: pcap containers, radiotap/prism headers, timelines."""

import struct

import pytest

from probescope.capture import (
    BROADCAST,
    FrameKind,
    MalformedCapture,
    Subtype,
    UNKNOWN_MAC,
    UnsupportedLinkType,
    client_streams,
    parse_capture,
)
from probescope.simulator import capture_to_bytes

from conftest import AP, AP2, CLIENT, ack, beacon, frame, null_data, preq, presp, random_frames


def _pcap(records, endian="<", network=127):
    head = struct.pack(endian + "IHHiIII", 0xA1B2C3D4, 2, 4, 0, 0, 65535, network)
    out = [head]
    for ts_sec, ts_usec, payload in records:
        out.append(struct.pack(endian + "IIII", ts_sec, ts_usec, len(payload), len(payload)))
        out.append(payload)
    return b"".join(out)


def _radiotap(rate=2, freq=2437, rssi=-40, with_signal=True):
    present = 0x2F if with_signal else 0x0F
    body = struct.pack("<QBB", 0, 0, rate) + struct.pack("<HH", freq, 0x00A0)
    if with_signal:
        body += struct.pack("<b", rssi)
    return struct.pack("<BBHI", 0, 0, 8 + len(body), present) + body


def _beacon_mac(bssid="0a:00:00:00:00:01", ssid=b"lab"):
    addr = bytes(int(x, 16) for x in bssid.split(":"))
    header = struct.pack("<HH", 0x0080, 0) + b"\xff" * 6 + addr + addr + struct.pack("<H", 0)
    body = struct.pack("<QHH", 0, 100, 0x0401)
    body += struct.pack("<BB", 0, len(ssid)) + ssid
    body += struct.pack("<BBHBH", 11, 5, 7, 128, 0)
    return header + body


def test_single_beacon_record():
    data = _pcap([(10, 500000, _radiotap() + _beacon_mac())])
    cap = parse_capture(data)
    assert len(cap) == 1 and cap.skipped == 0
    f = cap[0]
    assert f.frame_kind is FrameKind.MANAGEMENT
    assert f.subtype is Subtype.BEACON
    assert f.timestamp == 0.5  # normalized to capture start
    assert f.phy_rate == 1.0
    assert f.channel == 6
    assert f.rssi == -40
    assert f.ssid == "lab"
    assert f.station_count == 7
    assert f.channel_utilization_raw == 128
    assert f.beacon_interval == 100


def test_truncated_record_skipped():
    data = _pcap([(0, 0, _radiotap() + b"\x80\x00\x00")])
    cap = parse_capture(data)
    assert len(cap) == 0
    assert cap.skipped == 1


def test_big_endian_container():
    data = _pcap([(3, 250, _radiotap() + _beacon_mac())], endian=">")
    cap = parse_capture(data)
    assert len(cap) == 1
    assert cap[0].timestamp == 0.000250


def test_bad_magic_rejected():
    with pytest.raises(MalformedCapture):
        parse_capture(b"\x00" * 40)


def test_truncated_global_header_rejected():
    with pytest.raises(MalformedCapture):
        parse_capture(struct.pack("<I", 0xA1B2C3D4))


def test_nanosecond_pcap_rejected():
    data = struct.pack("<IHHiIII", 0xA1B23C4D, 2, 4, 0, 0, 65535, 127)
    with pytest.raises(MalformedCapture):
        parse_capture(data)


def test_unsupported_link_type():
    data = _pcap([], network=1)  # ethernet
    with pytest.raises(UnsupportedLinkType):
        parse_capture(data)


def test_link_type_mismatch():
    data = _pcap([])
    with pytest.raises(UnsupportedLinkType):
        parse_capture(data, link_type="prism")
    assert parse_capture(data, link_type="radiotap").frames == []
    assert parse_capture(data, link_type=127).frames == []


def _prism_header(channel=6, signal=-55, rate=4):
    head = struct.pack("<II", 0x44, 144) + b"wlan0".ljust(16, b"\x00")
    dids = []
    for idx in range(10):
        if idx == 3:
            dids.append(struct.pack("<IHHI", 0x3041, 0, 4, channel))
        elif idx == 5:
            dids.append(struct.pack("<IHHi", 0x6041, 0, 4, signal))
        elif idx == 7:
            dids.append(struct.pack("<IHHI", 0x8041, 0, 4, rate))
        else:
            dids.append(struct.pack("<IHHI", 0x1041 + idx * 0x1000, 1, 0, 0))
    return head + b"".join(dids)


def test_prism_record():
    data = _pcap([(0, 0, _prism_header() + _beacon_mac())], network=119)
    cap = parse_capture(data, link_type="prism")
    assert cap.link_type == 119
    f = cap[0]
    assert f.channel == 6
    assert f.rssi == -55
    assert f.phy_rate == 2.0
    assert f.subtype is Subtype.BEACON


def test_radiotap_without_signal_gives_absent_rssi():
    data = _pcap([(0, 0, _radiotap(with_signal=False) + _beacon_mac())])
    assert parse_capture(data)[0].rssi is None


def test_roundtrip_small_random():
    frames = random_frames(300, seed=9)
    cap = parse_capture(capture_to_bytes(frames))
    assert cap.frames == frames
    assert cap.skipped == 0


def test_monotonic_timestamps_preserved(small_trace):
    trace, _ = small_trace
    parsed = parse_capture(capture_to_bytes(trace)).frames
    times = [f.timestamp for f in parsed]
    assert times == sorted(times)


class TestClientStreams:
    def test_two_clients_order_preserving(self):
        other = "02:00:00:00:00:bb"
        frames = [
            beacon(0.0),
            frame(0.1),
            frame(0.2, tx=other),
            frame(0.3),
            frame(0.4, tx=other),
        ]
        streams = client_streams(frames)
        assert set(streams) == {CLIENT, other}
        for timeline in streams.values():
            times = [f.timestamp for f in timeline.frames]
            assert times == sorted(times)
        assert sum(1 for f in streams[CLIENT].frames if f.transmitter == CLIENT) == 2

    def test_probe_response_addressed_to_client(self):
        frames = [preq(0.0), presp(0.005, rx=CLIENT)]
        streams = client_streams(frames)
        assert [f.subtype for f in streams[CLIENT].frames] == [
            Subtype.PROBE_REQUEST,
            Subtype.PROBE_RESPONSE,
        ]

    def test_empty_input(self):
        assert client_streams([]) == {}

    def test_ap_not_a_client(self):
        frames = [beacon(0.0), frame(0.1, tx=AP, rx=CLIENT, bssid=AP)]
        streams = client_streams(frames)
        assert AP not in streams
        assert CLIENT in streams  # addressed data frame

    def test_acks_and_deauths_follow_receiver(self):
        frames = [
            frame(0.1),
            ack(0.1001),
            frame(0.2, Subtype.DEAUTHENTICATION, tx=AP, rx=CLIENT, bssid=AP, nbytes=26),
        ]
        streams = client_streams(frames)
        subtypes = [f.subtype for f in streams[CLIENT].frames]
        assert Subtype.ACK in subtypes and Subtype.DEAUTHENTICATION in subtypes

    def test_beacons_replicated_to_all_clients(self):
        other = "02:00:00:00:00:bb"
        frames = [frame(0.05), frame(0.06, tx=other), beacon(0.1)]
        streams = client_streams(frames)
        assert any(f.subtype is Subtype.BEACON for f in streams[CLIENT].frames)
        assert any(f.subtype is Subtype.BEACON for f in streams[other].frames)

    def test_transmitter_partition(self, small_trace):
        trace, _ = small_trace
        streams = client_streams(trace)
        seen = {}
        for mac, timeline in streams.items():
            for f in timeline.frames:
                if f.transmitter == mac:
                    assert id(f) not in seen, "frame owned by two timelines"
                    seen[id(f)] = mac
