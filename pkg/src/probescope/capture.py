"""Parse 802.11 sniffer captures into typed frames and per-client timelines.

Input is a classic pcap container (either byte order) whose link layer is
radiotap (DLT 127) or wlan-ng prism (DLT 119).  Only the PHY metadata and
MAC fields consumed by the analysis pipeline are decoded; vendor IEs,
HT/VHT capabilities and encrypted payloads are skipped.  Timestamps are
re-based to the capture start (whole seconds of the first record) so that
microsecond precision survives float arithmetic on epoch-sized values.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

PCAP_MAGIC = 0xA1B2C3D4
PCAP_MAGIC_NS = 0xA1B23C4D  # nanosecond pcap, not supported
PCAP_VERSION = (2, 4)

LINKTYPE_PRISM = 119
LINKTYPE_RADIOTAP = 127

BROADCAST = "ff:ff:ff:ff:ff:ff"
# Control frames such as ACK/CTS carry no transmitter address on air.
UNKNOWN_MAC = "00:00:00:00:00:00"


class CaptureError(ValueError):
    pass


class MalformedCapture(CaptureError):
    """Bad pcap magic, truncated global header, or unusable container."""


class UnsupportedLinkType(CaptureError):
    """The capture's link layer is neither radiotap nor prism."""


class FrameKind(str, Enum):
    MANAGEMENT = "management"
    CONTROL = "control"
    DATA = "data"


class Subtype(str, Enum):
    ASSOC_REQUEST = "association-request"
    ASSOC_RESPONSE = "association-response"
    REASSOC_REQUEST = "reassociation-request"
    REASSOC_RESPONSE = "reassociation-response"
    PROBE_REQUEST = "probe-request"
    PROBE_RESPONSE = "probe-response"
    BEACON = "beacon"
    DISASSOCIATION = "disassociation"
    AUTHENTICATION = "authentication"
    DEAUTHENTICATION = "deauthentication"
    ACK = "ack"
    NULL_DATA = "null-data"
    QOS_DATA = "qos-data"
    DATA = "data"
    OTHER = "other"


# Management subtypes that may carry an SSID element.
SSID_SUBTYPES = frozenset(
    {
        Subtype.PROBE_REQUEST,
        Subtype.PROBE_RESPONSE,
        Subtype.BEACON,
        Subtype.ASSOC_REQUEST,
        Subtype.REASSOC_REQUEST,
    }
)

DATA_SUBTYPES = frozenset({Subtype.NULL_DATA, Subtype.QOS_DATA, Subtype.DATA})

_MGMT_SUBTYPES = {
    0x0: Subtype.ASSOC_REQUEST,
    0x1: Subtype.ASSOC_RESPONSE,
    0x2: Subtype.REASSOC_REQUEST,
    0x3: Subtype.REASSOC_RESPONSE,
    0x4: Subtype.PROBE_REQUEST,
    0x5: Subtype.PROBE_RESPONSE,
    0x8: Subtype.BEACON,
    0xA: Subtype.DISASSOCIATION,
    0xB: Subtype.AUTHENTICATION,
    0xC: Subtype.DEAUTHENTICATION,
}

# Information element ids we decode.
IE_SSID = 0
IE_QBSS_LOAD = 11

# Radiotap optional fields, in present-bit order: (size, alignment).
# Needed to walk the header even for fields we do not keep.
_RADIOTAP_FIELDS = [
    (8, 8),  # 0  TSFT
    (1, 1),  # 1  flags
    (1, 1),  # 2  rate
    (4, 2),  # 3  channel (freq + flags)
    (2, 1),  # 4  FHSS
    (1, 1),  # 5  dBm antenna signal
    (1, 1),  # 6  dBm antenna noise
    (2, 2),  # 7  lock quality
    (2, 2),  # 8  TX attenuation
    (2, 2),  # 9  dB TX attenuation
    (1, 1),  # 10 dBm TX power
    (1, 1),  # 11 antenna
    (1, 1),  # 12 dB antenna signal
    (1, 1),  # 13 dB antenna noise
    (2, 2),  # 14 RX flags
    (2, 2),  # 15 TX flags
    (1, 1),  # 16 RTS retries
    (1, 1),  # 17 data retries
    (8, 4),  # 18 XChannel
    (3, 1),  # 19 MCS
    (8, 4),  # 20 A-MPDU status
    (12, 2),  # 21 VHT
    (12, 8),  # 22 timestamp
]

_RT_TSFT = 1 << 0
_RT_FLAGS = 1 << 1
_RT_RATE = 1 << 2
_RT_CHANNEL = 1 << 3
_RT_ANT_SIGNAL = 1 << 5
_RT_EXT = 1 << 31

_RT_FLAG_FCS_AT_END = 0x10


def ts_from_sec_usec(sec: int, usec: int) -> float:
    """Canonical seconds+microseconds to float conversion.

    Writers and generators must quantize through the same expression so
    that write -> parse round-trips are bit-stable.
    """
    return sec + usec / 1e6


def ts_to_sec_usec(timestamp: float) -> tuple[int, int]:
    """Split a float timestamp into whole seconds and microseconds."""
    total = round(timestamp * 1e6)
    return divmod(total, 1_000_000)


def quantize_ts(timestamp: float) -> float:
    """Snap a timestamp to the microsecond grid used on the wire."""
    return ts_from_sec_usec(*ts_to_sec_usec(timestamp))


def freq_for_channel(channel: int) -> int:
    """IEEE channel number to centre frequency in MHz."""
    if 1 <= channel <= 13:
        return 2407 + 5 * channel
    if channel == 14:
        return 2484
    if 36 <= channel <= 165:
        return 5000 + 5 * channel
    return 0


def channel_for_freq(freq: int) -> int:
    """Centre frequency in MHz to IEEE channel number (0 if unknown)."""
    if freq == 2484:
        return 14
    if 2412 <= freq <= 2472:
        return (freq - 2407) // 5
    if 5170 <= freq <= 5825:
        return (freq - 5000) // 5
    return 0


@dataclass(frozen=True, slots=True)
class Frame:
    """One captured 802.11 frame: PHY metadata plus decoded MAC fields.

    ``timestamp`` is seconds since capture start at microsecond
    resolution.  ``rssi`` is absent (None) when the PHY header omitted the
    antenna-signal field; such frames are excluded from signal statistics.
    ``frame_bytes`` is the on-air MAC frame length.  Optional management
    payload fields (``ssid``, QBSS load, beacon interval, status code) are
    None when the frame does not carry them.
    """

    timestamp: float
    phy_rate: float
    channel: int
    frame_kind: FrameKind
    subtype: Subtype
    transmitter: str
    receiver: str
    bssid: str
    frame_bytes: int
    rssi: Optional[int] = None
    retry_flag: bool = False
    power_mgmt_flag: bool = False
    ssid: Optional[str] = None
    station_count: Optional[int] = None
    channel_utilization_raw: Optional[int] = None
    beacon_interval: Optional[int] = None
    status_code: Optional[int] = None

    @property
    def is_probe(self) -> bool:
        return self.subtype in (Subtype.PROBE_REQUEST, Subtype.PROBE_RESPONSE)

    @property
    def is_data(self) -> bool:
        return self.frame_kind is FrameKind.DATA


@dataclass
class ClientTimeline:
    """All frames attributable to one client, sorted by timestamp.

    A frame belongs to the timeline when the client transmitted it or is
    its addressed receiver.  Beacons (and broadcast deauthentications) are
    replicated into every client timeline: they are addressed to everyone
    and beacon spacing is evidence the per-client rule engine consumes.
    """

    client_mac: str
    frames: list[Frame] = field(default_factory=list)


@dataclass
class CaptureFile:
    """Result of parsing one capture: decoded frames plus bookkeeping.

    Behaves as a sequence of :class:`Frame`.  ``skipped`` counts records
    whose MAC header was truncated below the minimum for their type.
    """

    frames: list[Frame]
    skipped: int
    link_type: int

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self) -> Iterator[Frame]:
        return iter(self.frames)

    def __getitem__(self, index):
        return self.frames[index]


def _mac(raw: bytes) -> str:
    return ":".join("%02x" % b for b in raw)


def _parse_radiotap(buf: bytes) -> Optional[dict]:
    """Decode the radiotap fields we keep; None if the header is broken."""
    if len(buf) < 8:
        return None
    version, _pad, it_len, present = struct.unpack_from("<BBHI", buf, 0)
    if version != 0 or it_len < 8 or it_len > len(buf):
        return None

    # Skip extension bitmap words; field data starts after the last one.
    offset = 8
    words = [present]
    while words[-1] & _RT_EXT:
        if offset + 4 > it_len:
            return None
        words.append(struct.unpack_from("<I", buf, offset)[0])
        offset += 4

    out = {"header_len": it_len, "rate": None, "channel": 0, "rssi": None, "fcs_at_end": False}
    for bit, (size, align) in enumerate(_RADIOTAP_FIELDS):
        if not present & (1 << bit):
            continue
        offset = (offset + align - 1) & ~(align - 1)
        if offset + size > it_len:
            break
        if bit == 1:  # flags
            flags = buf[offset]
            out["fcs_at_end"] = bool(flags & _RT_FLAG_FCS_AT_END)
        elif bit == 2:  # rate, 0.5 Mbps units
            out["rate"] = buf[offset] / 2.0
        elif bit == 3:  # channel
            freq = struct.unpack_from("<H", buf, offset)[0]
            out["channel"] = channel_for_freq(freq)
        elif bit == 5:  # dBm antenna signal
            out["rssi"] = struct.unpack_from("<b", buf, offset)[0]
        offset += size
    return out


# wlan-ng prism monitor header: msgcode, msglen, devname[16], then ten
# 12-byte DIDs (did, status, len, data) in a fixed order.  status != 0
# means the capture driver did not supply the value.
_PRISM_HEADER_LEN = 144
_PRISM_DID_CHANNEL = 3
_PRISM_DID_SIGNAL = 5
_PRISM_DID_RATE = 7


def _parse_prism(buf: bytes) -> Optional[dict]:
    if len(buf) < _PRISM_HEADER_LEN:
        return None
    _msgcode, msglen = struct.unpack_from("<II", buf, 0)
    if msglen < _PRISM_HEADER_LEN or msglen > len(buf):
        return None
    out = {"header_len": msglen, "rate": None, "channel": 0, "rssi": None, "fcs_at_end": False}
    base = 24  # after msgcode, msglen, devname
    for idx in range(10):
        off = base + idx * 12
        _did, status, _dlen, data = struct.unpack_from("<IHHI", buf, off)
        if status != 0:
            continue
        if idx == _PRISM_DID_CHANNEL:
            out["channel"] = data
        elif idx == _PRISM_DID_SIGNAL:
            signed = struct.unpack("<i", struct.pack("<I", data))[0]
            out["rssi"] = signed
        elif idx == _PRISM_DID_RATE:
            out["rate"] = data / 2.0
    return out


def _walk_ies(body: bytes) -> dict[int, bytes]:
    """First occurrence of each information element id in a tagged area."""
    elements: dict[int, bytes] = {}
    offset = 0
    while offset + 2 <= len(body):
        ie_id = body[offset]
        ie_len = body[offset + 1]
        offset += 2
        if offset + ie_len > len(body):
            break
        if ie_id not in elements:
            elements[ie_id] = body[offset : offset + ie_len]
        offset += ie_len
    return elements


def _decode_mgmt_payload(subtype: Subtype, body: bytes) -> dict:
    """Decode fixed fields and the SSID/QBSS elements of a management body."""
    out: dict = {}
    fixed = 0
    if subtype in (Subtype.BEACON, Subtype.PROBE_RESPONSE):
        fixed = 12  # timestamp(8) + interval(2) + capability(2)
        if len(body) >= 10:
            out["beacon_interval"] = struct.unpack_from("<H", body, 8)[0] or None
    elif subtype is Subtype.PROBE_REQUEST:
        fixed = 0
    elif subtype is Subtype.ASSOC_REQUEST:
        fixed = 4
    elif subtype is Subtype.REASSOC_REQUEST:
        fixed = 10
    elif subtype in (Subtype.ASSOC_RESPONSE, Subtype.REASSOC_RESPONSE):
        if len(body) >= 4:
            out["status_code"] = struct.unpack_from("<H", body, 2)[0]
        return out
    elif subtype is Subtype.AUTHENTICATION:
        if len(body) >= 6:
            out["status_code"] = struct.unpack_from("<H", body, 4)[0]
        return out
    else:
        return out

    if len(body) < fixed:
        return out
    elements = _walk_ies(body[fixed:])
    if subtype in SSID_SUBTYPES and IE_SSID in elements:
        out["ssid"] = elements[IE_SSID].decode("utf-8", errors="replace")
    qbss = elements.get(IE_QBSS_LOAD)
    if qbss is not None and len(qbss) >= 3:
        out["station_count"] = struct.unpack_from("<H", qbss, 0)[0]
        out["channel_utilization_raw"] = qbss[2]
    return out


def _decode_mac(mac: bytes, phy: dict, timestamp: float, frame_bytes: int) -> Optional[Frame]:
    """Decode one MAC frame; None when the header is truncated."""
    if len(mac) < 10:
        return None
    if phy["fcs_at_end"] and len(mac) > 4:
        mac = mac[:-4]

    fctl = struct.unpack_from("<H", mac, 0)[0]
    ftype = (fctl >> 2) & 0x3
    fsub = (fctl >> 4) & 0xF
    to_ds = bool(fctl & 0x0100)
    from_ds = bool(fctl & 0x0200)
    retry = bool(fctl & 0x0800)
    pwr_mgmt = bool(fctl & 0x1000)

    transmitter = UNKNOWN_MAC
    bssid = UNKNOWN_MAC
    payload: dict = {}

    if ftype == 0:  # management
        if len(mac) < 24:
            return None
        kind = FrameKind.MANAGEMENT
        subtype = _MGMT_SUBTYPES.get(fsub, Subtype.OTHER)
        receiver = _mac(mac[4:10])
        transmitter = _mac(mac[10:16])
        bssid = _mac(mac[16:22])
        payload = _decode_mgmt_payload(subtype, mac[24:])
    elif ftype == 1:  # control
        kind = FrameKind.CONTROL
        receiver = _mac(mac[4:10])
        if fsub == 0xD:
            subtype = Subtype.ACK
        else:
            subtype = Subtype.OTHER
            if len(mac) >= 16:
                transmitter = _mac(mac[10:16])
    elif ftype == 2:  # data
        if len(mac) < 24:
            return None
        kind = FrameKind.DATA
        if fsub & 0x4:
            subtype = Subtype.NULL_DATA
        elif fsub & 0x8:
            subtype = Subtype.QOS_DATA
        else:
            subtype = Subtype.DATA
        addr1 = _mac(mac[4:10])
        addr2 = _mac(mac[10:16])
        addr3 = _mac(mac[16:22])
        receiver = addr1
        transmitter = addr2
        if to_ds and not from_ds:
            bssid = addr1
        elif from_ds and not to_ds:
            bssid = addr2
        else:
            bssid = addr3
    else:
        kind = FrameKind.CONTROL
        subtype = Subtype.OTHER
        receiver = _mac(mac[4:10])

    return Frame(
        timestamp=timestamp,
        phy_rate=phy["rate"] if phy["rate"] else 1.0,
        channel=phy["channel"],
        frame_kind=kind,
        subtype=subtype,
        transmitter=transmitter,
        receiver=receiver,
        bssid=bssid,
        frame_bytes=frame_bytes,
        rssi=phy["rssi"],
        retry_flag=retry,
        power_mgmt_flag=pwr_mgmt,
        **payload,
    )


_LINK_TYPE_NAMES = {
    "radiotap": LINKTYPE_RADIOTAP,
    "prism": LINKTYPE_PRISM,
    LINKTYPE_RADIOTAP: LINKTYPE_RADIOTAP,
    LINKTYPE_PRISM: LINKTYPE_PRISM,
}


def parse_capture(data: bytes, link_type: "str | int | None" = None) -> CaptureFile:
    """Parse pcap bytes into frames, one per decodable record.

    Args:
        data: full content of a classic pcap file (either byte order).
        link_type: optional "radiotap"/"prism" (or the DLT number); raises
            UnsupportedLinkType when it disagrees with the file header.

    Returns:
        CaptureFile with frames in file order; records whose MAC header is
        truncated are skipped and counted, not errors.

    Raises:
        MalformedCapture: bad magic or truncated global header.
        UnsupportedLinkType: link layer other than radiotap/prism.
    """
    if len(data) < 24:
        raise MalformedCapture("truncated pcap global header")
    magic = struct.unpack_from("<I", data, 0)[0]
    if magic == PCAP_MAGIC:
        endian = "<"
    elif struct.unpack_from(">I", data, 0)[0] == PCAP_MAGIC:
        endian = ">"
    elif magic == PCAP_MAGIC_NS or struct.unpack_from(">I", data, 0)[0] == PCAP_MAGIC_NS:
        raise MalformedCapture("nanosecond pcap is not supported")
    else:
        raise MalformedCapture("bad pcap magic 0x%08x" % magic)

    _vmaj, _vmin, _zone, _sigfigs, _snaplen, network = struct.unpack_from(
        endian + "HHiIII", data, 4
    )
    if network not in (LINKTYPE_RADIOTAP, LINKTYPE_PRISM):
        raise UnsupportedLinkType("unsupported link type %d" % network)
    if link_type is not None:
        wanted = _LINK_TYPE_NAMES.get(link_type)
        if wanted is None:
            raise UnsupportedLinkType("unknown link type %r" % (link_type,))
        if wanted != network:
            raise UnsupportedLinkType(
                "capture is link type %d, expected %d" % (network, wanted)
            )
    parse_phy = _parse_radiotap if network == LINKTYPE_RADIOTAP else _parse_prism

    frames: list[Frame] = []
    skipped = 0
    base_sec: Optional[int] = None
    offset = 24
    while offset + 16 <= len(data):
        ts_sec, ts_usec, incl_len, orig_len = struct.unpack_from(endian + "IIII", data, offset)
        offset += 16
        if offset + incl_len > len(data):
            break  # truncated tail record
        record = data[offset : offset + incl_len]
        offset += incl_len

        if base_sec is None:
            base_sec = ts_sec
        timestamp = ts_from_sec_usec(ts_sec - base_sec, ts_usec)

        phy = parse_phy(record)
        if phy is None:
            skipped += 1
            continue
        mac = record[phy["header_len"] :]
        frame = _decode_mac(mac, phy, timestamp, orig_len - phy["header_len"])
        if frame is None:
            skipped += 1
            continue
        frames.append(frame)

    return CaptureFile(frames=frames, skipped=skipped, link_type=network)


def client_streams(frames: list[Frame]) -> dict[str, ClientTimeline]:
    """Split a frame sequence into per-client timelines.

    APs are the MACs seen transmitting beacons or probe responses; every
    other transmitter is a client.  Frames addressed to a client
    (probe responses, ACKs, deauthentications, data) join that client's
    timeline too, and beacons plus broadcast deauthentications are
    replicated to all clients so window evidence is complete.

    Input must be sorted by timestamp; each output timeline then is too.
    """
    aps: set[str] = set()
    clients: set[str] = set()
    for frame in frames:
        if frame.subtype in (Subtype.BEACON, Subtype.PROBE_RESPONSE):
            aps.add(frame.transmitter)
    for frame in frames:
        tx = frame.transmitter
        if tx not in aps and tx not in (UNKNOWN_MAC, BROADCAST):
            clients.add(tx)
        rx = frame.receiver
        if (
            frame.subtype
            in (Subtype.PROBE_RESPONSE, Subtype.ACK, Subtype.DEAUTHENTICATION)
            or frame.frame_kind is FrameKind.DATA
        ) and rx not in aps and rx not in (UNKNOWN_MAC, BROADCAST):
            clients.add(rx)

    timelines = {mac: ClientTimeline(client_mac=mac) for mac in sorted(clients)}
    for frame in frames:
        if frame.subtype is Subtype.BEACON or (
            frame.subtype is Subtype.DEAUTHENTICATION and frame.receiver == BROADCAST
        ):
            for timeline in timelines.values():
                timeline.frames.append(frame)
            continue
        tx = frame.transmitter
        rx = frame.receiver
        if tx in timelines:
            timelines[tx].frames.append(frame)
        if (
            frame.subtype
            in (Subtype.PROBE_RESPONSE, Subtype.ACK, Subtype.DEAUTHENTICATION)
            or frame.frame_kind is FrameKind.DATA
        ) and rx in timelines and rx != tx:
            timelines[rx].frames.append(frame)
    return timelines
