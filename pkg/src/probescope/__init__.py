"""probescope: offline 802.11 capture analysis and scan-policy simulation.

The package splits sniffer captures into per-client probe-request
episodes, infers why each scan happened, quantifies probe-traffic impact
(rates, sizes, arrival gaps, airtime, redundancy, goodput), and compares
scanning policies on deterministic synthetic traces.
"""

from .capture import (
    ClientTimeline,
    Frame,
    FrameKind,
    MalformedCapture,
    Subtype,
    UnsupportedLinkType,
    client_streams,
    parse_capture,
)
from .causes import (
    AssociationState,
    CauseLabel,
    Thresholds,
    cause_distribution,
    classify_episodes,
    infer_cause,
    update_association,
)
from .metrics import (
    AirtimeModel,
    MetricSeries,
    airtime_utilization,
    channel_utilization,
    goodput,
    ifat,
    redundant_probe_traffic,
    size_and_rate_distributions,
    traffic_rates,
)
from .policy import PolicyState, ScanDecision, baseline_decide, modified_decide
from .segmentation import ScanEpisode, Window, segment_episodes, windows
from .simulator import (
    ComparisonReport,
    GroundTruth,
    InvalidSpec,
    ScenarioSpec,
    generate,
    run_comparison,
    write_capture,
)

__version__ = "0.1.0"
