"""Command-line front end: analyze captures, simulate and compare policies.

Reports are reproducible: the same inputs and options yield byte-identical
output, and every analysis report embeds the thresholds it used plus a
digest of its input.  Exit codes: 0 success, 1 unreadable/invalid input
capture, 2 invalid configuration (thresholds or scenario).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from statistics import fmean, median
from typing import Optional

from . import __version__
from .capture import (
    CaptureError,
    Frame,
    Subtype,
    client_streams,
    parse_capture,
)
from .causes import (
    CauseLabel,
    DISPLAY_NAMES,
    EmptyInput,
    InvalidThresholds,
    Thresholds,
    cause_distribution,
    classify_episodes,
)
from .metrics import (
    EmptyClass,
    MetricSeries,
    TooFewFrames,
    airtime_utilization,
    channel_utilization,
    goodput,
    ifat,
    redundant_probe_traffic,
    size_and_rate_distributions,
    traffic_rates,
)
from .segmentation import segment_episodes
from .simulator import (
    GroundTruth,
    InvalidSpec,
    IOFailure,
    ScenarioSpec,
    generate,
    run_comparison,
    write_capture,
)

_ENV_PREFIX = "PROBESCOPE_"


def _series_doc(series: MetricSeries) -> dict:
    return {
        "metric": series.metric_name,
        "bin_width": series.bin_width,
        "bins": [[t, v] for t, v in series.bins],
    }


def _ifat_summary(frames: list[Frame], traffic_class: str) -> Optional[dict]:
    try:
        gaps = ifat(frames, traffic_class)
    except TooFewFrames:
        return None
    return {
        "count": len(gaps),
        "min_s": min(gaps),
        "median_s": median(gaps),
        "mean_s": fmean(gaps),
        "max_s": max(gaps),
    }


def _distribution_doc(frames: list[Frame], traffic_class: str) -> Optional[dict]:
    try:
        sizes, rates = size_and_rate_distributions(frames, traffic_class)
    except EmptyClass:
        return None
    return {
        "sizes_pct": {str(k): v for k, v in sizes.items()},
        "rates_mbps_pct": {str(k): v for k, v in rates.items()},
    }


def cmd_analyze(
    capture_path: str,
    thresholds_path: Optional[str] = None,
    out_format: str = "json",
    bin_s: float = 60.0,
    gap_s: Optional[float] = None,
    out_dir: Optional[str] = None,
) -> dict:
    """Full pipeline: parse, segment, infer causes, compute all metrics."""
    thresholds = Thresholds.from_file(thresholds_path) if thresholds_path else Thresholds()
    if gap_s is not None:
        thresholds = Thresholds.from_mapping({**thresholds.to_dict(), "gap_threshold_s": gap_s})

    with open(capture_path, "rb") as fh:
        raw = fh.read()
    capture = parse_capture(raw)
    frames = capture.frames

    timelines = client_streams(frames)
    classified = {mac: classify_episodes(tl, thresholds) for mac, tl in timelines.items()}
    labels = [ce.label for results in classified.values() for ce in results]

    if labels:
        distribution = cause_distribution(labels)
        causes_doc = {
            "episodes": len(labels),
            "distribution_pct": {
                DISPLAY_NAMES[cause]: distribution[cause] for cause in CauseLabel
            },
            "per_client_episodes": {
                mac: len(results) for mac, results in sorted(classified.items()) if results
            },
        }
    else:
        causes_doc = {"episodes": 0, "note": "no episodes", "distribution_pct": None}

    rpt_per_client = {}
    rpt_redundant = 0
    rpt_total = 0
    for mac, tl in sorted(timelines.items()):
        episodes = segment_episodes(tl, thresholds.gap_threshold_s)
        redundant, total = redundant_probe_traffic(episodes)
        rpt_redundant += redundant
        rpt_total += total
        if total:
            rpt_per_client[mac] = {"redundant": redundant, "total": total}

    beacons = [
        f
        for f in frames
        if f.subtype is Subtype.BEACON and f.channel_utilization_raw is not None
    ]
    rates_doc = {name: _series_doc(s) for name, s in traffic_rates(frames, bin_s).items()}
    airtime_doc = {
        cls: _series_doc(airtime_utilization(frames, cls, bin_s))
        for cls in ("probe", "data", "other", "total")
    }

    report = {
        "tool": {"name": "probescope", "version": __version__},
        "input": {
            "path": os.path.basename(capture_path),
            "sha256": hashlib.sha256(raw).hexdigest(),
            "link_type": capture.link_type,
            "frames": len(frames),
            "skipped_records": capture.skipped,
            "clients": len(timelines),
        },
        "parameters": {"bin_s": bin_s, "format": out_format},
        "thresholds": thresholds.to_dict(),
        "causes": causes_doc,
        "metrics": {
            "traffic_frames_per_minute": rates_doc,
            "probe_request_distribution": _distribution_doc(frames, "probe-request"),
            "probe_response_distribution": _distribution_doc(frames, "probe-response"),
            "ifat": {
                cls: _ifat_summary(frames, cls)
                for cls in ("probe-request", "probe-response", "data")
            },
            "airtime_pct": airtime_doc,
            "channel_utilization_pct": _series_doc(channel_utilization(beacons, bin_s))
            if beacons
            else None,
            "goodput_Bps": _series_doc(goodput(frames, bin_s)),
        },
        "rpt": {
            "redundant": rpt_redundant,
            "total": rpt_total,
            "redundant_pct": 100.0 * rpt_redundant / rpt_total if rpt_total else None,
            "per_client": rpt_per_client,
        },
    }

    if out_dir:
        _write_report(report, out_dir, out_format)
    return report


def _write_csv_series(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("bin_start,value\n")
        for t, v in doc["bins"]:
            fh.write("%r,%r\n" % (t, v))


def _write_report(report: dict, out_dir: str, out_format: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    if out_format != "csv":
        return
    series_dir = os.path.join(out_dir, "series")
    os.makedirs(series_dir, exist_ok=True)
    metrics = report.get("metrics", {})
    flat: dict[str, dict] = {}
    for name, entry in metrics.get("traffic_frames_per_minute", {}).items():
        flat["rate_%s" % name] = entry
    for name, entry in metrics.get("airtime_pct", {}).items():
        flat["airtime_%s" % name] = entry
    if metrics.get("channel_utilization_pct"):
        flat["channel_utilization"] = metrics["channel_utilization_pct"]
    if metrics.get("goodput_Bps"):
        flat["goodput"] = metrics["goodput_Bps"]
    for name, entry in flat.items():
        _write_csv_series(entry, os.path.join(series_dir, "%s.csv" % name))


def cmd_simulate(scenario_path: str, out_dir: str, seed: Optional[int] = None) -> dict:
    """Generate a scenario's trace and ground truth onto disk."""
    spec = ScenarioSpec.from_file(scenario_path)
    if seed is not None:
        spec = type(spec)(**{**_spec_kwargs(spec), "seed": seed})
    trace, truth = generate(spec)
    os.makedirs(out_dir, exist_ok=True)
    pcap_path = os.path.join(out_dir, "trace.pcap")
    truth_path = os.path.join(out_dir, "truth.json")
    write_capture(trace, pcap_path)
    truth_doc = _truth_doc(spec, truth)
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump(truth_doc, fh, indent=2)
        fh.write("\n")
    return {"trace": pcap_path, "truth": truth_path, "frames": len(trace)}


def _spec_kwargs(spec: ScenarioSpec) -> dict:
    return {name: getattr(spec, name) for name in spec.__dataclass_fields__}


def _truth_doc(spec: ScenarioSpec, truth: GroundTruth) -> dict:
    return {
        "seed": spec.seed,
        "duration": spec.duration,
        "entries": [
            {"client": e.client, "episode_start": e.episode_start, "cause": e.label.value}
            for e in truth.entries
        ],
    }


def _cdf_points(samples: list[float]) -> list[list[float]]:
    ordered = sorted(samples)
    n = len(ordered)
    return [[v, (i + 1) / n] for i, v in enumerate(ordered)]


def cmd_compare(
    scenario_path: str,
    out_format: str = "json",
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
) -> dict:
    """Replay a scenario through both policies and report the comparison."""
    spec = ScenarioSpec.from_file(scenario_path)
    if seed is not None:
        spec = type(spec)(**{**_spec_kwargs(spec), "seed": seed})
    report = run_comparison(spec)

    policies = {}
    for policy in ("baseline", "modified"):
        ttc = report.ttc_samples(policy)
        persistence = report.persistence_samples(policy)
        hours = range(len(max((c.preqs_per_hour for c in report.clients), key=len)))
        policies[policy] = {
            "total_preqs": report.total_preqs(policy),
            "preqs_per_hour": [report.preqs_in_hour(policy, h) for h in hours],
            "ttc_median_s": median(ttc) if ttc else None,
            "persistence_median_s": median(persistence) if persistence else None,
            "ttc_cdf": _cdf_points(ttc),
            "persistence_cdf": _cdf_points(persistence),
        }

    doc = {
        "tool": {"name": "probescope", "version": __version__},
        "scenario": {"path": os.path.basename(scenario_path), "seed": spec.seed},
        "duration_s": spec.duration,
        "policies": policies,
        "per_client": [
            {
                "mac": c.mac,
                "policy": c.policy,
                "preqs_per_hour": c.preqs_per_hour,
                "ttc_s": c.ttc,
                "persistence_s": c.persistence,
                "passive_scans": c.passive_scans,
            }
            for c in report.clients
        ],
    }
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "comparison.json"), "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        if out_format == "csv":
            for policy in ("baseline", "modified"):
                path = os.path.join(out_dir, "preqs_per_hour_%s.csv" % policy)
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write("hour,preqs\n")
                    for hour, count in enumerate(policies[policy]["preqs_per_hour"]):
                        fh.write("%d,%d\n" % (hour, count))
    return doc


def _env(name: str) -> Optional[str]:
    return os.environ.get(_ENV_PREFIX + name)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probescope",
        description="Offline 802.11 capture analysis and scan-policy simulation.",
    )
    parser.add_argument("--version", action="version", version="probescope %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a sniffer capture")
    analyze.add_argument("capture", help="pcap file (radiotap or prism link type)")
    analyze.add_argument("--thresholds", default=_env("THRESHOLDS"), help="JSON thresholds file")
    analyze.add_argument(
        "--format",
        choices=("json", "csv"),
        default=_env("FORMAT") or "json",
        dest="out_format",
    )
    analyze.add_argument("--bin", type=float, default=float(_env("BIN") or 60.0))
    analyze.add_argument("--gap", type=float, default=float(_env("GAP")) if _env("GAP") else None)
    analyze.add_argument("--out", default=_env("OUT"), help="output directory")

    simulate = sub.add_parser("simulate", help="generate a synthetic trace")
    simulate.add_argument("scenario", help="scenario JSON file")
    simulate.add_argument("--out", default=_env("OUT"), required=_env("OUT") is None)
    simulate.add_argument("--seed", type=int, default=int(_env("SEED")) if _env("SEED") else None)

    compare = sub.add_parser("compare", help="compare scan policies on a scenario")
    compare.add_argument("scenario", help="scenario JSON file")
    compare.add_argument(
        "--format",
        choices=("json", "csv"),
        default=_env("FORMAT") or "json",
        dest="out_format",
    )
    compare.add_argument("--out", default=_env("OUT"))
    compare.add_argument("--seed", type=int, default=int(_env("SEED")) if _env("SEED") else None)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            report = cmd_analyze(
                args.capture,
                thresholds_path=args.thresholds,
                out_format=args.out_format,
                bin_s=args.bin,
                gap_s=args.gap,
                out_dir=args.out,
            )
            if not args.out:
                json.dump(report, sys.stdout, indent=2)
                sys.stdout.write("\n")
        elif args.command == "simulate":
            result = cmd_simulate(args.scenario, args.out, seed=args.seed)
            json.dump(result, sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            doc = cmd_compare(
                args.scenario, out_format=args.out_format, out_dir=args.out, seed=args.seed
            )
            if not args.out:
                json.dump(doc, sys.stdout, indent=2)
                sys.stdout.write("\n")
    except (CaptureError, FileNotFoundError, IsADirectoryError, PermissionError, IOFailure) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (InvalidThresholds, InvalidSpec, EmptyInput) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
