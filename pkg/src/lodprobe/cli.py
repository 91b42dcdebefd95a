"""Command-line entry points: assess, sort, compare.

One pass over the input feeds every configured metric processor; each
processor's elapsed time is accumulated around its own consume/finalize
calls so exact-vs-estimate comparisons reflect metric work, not shared
parsing. Reports are JSON, written atomically (temp file + rename), and
echo the full configuration including the seed so any run can be
reproduced from its report alone.

Exit codes: 0 success, 2 success but the input had parse errors, 1 fatal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .deref import LiveResolver, MockResolver
from .extsort import sort_by_subject
from .metrics import (
    ClusteringMetric,
    ConcisenessEstimate,
    ConcisenessExact,
    DerefEstimate,
    DerefExact,
    ExtLinksEstimate,
    ExtLinksExact,
    SortOrderViolation,
)
from .ntriples import NTriplesReader

SEED_ENV_VAR = "LODPROBE_SEED"

METRIC_ALIASES = {
    "dereferenceability": "dereferenceability",
    "deref": "dereferenceability",
    "external-links": "external-links",
    "ext-links": "external-links",
    "ext_links": "external-links",
    "extensional-conciseness": "extensional-conciseness",
    "extcon": "extensional-conciseness",
    "conciseness": "extensional-conciseness",
    "clustering-coefficient": "clustering-coefficient",
    "cc": "clustering-coefficient",
}

# Defaults follow the best-performing published settings (P3-style).
DEFAULTS = {
    "external-links": {"reservoir_capacity": 20000},
    "extensional-conciseness": {"total_bits": 100000, "fpr_threshold": 0.001},
    "dereferenceability": {"global_capacity": 50, "per_pld_capacity": 10000},
    "clustering-coefficient": {"mixing_multiplier": 1.0, "min_steps": 3},
}


class UsageError(ValueError):
    pass


def _normalise_metric_entry(entry) -> dict:
    """Accept `name[:variant]` strings or {name, variant, parameters} maps
    (the config-file form, which allows parameter sweeps: the same metric
    may appear several times with different parameters)."""
    if isinstance(entry, str):
        name, _, variant = entry.partition(":")
        parameters = {}
    else:
        name = entry.get("name", "")
        variant = entry.get("variant", "")
        parameters = dict(entry.get("parameters", {}))
    canonical = METRIC_ALIASES.get(name.strip().lower())
    if canonical is None:
        raise UsageError(f"unknown metric {name!r} (choose from: "
                         f"{', '.join(sorted(set(METRIC_ALIASES.values())))})")
    variant = (variant or "estimate").strip().lower()
    if variant not in ("exact", "estimate"):
        raise UsageError(f"variant must be exact or estimate, not {variant!r}")
    return {"name": canonical, "variant": variant, "parameters": parameters}


def _parse_params(pairs: list[str]) -> dict[str, str]:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        params[key.strip()] = value.strip()
    return params


def _metric_params(metric: str, entry_params: dict, cli_params: dict[str, str]) -> dict:
    """Defaults, then the entry's own parameters, then CLI --param overrides
    (`metric.key` beats bare `key`)."""
    merged = dict(DEFAULTS[metric])
    for key, default in DEFAULTS[metric].items():
        if key in entry_params:
            merged[key] = type(default)(entry_params[key])
        for candidate in (f"{metric}.{key}", key):
            if candidate in cli_params:
                merged[key] = type(default)(cli_params[candidate])
                break
    return merged


def _build_resolver(spec: str | None):
    if spec is None or spec == "live":
        return LiveResolver()
    if spec.startswith("mock:"):
        return MockResolver.from_file(spec[len("mock:"):])
    raise UsageError(f"--resolver must be 'live' or 'mock:<script>', got {spec!r}")


def _build_processor(metric: str, variant: str, p: dict, seed: int, resolver_spec):
    if metric == "external-links":
        return (ExtLinksEstimate(p["reservoir_capacity"], seed)
                if variant == "estimate" else ExtLinksExact())
    if metric == "extensional-conciseness":
        return (ConcisenessEstimate(p["total_bits"], p["fpr_threshold"], seed)
                if variant == "estimate" else ConcisenessExact())
    if metric == "dereferenceability":
        resolver = _build_resolver(resolver_spec)
        return (DerefEstimate(resolver, p["global_capacity"], p["per_pld_capacity"], seed)
                if variant == "estimate" else DerefExact(resolver))
    return ClusteringMetric(
        variant == "estimate", p["mixing_multiplier"], p["min_steps"], seed
    )


def _stream_into(reader: NTriplesReader, timed_processors: list) -> None:
    """Single pass; per-processor elapsed accumulates around its own calls."""
    clock = time.perf_counter
    for triple in reader:
        for entry in timed_processors:
            t0 = clock()
            entry["processor"].consume(triple)
            entry["elapsed"] += clock() - t0


def _finalize(entry) -> dict:
    clock = time.perf_counter
    t0 = clock()
    result = entry["processor"].finalize()
    entry["elapsed"] += clock() - t0
    return result.with_elapsed(entry["elapsed"]).as_dict()


def _config_echo(args, seed: int, timed: list) -> dict:
    return {
        "input": str(args.input),
        "seed": seed,
        "resolver": args.resolver,
        "output": str(args.out) if args.out else None,
        "metrics": [
            {"name": e["name"], "variant": e["variant"], "parameters": e["parameters"]}
            for e in timed
        ],
    }


def _write_report(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path is None:
        return
    out = Path(out_path)
    fd, tmp = tempfile.mkstemp(prefix=".lodprobe-report-", dir=out.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_seed(args, config_file: dict) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    if "seed" in config_file:
        return int(config_file["seed"])
    return int.from_bytes(os.urandom(8), "big") >> 1


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    return json.loads(Path(path).read_text("utf-8"))


def _merge_config(args, config_file: dict) -> None:
    """Config file fills in whatever the flags left unset; flags win."""
    if not args.input and config_file.get("input"):
        args.input = config_file["input"]
    if not args.metric and config_file.get("metrics"):
        args.metric = list(config_file["metrics"])
    if args.resolver is None and config_file.get("resolver"):
        args.resolver = config_file["resolver"]
    if args.out is None and config_file.get("output"):
        args.out = config_file["output"]
    for key, value in config_file.get("parameters", {}).items():
        pair = f"{key}={value}"
        if not any(p.startswith(f"{key}=") for p in args.param):
            args.param.append(pair)


def _cmd_assess_or_compare(args, compare: bool) -> int:
    config_file = _load_config_file(args.config)
    _merge_config(args, config_file)
    if not args.input:
        raise UsageError("--input is required")
    if not Path(args.input).exists():
        raise UsageError(f"input not found: {args.input}")
    if not args.metric:
        raise UsageError("at least one --metric is required")

    seed = _resolve_seed(args, config_file)
    cli_params = _parse_params(args.param)
    entries = [_normalise_metric_entry(m) for m in args.metric]

    if compare:
        expanded = []
        for entry in entries:
            for variant in ("exact", "estimate"):
                expanded.append({**entry, "variant": variant})
        entries = expanded

    timed = []
    for entry in entries:
        merged = _metric_params(entry["name"], entry["parameters"], cli_params)
        timed.append({
            "name": entry["name"],
            "variant": entry["variant"],
            "parameters": merged,
            "processor": _build_processor(
                entry["name"], entry["variant"], merged, seed, args.resolver
            ),
            "elapsed": 0.0,
        })

    reader = NTriplesReader(args.input)
    try:
        _stream_into(reader, timed)
        results = [_finalize(entry) for entry in timed]
    except SortOrderViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: lodprobe sort --input <file> --output <sorted-file>", file=sys.stderr)
        return 1

    deviations = None
    if compare:
        # Each configured entry expanded to (exact, estimate) at rows 2k, 2k+1.
        deviations = []
        for k in range(0, len(timed), 2):
            exact, estimate = results[k], results[k + 1]
            deviations.append({
                "metric": timed[k]["name"],
                "exact_value": exact["value"],
                "estimate_value": estimate["value"],
                "abs_delta": abs(exact["value"] - estimate["value"]),
                "speedup": (
                    exact["elapsed_seconds"] / estimate["elapsed_seconds"]
                    if estimate["elapsed_seconds"] > 0 else 0.0
                ),
            })

    report = {
        "tool": {"name": "lodprobe", "version": __version__},
        "config": _config_echo(args, seed, timed),
        "dataset": {
            **reader.summary.as_dict(),
            "first_failures": [
                {
                    "line_number": f.line_number,
                    "byte_offset": f.byte_offset,
                    "reason": f.reason,
                    "line": f.line,
                }
                for f in reader.failures[:10]
            ],
        },
        "results": results,
        "deviations": deviations,
    }
    _write_report(report, args.out)

    print(f"lodprobe {__version__} · {args.input}")
    print(
        f"  triples {reader.summary.triples_parsed}"
        f" · parse errors {reader.summary.parse_errors}"
        f" · seed {seed}"
    )
    for r in results:
        kind = "estimate" if r["estimated"] else "exact"
        print(f"  {r['metric']:<28} {kind:<9} value={r['value']:.6f}"
              f"  ({r['elapsed_seconds']:.3f}s)")
    if deviations:
        for d in deviations:
            print(f"  Δ {d['metric']:<26} |exact-estimate|={d['abs_delta']:.6f}"
                  f"  speedup={d['speedup']:.2f}x")
    if args.out:
        print(f"  report written to {args.out}")

    return 2 if reader.summary.parse_errors else 0


def _cmd_sort(args) -> int:
    if not Path(args.input).exists():
        print(f"error: input not found: {args.input}", file=sys.stderr)
        return 1
    summary = sort_by_subject(args.input, args.output, args.memory)
    print(
        f"sorted {summary.lines} lines in {summary.chunks or 1} chunk(s)"
        f" -> {args.output}"
    )
    if summary.malformed_lines:
        print(f"warning: {summary.malformed_lines} line(s) without a parseable "
              f"subject were passed through", file=sys.stderr)
    if args.out:
        _write_report({"tool": {"name": "lodprobe", "version": __version__},
                       "sort": summary.as_dict()}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lodprobe",
        description="Streaming RDF dataset quality assessment, exact or approximate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_assess_args(p):
        p.add_argument("--input", help="N-Triples file to assess")
        p.add_argument("--metric", action="append", default=[],
                       metavar="NAME[:exact|:estimate]",
                       help="metric to run; repeatable")
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="metric parameter override; repeatable")
        p.add_argument("--seed", type=int, default=None,
                       help=f"run seed (beats ${SEED_ENV_VAR} and config file)")
        p.add_argument("--resolver", default=None, metavar="live|mock:SCRIPT",
                       help="resolver for dereferenceability (default live)")
        p.add_argument("--out", default=None, help="write the JSON report here")
        p.add_argument("--config", default=None, help="JSON config file; flags win")

    p_assess = sub.add_parser("assess", help="run metrics over a dataset")
    add_assess_args(p_assess)

    p_compare = sub.add_parser(
        "compare", help="run exact and estimate variants, report deviations"
    )
    add_assess_args(p_compare)

    p_sort = sub.add_parser("sort", help="subject-sort an N-Triples file")
    p_sort.add_argument("--input", required=True)
    p_sort.add_argument("--output", required=True)
    p_sort.add_argument("--memory", type=int, default=64 * 1024 * 1024,
                        help="chunk memory budget in bytes")
    p_sort.add_argument("--out", default=None,
                        help="also write the sort summary as JSON here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sort":
            return _cmd_sort(args)
        return _cmd_assess_or_compare(args, compare=args.command == "compare")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
