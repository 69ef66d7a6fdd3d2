"""Command line front end: run scenario configs and the packaged suite.

Exit codes: 0 every counted check passed, 1 at least one counted check
failed, 2 configuration or runtime error, 3 every executed check was
inapplicable.  Checks a scenario lists under ``report_only`` are executed
and reported but never counted toward the exit code.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from .evolution import ToleranceNotMetError
from .scenario import (
    ConfigError,
    RunOutput,
    ScenarioConfig,
    emit_plot_script,
    emit_report_json,
    emit_trace_csv,
    load_config,
    run_scenario,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2
EXIT_ALL_INAPPLICABLE = 3


def _collect_paths(targets: list[str]) -> list[Path]:
    paths: list[Path] = []
    for target in targets:
        p = Path(target)
        if p.is_dir():
            found = sorted(p.glob("*.json"))
            if not found:
                raise ConfigError("<cli>", f"directory {p} contains no *.json configs")
            paths.extend(found)
        elif p.is_file():
            paths.append(p)
        else:
            raise ConfigError("<cli>", f"no such config file or directory: {p}")
    return paths


def _load_packaged_configs() -> list[ScenarioConfig]:
    suite = resources.files("parafreq.suite")
    configs = []
    for entry in sorted(suite.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            import json as _json

            from .scenario import parse_config

            doc = _json.loads(entry.read_text())
            configs.append(parse_config(doc, fallback_id=entry.name[: -len(".json")]))
    if not configs:
        raise ConfigError("<suite>", "no packaged scenario configs found")
    return configs


def _apply_overrides(config: ScenarioConfig, resolution: int | None) -> ScenarioConfig:
    if resolution is None:
        return config
    return dataclasses.replace(config, resolution=resolution)


def _execute(configs: list[ScenarioConfig], out_dir: Path) -> list[RunOutput]:
    seen: set[str] = set()
    for config in configs:
        if config.scenario_id in seen:
            raise ConfigError("scenario_id", f"duplicate scenario id {config.scenario_id!r} in batch")
        seen.add(config.scenario_id)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = min(8, len(configs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outputs = list(pool.map(run_scenario, configs))
    # deterministic emission order regardless of worker scheduling
    for output in sorted(outputs, key=lambda o: o.config.scenario_id):
        sid = output.config.scenario_id
        emit_trace_csv(output, out_dir / f"{sid}.trace.csv")
        emit_report_json(output, out_dir / f"{sid}.report.json")
        emit_plot_script(output, out_dir / f"{sid}.plot.py")
    return outputs


def _summarize(outputs: list[RunOutput], quiet: bool) -> int:
    lines: list[str] = []
    counts = {"pass": 0, "fail": 0, "inapplicable": 0}
    counted_failures = 0
    for output in sorted(outputs, key=lambda o: o.config.scenario_id):
        sid = output.config.scenario_id
        for report in output.reports:
            counts[report.status] += 1
            tag = " [report-only]" if report.check_name in output.config.report_only else ""
            counted = report.status == "fail" and not tag
            if counted:
                counted_failures += 1
            if quiet and report.status != "fail":
                continue
            margin = "n/a" if report.min_margin is None else f"{report.min_margin:.6e}"
            lines.append(
                f"{sid:32s} {report.check_name:26s} {report.status.upper():12s} "
                f"min_margin={margin} tol={report.tolerance:.2e}{tag}"
            )
    total = sum(counts.values())
    if counted_failures:
        code = EXIT_FAIL
    elif counts["inapplicable"] == total:
        code = EXIT_ALL_INAPPLICABLE
    else:
        code = EXIT_PASS
    lines.append(
        f"{len(outputs)} scenario(s), {total} check(s): "
        f"{counts['pass']} passed, {counts['fail']} failed "
        f"({counted_failures} counted), {counts['inapplicable']} inapplicable"
    )
    print("\n".join(lines))
    return code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="parafreq",
        description="Run frequency-monotonicity verification scenarios and emit traces, reports, and plot scripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenario config file(s) or a directory of configs")
    run_p.add_argument("targets", nargs="+", help="config .json file(s) or directories")
    run_p.add_argument("--out", default="parafreq-out", help="output directory (default: parafreq-out)")
    run_p.add_argument("--resolution", type=int, default=None, help="override quadrature resolution")
    run_p.add_argument("--quiet", action="store_true", help="print only failures and the summary line")

    suite_p = sub.add_parser("paper-suite", help="run the packaged scenario suite")
    suite_p.add_argument("--out", default="parafreq-out", help="output directory (default: parafreq-out)")
    suite_p.add_argument("--resolution", type=int, default=None, help="override quadrature resolution")
    suite_p.add_argument("--quiet", action="store_true", help="print only failures and the summary line")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            configs = [load_config(p) for p in _collect_paths(args.targets)]
        else:
            configs = _load_packaged_configs()
        configs = [_apply_overrides(c, args.resolution) for c in configs]
        outputs = _execute(configs, Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ToleranceNotMetError, OSError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return _summarize(outputs, args.quiet)


if __name__ == "__main__":
    raise SystemExit(main())
