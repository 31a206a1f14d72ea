"""Command line runner.

``kvnlab run scenario.json [--suite NAME] [--out DIR] [--seed N]`` executes
a check suite and writes report.json plus CSV series into the output
directory. ``kvnlab schema`` prints the scenario schema. Exit codes:
0 all checks passed, 1 at least one check failed, 2 the scenario or the
environment configuration is invalid, 3 a computation failed to run.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .errors import KvnLabError, ScenarioError
from .report import SuiteReport, digest, write_report
from .scenario import SUITES, load_scenario, scenario_with_defaults, schema_text
from .suites import SuiteContext, run_checks, thread_count

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_SCENARIO = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kvnlab",
        description="checked simulations of mechanical similarity in doubled phase space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the checks named by a scenario file")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--suite", choices=SUITES, default=None,
                     help="override the suite named in the scenario")
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument("--seed", type=int, default=None,
                     help="override the sampling seed (default 0)")

    sub.add_parser("schema", help="print the scenario JSON schema")
    return parser


def cmd_run(args) -> int:
    try:
        raw = load_scenario(args.scenario)
        scenario = scenario_with_defaults(raw)
        thread_count()
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SCENARIO

    suite = args.suite or scenario["suite"]
    seed = args.seed if args.seed is not None else scenario["seed"]
    out_dir = args.out or scenario.get("out_dir") or "kvnlab-report"

    try:
        os.makedirs(out_dir, exist_ok=True)
        ctx = SuiteContext(scenario=scenario, out_dir=out_dir, seed=seed)
        start = time.perf_counter()
        records = run_checks(ctx, suite)
        report = SuiteReport(
            suite=suite,
            seed=seed,
            potential=scenario["potential"],
            scenario_digest=digest(raw),
            records=records,
            wall_time_s=round(time.perf_counter() - start, 6),
        )
        write_report(report, os.path.join(out_dir, "report.json"))
    except KvnLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001  surfaced as a runner failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for rec in sorted(records, key=lambda r: r.check_id):
        print(f"{'pass' if rec.passed else 'FAIL'}  {rec.check_id}")
    passed = sum(r.passed for r in records)
    print(f"{passed}/{len(records)} checks passed")
    print(f"report: {os.path.join(out_dir, 'report.json')}")
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        print(schema_text())
        return EXIT_OK
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
