"""Run every bundled scenario and diff against its recorded output.

Usage: python3 scripts/run_bundled_scenarios.py [--update]

With --update the recorded .expected files are rewritten from the current
run instead of being compared.
"""

import argparse
import io
import pathlib
import sys

from specseq import cli

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--update", action="store_true",
                        help="rewrite the .expected files from this run")
    args = parser.parse_args(argv)

    failures = 0
    for scn in sorted(SCENARIO_DIR.glob("*.scn")):
        buf = io.StringIO()
        code = cli.run(scn.read_text(), out=buf)
        got = buf.getvalue()
        expected_path = scn.with_suffix(".expected")
        if code != 0:
            print(f"{scn.name}: exit {code}")
            failures += 1
            continue
        if args.update:
            expected_path.write_text(got)
            print(f"{scn.name}: recorded {len(got.splitlines())} lines")
            continue
        if not expected_path.exists():
            print(f"{scn.name}: no recorded output, run with --update")
            failures += 1
            continue
        if got != expected_path.read_text():
            print(f"{scn.name}: MISMATCH against {expected_path.name}")
            failures += 1
        else:
            print(f"{scn.name}: ok ({len(got.splitlines())} lines)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
