#!/usr/bin/env python3
"""Run the bundled experiment suite and print the report.

Thin wrapper over ``prooflab suite``; accepts the same --format/--output
switches, so ``python scripts/run_suite.py --format json`` dumps the whole
report as one JSON object.
"""

import sys

from prooflab.cli import main

if __name__ == "__main__":
    sys.exit(main(["suite"] + sys.argv[1:]))
