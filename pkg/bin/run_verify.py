#!/usr/bin/env python3
import sys

from pntap.cli import dispatch

if __name__ == "__main__":
    # extra flags pass through, e.g. --full --out summaries/verify.json
    sys.exit(dispatch(["verify", *sys.argv[1:]]))
