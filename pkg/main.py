#!/usr/bin/env python3
"""
msgkit - Entry point for the command line.

Usage:
    python main.py simulate --out runs/s0
    python main.py evaluate --dir runs --out summary.json
"""

import sys

from msgkit.cli import main

if __name__ == "__main__":
    sys.exit(main())
