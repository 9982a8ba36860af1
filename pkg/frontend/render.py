#!/usr/bin/env python3
"""Thin launcher: render.py <report> --fig {thresholds,fourier,winding} -o out.png"""

import sys

from dzl_plots.render import main

if __name__ == "__main__":
    sys.exit(main())
