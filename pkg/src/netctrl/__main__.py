"""Allow `python -m netctrl` alongside the netctrl console script."""

import sys

from .cli import main

sys.exit(main())
