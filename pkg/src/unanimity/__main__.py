"""Entry point for ``python -m unanimity``."""

import sys

from unanimity.cli import main

sys.exit(main())
