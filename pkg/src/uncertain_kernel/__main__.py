"""Allow ``python -m uncertain_kernel``."""

import sys

from .cli import main

sys.exit(main())
