"""
Allow ``python -m topoman``.
"""

import sys

from topoman.cli import main

sys.exit(main())
