"""Allow ``python -m sectorrelay`` to behave like the ``sectorrelay`` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
