"""Compatibility entrypoint for `python main.py <command>`."""

import sys

from irt_identify.main import main

__all__ = ["main"]


if __name__ == "__main__":
    sys.exit(main())
