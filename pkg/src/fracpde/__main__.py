"""Module entry point: ``python -m fracpde``."""

from .cli import main

if __name__ == "__main__":
    main()
