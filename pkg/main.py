#!/usr/bin/env python3
"""mimiclearn CLI entry point."""

from mimiclearn.cli import main

if __name__ == "__main__":
    main()
