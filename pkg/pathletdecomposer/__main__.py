#!/usr/bin/env python3
"""
Entry point for running PathletDecomposer as a module.
This allows the package to be executed with: python -m pathletdecomposer
"""

from .cli import main

if __name__ == "__main__":
    main()
