"""
sinrmap command-line entry point.
Runs the Typer application and exits with its status code.
"""
import sys

from sinrmap.cli import run

if __name__ == "__main__":
    sys.exit(run())
