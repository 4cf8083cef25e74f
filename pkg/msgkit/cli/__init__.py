"""Command-line surface."""

from msgkit.cli.main import EXIT_INVALID, EXIT_IO, EXIT_OK, build_parser, main

__all__ = ["EXIT_INVALID", "EXIT_IO", "EXIT_OK", "build_parser", "main"]
