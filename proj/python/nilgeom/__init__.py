"""Exact symbolic exterior calculus on six-dimensional nilpotent Lie algebras.

The heavy lifting happens in the compiled extension ``nilgeom._core``; this
package re-exports its surface and adds a small ``main`` entry point that
mirrors the command-line binary.
"""

from ._core import (
    NilgeomError,
    acceptance_ok,
    acceptance_report,
    canonical_model,
    models_equal,
    run,
)

__all__ = [
    "NilgeomError",
    "acceptance_ok",
    "acceptance_report",
    "canonical_model",
    "main",
    "models_equal",
    "run",
]

__version__ = "0.1.0"


def main(argv=None):
    """Entry point equivalent to the nilgeom binary; returns the exit status."""
    import sys

    status, text = run(list(sys.argv[1:] if argv is None else argv))
    stream = sys.stderr if status == 2 else sys.stdout
    stream.write(text)
    return status
