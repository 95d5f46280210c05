# hermclust/core/errors.py
from __future__ import annotations

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_UNIMPLEMENTED = 4
EXIT_DEGENERATE = 5


class HermclustError(Exception):
    """Base error; carries the exit code the CLI should terminate with."""

    exit_code: int = EXIT_USAGE

    def __init__(self, detail: str = "", *, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return f"{self.__class__.__name__}: {self.detail}" if self.detail else self.__class__.__name__


# ---- input / precondition failures (exit 2) ----

class IndexOutOfRange(HermclustError):
    pass

class SelfLoop(HermclustError):
    pass

class NegativeWeight(HermclustError):
    pass

class SizeMismatch(HermclustError):
    pass

class OverlappingSets(HermclustError):
    pass

class ReciprocalEdge(HermclustError):
    pass

class WeightedGraph(HermclustError):
    pass

class BadParams(HermclustError):
    pass

class MetaMismatch(HermclustError):
    pass

class TooLarge(HermclustError):
    pass

class NotHermitian(HermclustError):
    pass

class TooFewPoints(HermclustError):
    pass

class GraphTooSmall(HermclustError):
    pass


# ---- algorithmic degeneracy (exit 5) ----

class EmptyCluster(HermclustError):
    exit_code = EXIT_DEGENERATE

class UnsplittableCluster(HermclustError):
    exit_code = EXIT_DEGENERATE

class DegenerateCore(HermclustError):
    exit_code = EXIT_DEGENERATE


# ---- files (exit 3) ----

class FileFormatError(HermclustError):
    exit_code = EXIT_IO


# ---- methods named but not shipped (exit 4) ----

class UnimplementedMethod(HermclustError):
    exit_code = EXIT_UNIMPLEMENTED
