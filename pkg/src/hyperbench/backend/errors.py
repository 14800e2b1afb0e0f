"""Exception hierarchy shared by every hyperbench module.

Axiom failures are data (see :mod:`hyperbench.backend.report`); exceptions are
reserved for malformed input, exhausted resources and broken internal checks.
"""


class HyperbenchError(Exception):
    """Root of all hyperbench errors."""

    exit_code = 1


class StructureError(HyperbenchError):
    """Malformed input or an unmet hypothesis of an operation."""

    exit_code = 3


class CapExceededError(HyperbenchError):
    """An enumeration would visit more candidates than the configured cap.

    Attributes:
      limit: The configured cap.
      required: The size of the search space that was requested.
    """

    exit_code = 4

    def __init__(self, limit: int, required: int, what: str = "enumeration") -> None:
        """Store the limit and the requested size."""
        super().__init__(f"{what} needs {required} candidates, cap is {limit}")
        self.limit = limit
        self.required = required


class UndeterminedError(HyperbenchError):
    """A bounded closure did not saturate, so the answer is unknown at this bound."""

    exit_code = 2

    def __init__(self, bound: int, what: str = "closure") -> None:
        """Store the bound the closure was computed at."""
        super().__init__(f"{what} is undetermined at bound L={bound}")
        self.bound = bound


class ConsistencyError(HyperbenchError):
    """A cross-check that holds on verified input failed."""

    exit_code = 1
