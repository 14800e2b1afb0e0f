"""Run settings shared by every CLI command.

Values come from command-line flags only; there is no environment layer.
"""

from dataclasses import dataclass, replace
from pathlib import Path

from hyperbench.backend.errors import StructureError
from hyperbench.utils.logger import get_logger

logger = get_logger()

OUTPUT_FORMATS = ("json", "toml")


@dataclass(frozen=True)
class Settings:
    """Bounds, caps and output options.

    Attributes:
      bound: Term-length bound ``L`` of tensor closures.
      cap: Largest search space any enumeration may visit.
      census_max_order: Largest carrier a census may enumerate.
      output_format: ``json`` or ``toml`` for emitted structures.
      includes: Extra structure files whose sections fill missing references.
      verbose: Whether DEBUG messages reach the console.
    """

    bound: int = 4
    cap: int = 1 << 16
    census_max_order: int = 4
    output_format: str = "json"
    includes: tuple[Path, ...] = ()
    verbose: bool = False

    def __post_init__(self) -> None:
        """Reject values no command can work with."""
        if self.bound < 1:
            logger.error(f"settings: bound must be positive, got {self.bound}")
            raise StructureError(f"settings: bound must be positive, got {self.bound}")
        if self.cap < 1:
            logger.error(f"settings: cap must be positive, got {self.cap}")
            raise StructureError(f"settings: cap must be positive, got {self.cap}")
        if self.output_format not in OUTPUT_FORMATS:
            logger.error(f"settings: unknown format {self.output_format!r}")
            raise StructureError(f"settings: unknown format {self.output_format!r}")

    def with_bound(self, bound: int | None) -> "Settings":
        """Copy with another bound, or this instance when ``bound`` is ``None``."""
        return self if bound is None else replace(self, bound=bound)

    def to_dict(self) -> dict[str, object]:
        """Settings echoed into reports."""
        return {
            "bound": self.bound,
            "cap": self.cap,
            "census_max_order": self.census_max_order,
            "format": self.output_format,
            "includes": [str(p) for p in self.includes],
        }
