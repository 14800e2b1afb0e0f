"""Unit tests for the census of small hypermagmas."""

from pathlib import Path

import numpy as np
import polars as pl
import pytest

from hyperbench.backend.builtins import krasner, sign
from hyperbench.backend.census import (
    CENSUS_SCHEMA,
    census,
    rule_strings,
    summarize,
    write_census,
)
from hyperbench.backend.errors import CapExceededError, StructureError


class TestCensus:
    """Enumeration, deduplication and suites."""

    def test_order_one(self) -> None:
        """The one-point carrier gives a single table in every suite."""
        result = census(1, "hypergroup")
        assert result.candidates == 1
        assert len(result.tables) == 1
        assert result.tables[0].add.tolist() == [[1]]

    @pytest.mark.parametrize(
        ("suite", "expected"),
        [("hypermagma", 4), ("hypersemigroup", 4), ("hypergroup", 2)],
    )
    def test_order_two(self, suite: str, expected: int) -> None:
        """Order 2 has four tables, all associative; Z/2 and Krasner are hypergroups."""
        result = census(2, suite)
        assert result.candidates == 4
        assert len(result.tables) == expected
        assert result.frame.height == expected

    def test_order_two_hypergroups(self) -> None:
        """The hypergroups of order 2 have 1 + 1 = {0} or {0, 1}."""
        result = census(2, "hypergroup")
        sums = sorted(int(h.add[1, 1]) for h in result.tables)
        assert sums == [0b01, 0b11]

    def test_sign_is_found(self) -> None:
        """The sign hyperfield's addition is its own canonical form."""
        result = census(3, "hypergroup")
        assert result.candidates == 512
        assert any(np.array_equal(h.add, sign().add) for h in result.tables)

    def test_frame_schema(self) -> None:
        """The frame follows the census schema."""
        result = census(2, "hypergroup")
        assert dict(result.frame.schema) == CENSUS_SCHEMA
        assert result.frame["carrier"].to_list()[0] == ["0", "1"]

    def test_unknown_suite(self) -> None:
        """An unknown suite is rejected."""
        with pytest.raises(StructureError):
            census(2, "hyperring")

    def test_non_positive_order(self) -> None:
        """Order 0 is rejected."""
        with pytest.raises(StructureError):
            census(0)

    def test_order_limit(self) -> None:
        """Orders above the limit raise with the limit in the error."""
        with pytest.raises(CapExceededError) as info:
            census(5)
        assert info.value.limit == 4
        assert info.value.required == 5

    def test_candidate_cap(self) -> None:
        """512 candidates do not fit a cap of 100."""
        with pytest.raises(CapExceededError) as info:
            census(3, cap=100)
        assert info.value.required == 512
        assert info.value.exit_code == 4


class TestCensusOutput:
    """Rules, NDJSON output and summaries."""

    def test_rule_strings(self) -> None:
        """Krasner rules read in carrier order."""
        assert rule_strings(krasner()) == ["0+0 = {0}", "0+1 = {1}", "1+1 = {0,1}"]

    def test_write_census(self, tmp_path: Path) -> None:
        """The NDJSON file has one line per table."""
        result = census(2, "hypermagma")
        path = tmp_path / "out" / "census.ndjson"
        write_census(result, path)
        back = pl.read_ndjson(path)
        assert back.height == 4
        assert set(back["suite"].to_list()) == {"hypermagma"}

    def test_summarize(self) -> None:
        """Counts are grouped by order and suite."""
        results = [census(2, "hypermagma"), census(2, "hypergroup"), census(1, "hypergroup")]
        summary = summarize(results)
        assert summary.to_dicts() == [
            {"order": 1, "suite": "hypergroup", "count": 1},
            {"order": 2, "suite": "hypergroup", "count": 2},
            {"order": 2, "suite": "hypermagma", "count": 4},
        ]

    def test_summarize_empty(self) -> None:
        """No tables give an empty summary."""
        assert summarize([]).height == 0
