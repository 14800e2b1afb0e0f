"""Unit tests for violation reports, the error hierarchy and union-find."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperbench.backend.errors import (
    CapExceededError,
    ConsistencyError,
    HyperbenchError,
    StructureError,
    UndeterminedError,
)
from hyperbench.backend.report import ReportOfViolations, Violation, ViolationCollector
from hyperbench.backend.union_find import UnionFind


class TestViolationCollector:
    """Counting, first witnesses and facts."""

    def test_first_witness_is_kept(self) -> None:
        """Later witnesses only add to the count."""
        out = ViolationCollector("demo")
        out.add("assoc", (0, 1, 2))
        out.add("assoc", (1, 1, 1), count=3)
        out.add("ignored", (9,), count=0)
        report = out.build()
        assert report.axioms == ("assoc",)
        v = report.violation("assoc")
        assert v == Violation("assoc", (0, 1, 2), 4)
        assert report.violation("ignored") is None
        assert not report.ok

    def test_add_mask(self) -> None:
        """The first True cell in C order is the witness."""
        out = ViolationCollector("demo")
        bad = np.zeros((2, 3), dtype=bool)
        bad[1, 0] = bad[1, 2] = True
        out.add_mask("cells", bad)
        out.add_mask("none", np.zeros(4, dtype=bool))
        report = out.build()
        assert report.violation("cells") == Violation("cells", (1, 0), 2)
        assert report.axioms == ("cells",)

    def test_empty_report_is_ok(self) -> None:
        """A collector with facts only builds a passing report."""
        out = ViolationCollector("demo")
        assert out.ok
        out.fact("size", 3)
        report = out.build()
        assert report.ok
        assert report.facts == {"size": 3}

    def test_to_dict_is_json_ready(self) -> None:
        """Numpy scalars and sets become plain values, sets sorted."""
        out = ViolationCollector("demo")
        out.add("axiom", (np.int64(2),))
        out.fact("set", frozenset({3, 1}))
        out.fact("scalar", np.int64(5))
        out.fact("table", {1: (np.int64(0), 2)})
        data = out.build().to_dict()
        assert data == {
            "subject": "demo",
            "ok": False,
            "violations": [{"axiom": "axiom", "witness": [2], "count": 1}],
            "facts": {"set": [1, 3], "scalar": 5, "table": {"1": [0, 2]}},
        }

    def test_merged(self) -> None:
        """Merging keeps the subject and prefixes the others' facts."""
        a = ReportOfViolations("a", (Violation("x", (0,)),), {"k": 1})
        b = ReportOfViolations("b", (Violation("y", (1,)),), {"k": 2})
        merged = a.merged(b)
        assert merged.subject == "a"
        assert merged.axioms == ("x", "y")
        assert merged.facts == {"k": 1, "b.k": 2}


class TestErrors:
    """Exit codes and messages of the error hierarchy."""

    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (StructureError("bad"), 3),
            (CapExceededError(10, 20), 4),
            (UndeterminedError(4), 2),
            (ConsistencyError("mismatch"), 1),
        ],
    )
    def test_exit_codes(self, error: HyperbenchError, code: int) -> None:
        """Each error carries the exit code of its verdict."""
        assert isinstance(error, HyperbenchError)
        assert error.exit_code == code

    def test_messages(self) -> None:
        """Cap and bound errors keep their numbers."""
        cap = CapExceededError(10, 20, "maps")
        assert (cap.limit, cap.required) == (10, 20)
        assert str(cap) == "maps needs 20 candidates, cap is 10"
        und = UndeterminedError(3, "tensor")
        assert und.bound == 3
        assert "L=3" in str(und)


class TestUnionFind:
    """Merging, roots and the merge log."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Six singleton classes."""
        self.uf = UnionFind(6)

    def test_union_and_same(self) -> None:
        """Unions are transitive and repeated unions report no change."""
        assert self.uf.union(0, 1, "r1")
        assert self.uf.union(1, 2, "r2")
        assert not self.uf.union(2, 0, "r3")
        assert self.uf.same(0, 2)
        assert not self.uf.same(0, 3)
        assert self.uf.count() == 4
        assert len(self.uf) == 6

    def test_merge_log(self) -> None:
        """Only successful unions are logged, with their reason."""
        self.uf.union(4, 5, "balanced")
        self.uf.union(5, 4, "again")
        assert self.uf.merges == [(4, 5, "balanced")]

    def test_roots(self) -> None:
        """Members of one class share a root."""
        self.uf.union(3, 4)
        roots = self.uf.roots()
        assert roots[3] == roots[4]
        assert len(set(roots.tolist())) == 5


class TestUnionFindProperties:
    """Invariants under arbitrary union sequences."""

    @given(
        pairs=st.lists(
            st.tuples(st.integers(min_value=0, max_value=7), st.integers(min_value=0, max_value=7)),
            max_size=20,
        ),
    )
    def test_count_matches_roots(self, pairs: list[tuple[int, int]]) -> None:
        """Successful unions each remove one class and join their operands."""
        uf = UnionFind(8)
        merged = sum(uf.union(a, b) for a, b in pairs)
        assert uf.count() == 8 - merged
        assert len(set(uf.roots().tolist())) == uf.count()
        assert all(uf.same(a, b) for a, b in pairs)
        assert len(uf.merges) == merged
