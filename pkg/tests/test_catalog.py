import io
import pathlib

import pytest

from arrows.catalog import (
    CatalogEntry,
    catalog,
    crash_grundy,
    crash_state,
    entry_ids,
    flow_grundy,
    flow_state,
    rod_grundy,
    rod_state,
    three_marked_grundy,
    twig_grundy,
    twig_state,
    verify_entry,
    write_report,
)
from arrows.errors import InvalidParameterError
from arrows.states import LegSpec, Mark, spider_state

DATA = pathlib.Path(__file__).parent / "data"


class TestClosedForms:
    def test_values(self):
        assert flow_grundy(3) == 1 and crash_grundy(3) == 0
        assert twig_grundy(0) == 0
        assert rod_grundy(1) == 1
        assert three_marked_grundy(2, 2, 2) == 2
        assert three_marked_grundy(2, 3, 4) == 5

    def test_domains(self):
        with pytest.raises(InvalidParameterError):
            crash_grundy(0)
        with pytest.raises(InvalidParameterError):
            crash_state(0)
        with pytest.raises(InvalidParameterError):
            flow_grundy(-1)
        with pytest.raises(InvalidParameterError):
            rod_state(0)
        with pytest.raises(InvalidParameterError):
            three_marked_grundy(1, 2, 2)

    def test_eight_direction_agreement(self, engine):
        values = set()
        for da in (Mark.IN, Mark.OUT):
            for db in (Mark.IN, Mark.OUT):
                for dc in (Mark.IN, Mark.OUT):
                    x = spider_state(LegSpec(3, da), LegSpec(3, db), LegSpec(5, dc))
                    values.add(engine.grundy(x))
        assert values == {three_marked_grundy(3, 3, 5)} == {5}


class TestRegistry:
    def test_ids_stable(self):
        assert entry_ids() == [
            "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10", "E11",
            "E12", "E13", "E14", "E15", "E16", "E17", "E18", "E19", "E19b",
            "E20", "E21", "E22",
        ]

    def test_unknown_entry(self, engine):
        with pytest.raises(InvalidParameterError):
            verify_entry(engine, "E99")


class TestSpotChecks:
    def test_e18_small(self, engine):
        rows = verify_entry(engine, "E18", 3)
        assert rows and all(r.match for r in rows)
        assert len(rows) == 2 * 2 * 2 * 8

    def test_e21_small(self, engine):
        rows = verify_entry(engine, "E21", 4)
        assert [r.match for r in rows] == [True] * 8

    def test_e5_matches_crash_values(self, engine):
        rows = verify_entry(engine, "E5", 8)
        assert all(r.match for r in rows)
        assert [f"grundy={crash_grundy(n)}" in r.claim for n, r in enumerate(rows, 1)]

    def test_two_marked_legs_agreement_counterexample(self, engine):
        # the value-agreement relation genuinely fails when both marked legs
        # are short: opposed arrows give a rod, agreeing arrows give a twig
        up = spider_state(LegSpec(0, Mark.IN), LegSpec(0, Mark.OUT), LegSpec(4))
        down = spider_state(LegSpec(0, Mark.IN), LegSpec(0, Mark.IN), LegSpec(4))
        assert engine.grundy(up) == 0  # below 4 - 2, so agreement would force 0
        assert engine.grundy(down) == 4
        # the sweep therefore excludes the both-zero cell from parts 2/3
        rows = verify_entry(engine, "E19", 4)
        assert not any(
            "a=0;b=0" in r.params and ("part=2" in r.params or "part=3" in r.params)
            for r in rows
        )
        assert any("a=0;b=0" in r.params and "part=1" in r.params for r in rows)
        assert any("a=0;b=0" in r.params and "part=4" in r.params for r in rows)


class TestReport:
    def test_golden_bytes(self, engine):
        rows = verify_entry(engine, "E1", 4) + verify_entry(engine, "E5", 3)
        buf = io.StringIO()
        write_report(rows, buf, "entry=E1+E5 max=4,3")
        assert buf.getvalue() == (DATA / "golden_report.csv").read_text()

    def test_header_carries_bounds(self, engine):
        buf = io.StringIO()
        write_report(verify_entry(engine, "E3", 2), buf, "entry=E3 max=2")
        assert buf.getvalue().startswith("# bounds: entry=E3 max=2\n")
