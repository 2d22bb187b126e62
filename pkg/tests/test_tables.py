from fractions import Fraction

import pytest

from exact_stirling import tables
from exact_stirling.precision import HPComplex


@pytest.mark.parametrize("table_id", tables.TABLE_IDS)
def test_fixture_loads(table_id):
    t = tables.load_table(table_id)
    assert t.rows
    assert t.modz > 0
    for r in t.rows:
        v = r.value()
        assert isinstance(v, HPComplex)
        assert r.printed_digits() >= 10
        assert tables.cases_for(r)


def test_unknown_table():
    with pytest.raises(KeyError):
        tables.load_table("11")


def test_unusable_rows_are_marked():
    bad = [(t, r.label) for t in tables.TABLE_IDS for r in tables.load_table(t).rows if not r.usable]
    assert ("8", "4pi/7 N=5 S_MB M=2") in bad
    assert ("5", "N=9 remainder") in bad


def test_fixture_digits_copied_from_text():
    """Spot values against the text they were copied from."""
    with open(_source_text_path(), encoding="utf-8") as fh:
        text = fh.read()
    checked = 0
    for t in tables.TABLE_IDS:
        for r in tables.load_table(t).rows:
            for part in (r.re, r.im):
                mant = part.lower().split("e")[0].lstrip("-")
                if len(mant.replace(".", "").lstrip("0")) >= 15:
                    assert mant[:18] in text.replace(" ", ""), (t, r.label, part)
                    checked += 1
    assert checked > 100


def _source_text_path():
    import pathlib
    p = pathlib.Path(__file__).resolve().parents[1] / "paper.md"
    if not p.exists():
        pytest.skip("source text not available")
    return p


def test_honest_required_caps():
    row = tables.load_table("2").rows[0]
    s = tables.SETTINGS["2"]
    assert tables.honest_required(row, s, 0, row.value()) <= s.required


def test_cases_for_mapping():
    t9 = tables.load_table("9")
    kinds = {r.label: [c.kind for _, c in tables.cases_for(r)] for r in t9.rows}
    assert kinds["-pi/7 N=4 total M=0"] == ["mb"]
    assert kinds["-pi/7 N=4 Borel total"] == ["borel"]
    t10 = tables.load_table("10")
    assert [c.kind for _, c in tables.cases_for(t10.rows[0])] == ["borel", "mb"]
    t7 = tables.load_table("7")
    for r in t7.rows:
        assert all(c.theta == Fraction(1, 2) + r.delta for _, c in tables.cases_for(r))


def test_small_table_run():
    rows = tables.run_table("3", digits=20, limit=2000, labels=["pi/5 N=4 total"], jobs=1)
    assert len(rows) == 1
    assert rows[0].digits > 18
