import io

import pytest

from etaq.series import StripPoint, zeta_from_eta, bridge_denominator
from etaq.zeros import (RefinementError, ZeroFileError, eta_abs, load_zeros,
                        refine_zero, scan_zeros, scan_and_refine, write_csv)

FIRST_THREE = (14.134725141734694, 21.022039638771554, 25.010857580145689)


class TestLoadZeros:
    def test_two_ordinates(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("14.134725\n21.022040\n")
        records = load_zeros(f)
        assert [r.ordinate for r in records] == [14.134725, 21.022040]
        assert all(r.source == "File" and not r.refined for r in records)
        assert all(r.residual <= 1e-4 for r in records)

    def test_comments_and_blanks(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("# first three\n14.134725\n\n21.022040\n25.010858\n")
        assert len(load_zeros(f)) == 3

    def test_empty_file(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("")
        assert load_zeros(f) == []

    def test_parse_error_reports_line(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("abc\n")
        with pytest.raises(ZeroFileError, match=":1:"):
            load_zeros(f)

    def test_non_ascending_rejected(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("21.0\n14.1\n")
        with pytest.raises(ZeroFileError, match="ascending"):
            load_zeros(f)

    def test_near_duplicates_collapsed(self, tmp_path):
        f = tmp_path / "zeros.txt"
        f.write_text("14.134725\n14.1347251\n21.022040\n")
        assert len(load_zeros(f)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ZeroFileError):
            load_zeros(tmp_path / "nope.txt")


class TestScan:
    def test_nothing_below_five(self):
        assert scan_zeros(0.0, 5.0) == []

    def test_degenerate_interval(self):
        assert scan_zeros(3.0, 3.0) == []

    def test_finds_first_zero(self):
        records = scan_zeros(14.0, 14.3)
        assert len(records) == 1
        assert records[0].ordinate == pytest.approx(14.1347, abs=0.01)
        assert not records[0].refined

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            scan_zeros(5.0, 2.0)
        with pytest.raises(ValueError):
            scan_zeros(0.0, 1.0, step=0.0)

    def test_scan_budget_cap(self):
        with pytest.raises(ValueError, match="grid points"):
            scan_zeros(0.0, 1000.0, step=1e-6)


class TestRefine:
    def test_first_zero(self):
        rec = refine_zero(14.13, window=0.05, tol=1e-9)
        assert rec.ordinate == pytest.approx(FIRST_THREE[0], abs=1e-6)
        assert rec.residual <= 1e-9
        assert rec.refined

    def test_second_zero(self):
        rec = refine_zero(21.0, window=0.1, tol=1e-9)
        assert rec.ordinate == pytest.approx(FIRST_THREE[1], abs=1e-5)

    def test_idempotent(self, first_zero):
        again = refine_zero(first_zero.ordinate, window=0.05, tol=1e-9)
        assert abs(again.ordinate - first_zero.ordinate) < 1e-9

    def test_no_zero_in_window(self):
        with pytest.raises(RefinementError, match="no zero") as exc:
            refine_zero(5.0, window=0.5, tol=1e-9)
        assert exc.value.residual > 1e-6

    def test_zeta_small_via_bridge(self, first_zero):
        # |zeta| <= residual / |1 - 2^(1-s)| at the refined point
        p = StripPoint(0.5, first_zero.ordinate)
        z = zeta_from_eta(p)
        assert abs(z.value) <= first_zero.residual / abs(bridge_denominator(p)) * 1.01


def test_scan_and_refine_reproduces_published_ordinates():
    records = scan_and_refine(0.0, 30.0)
    assert len(records) == 3
    for rec, want in zip(records, FIRST_THREE):
        assert rec.ordinate == pytest.approx(want, abs=1e-5)
        assert rec.residual <= 1e-9


def test_csv_output(first_zero):
    buf = io.StringIO()
    write_csv([first_zero], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "ordinate,residual,refined"
    assert lines[1].endswith(",1")


def test_eta_abs_matches_point_evaluation():
    from etaq.series import eta_accel
    assert eta_abs(14.0) == pytest.approx(
        abs(eta_accel(StripPoint(0.5, 14.0)).value), abs=1e-14)
