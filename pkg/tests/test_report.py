import math

import pytest

from deltacasimir.report import FAIL, PASS, WARN, VerificationReport
from deltacasimir.verify import full_report


class TestReport:
    def test_tolerance_comparison(self):
        rep = VerificationReport("t")
        assert rep.add("close", 1.0, 1.0 + 1e-9, 1e-8).status == PASS
        assert rep.add("far", 1.0, 2.0, 1e-8).status == FAIL
        assert rep.add("nan", math.nan, 0.0, 1.0).status == FAIL
        assert rep.add("shown", 1.0, 2.0, 1e-8, warn_only=True).status == WARN
        assert not rep.passed
        assert (rep.count(PASS), rep.count(FAIL), rep.count(WARN)) == (1, 2, 1)

    def test_warn_does_not_fail(self):
        rep = VerificationReport()
        rep.add("a", 1, 1)
        rep.add("b", 0, 1, warn_only=True)
        assert rep.passed

    def test_explicit_ok_and_exact(self):
        rep = VerificationReport()
        assert rep.add("flag", True, True).status == PASS
        assert rep.add("forced", 5.0, 0.0, 1e-3, ok=True).status == PASS

    def test_extend_prefixes(self):
        a, b = VerificationReport(), VerificationReport()
        b.add("x", 1, 1)
        a.extend(b, prefix="sub ")
        assert a.checks[0].name == "sub x"

    def test_table(self):
        rep = VerificationReport("title")
        rep.add("complex", 1 + 2j, 1 + 2j, 1e-9, note="n")
        text = rep.table()
        assert text.splitlines()[0] == "title"
        assert "1+2j" in text
        assert text.splitlines()[-1] == "1 passed, 0 failed, 0 warnings"

    def test_as_dicts(self):
        rep = VerificationReport()
        rep.add("x", 1.0, 1.0, 0.1)
        assert rep.as_dicts() == [dict(name="x", value=1.0, reference=1.0, tolerance=0.1, status=PASS, note="")]


@pytest.fixture(scope="module")
def report():
    return full_report()


class TestFullReport:
    def test_no_failures(self, report):
        assert report.passed, report.table()
        assert report.count(PASS) > 100

    def test_discrepancies_are_warnings(self, report):
        warned = [c.name for c in report.checks if c.status == WARN]
        assert any("H3 residue" in n for n in warned)
        assert any("threshold" in n for n in warned)
        assert any("p a^2" in n for n in warned)
