import json
import subprocess
import sys
import textwrap

import pytest

from skewform.session import (
    SessionError,
    parse_session,
    report_to_json_text,
    report_to_text,
    run_session,
    session_to_text,
)

DEMO = textwrap.dedent(
    """\
    # extended phase chart with the momentum 1-form
    chart t q p
    form omega = p*d[q] - (p^2/2)*d[t]
    form grad = q*d[t] + t*d[q]
    pseudo traj(u, c): t = u, q = c*u, p = c
    relation r = 0 => omega
    classify r expect NONIDENTICAL
    classify r on traj expect CLOSED_RHS
    check closed omega expect false
    check exact grad expect true
    scan poisson q^2 + p^2, q*p with (q:p) expect nonzero
    scan determinant [2*q] expect nonzero
    scan jacobian q + p, q - p, t expect nonzero
    chain r on traj
    eval p*q - q*p
    """
)


class TestParse:
    def test_demo_parses(self):
        s = parse_session(DEMO)
        assert s.chart.variables == ("t", "q", "p")
        assert set(s.forms) == {"omega", "grad"}
        assert "traj" in s.pseudos and s.pseudos["traj"].params.dim == 2
        assert len(s.commands) == 9

    def test_undefined_form_reference(self):
        with pytest.raises(SessionError, match="line 2.*undefined form"):
            parse_session("chart x y\nclassify 0 => nosuch\n")

    def test_undeclared_scalar_in_form(self):
        with pytest.raises(SessionError, match="line 2.*not a declared scalar"):
            parse_session("chart x y\nform f = a*d[x]\n")

    def test_param_declares_scalar(self):
        s = parse_session("chart x y\nparam a\nform f = a*d[x]\n")
        assert "f" in s.forms

    def test_duplicate_name(self):
        with pytest.raises(SessionError, match="already declared"):
            parse_session("chart x y\nform f = d[x]\nform f = d[y]\n")

    def test_chart_required_first(self):
        with pytest.raises(SessionError, match="chart"):
            parse_session("form f = d[x]\n")

    def test_dimension_mismatch_in_connection(self):
        with pytest.raises(SessionError):
            parse_session("chart x y\nconnection G: [3,1,1] = x\n")

    def test_syntax_error_carries_line(self):
        with pytest.raises(SessionError, match="line 2"):
            parse_session("chart x y\nform f = d[x] +* d[y]\n")

    def test_differential_identifier_hint(self):
        with pytest.raises(SessionError, match="d\\[E\\]"):
            parse_session("chart E V T\nform f = dE*d[V]\n")

    def test_metric_kinds(self):
        from skewform import parse_expr

        s = parse_session("chart x y\nmetric g = euclidean\nmetric h: [1,1] = 1, [2,2] = x^2\n")
        assert s.metrics["g"].signature == (2, 0)
        assert s.metrics["h"].volume == parse_expr("x")

    def test_metric_with_explicit_dimension(self):
        s = parse_session("chart x y\nmetric g = euclidean(2)\nmetric m = minkowski(2)\n")
        assert s.metrics["m"].sign_det == -1
        with pytest.raises(SessionError, match="dimension"):
            parse_session("chart x y\nmetric g = euclidean(3)\n")

    def test_inline_classify_form(self):
        s = parse_session(
            "chart t q p\nform omega = p*d[q] - (p^2/2)*d[t]\nclassify 0 => omega expect NONIDENTICAL\n"
        )
        report = run_session(s)
        assert report["ok"] is True

    def test_dualclosed_and_evoclosed_checks(self):
        text = textwrap.dedent(
            """\
            chart x y
            metric g = euclidean
            connection G: [1,2,1] = x
            form flat = d[x]
            form torsional = y*d[x]
            check dualclosed flat with g expect true
            check dualclosed x*d[x] with g expect false
            check evoclosed torsional with G expect false
            check evoclosed 3*d[y] with G expect true
            pseudo line(u): x = 2*u, y = 0
            check dualclosed flat with g on line expect true
            """
        )
        report = run_session(parse_session(text))
        assert report["ok"] is True
        # round-trips through the pretty printer
        s2 = parse_session(session_to_text(parse_session(text)))
        assert run_session(s2)["ok"] is True

    def test_check_with_undefined_metric(self):
        with pytest.raises(SessionError, match="undefined metric"):
            parse_session("chart x y\ncheck dualclosed d[x] with g\n")


class TestRun:
    def test_demo_all_ok(self):
        report = run_session(parse_session(DEMO))
        assert report["ok"] is True
        expectation_records = [r for r in report["commands"] if "expected" in r]
        assert len(expectation_records) == 7
        assert all(r["ok"] for r in expectation_records)

    def test_failed_expectation(self):
        s = parse_session("chart x y\nform w = x*d[y]\ncheck closed w expect true\n")
        report = run_session(s)
        assert report["ok"] is False

    def test_chain_record(self):
        report = run_session(parse_session(DEMO))
        chain_rec = next(r for r in report["commands"] if r["command"] == "chain")
        assert chain_rec["steps"][0]["degree"] == 0
        assert chain_rec["steps"][0]["right"] == "1/2*c^2*u"

    def test_command_error_reported_not_raised(self):
        s = parse_session(
            "chart x y z\n"
            "form w = -y*d[x] + x*d[y]\n"
            "pseudo plane(u, v): x = u, y = v, z = 0\n"
            "chain 0 => w on plane\n"
        )
        report = run_session(s)
        assert report["ok"] is False
        rec = report["commands"][0]
        assert "error" in rec and "not closed" in rec["error"]

    def test_seed_stable_json(self):
        report1 = run_session(parse_session(DEMO), seed=7)
        report2 = run_session(parse_session(DEMO), seed=7)
        assert report_to_json_text(report1) == report_to_json_text(report2)

    def test_text_report_renders(self):
        text = report_to_text(run_session(parse_session(DEMO)))
        assert "result: ok" in text
        assert "NONIDENTICAL" in text


class TestRoundTrip:
    def test_pretty_print_reparses_equivalent(self):
        s1 = parse_session(DEMO)
        text = session_to_text(s1)
        s2 = parse_session(text)
        assert s1.chart == s2.chart
        assert s1.forms == s2.forms
        assert set(s1.pseudos) == set(s2.pseudos)
        for name in s1.pseudos:
            assert s1.pseudos[name].mapping == s2.pseudos[name].mapping
        assert len(s1.commands) == len(s2.commands)
        r1 = run_session(s1, seed=5)
        r2 = run_session(s2, seed=5)
        for a, b in zip(r1["commands"], r2["commands"]):
            a.pop("line")
            b.pop("line")
        assert r1["commands"] == r2["commands"]


def run_cli(*args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "skewform", *args], capture_output=True, text=True, **kw
    )


class TestCli:
    def test_check_exit_codes(self, tmp_path):
        good = tmp_path / "good.sf"
        good.write_text("chart x y\nform w = y*d[x] + x*d[y]\ncheck closed w expect true\n")
        assert run_cli("check", str(good)).returncode == 0
        bad = tmp_path / "bad.sf"
        bad.write_text("chart x y\nform w = y*d[x] + x*d[y]\ncheck closed w expect false\n")
        assert run_cli("check", str(bad)).returncode == 1

    def test_check_diagnostic_exit(self, tmp_path):
        f = tmp_path / "broken.sf"
        f.write_text("chart x y\nclassify 0 => missing\n")
        proc = run_cli("check", str(f))
        assert proc.returncode == 2
        assert "line 2" in proc.stderr

    def test_json_byte_identical(self, tmp_path):
        f = tmp_path / "demo.sf"
        f.write_text(DEMO)
        a = run_cli("check", str(f), "--json", "--seed", "7")
        b = run_cli("check", str(f), "--json", "--seed", "7")
        assert a.returncode == 0
        assert a.stdout == b.stdout
        doc = json.loads(a.stdout)
        assert doc["schema"] == "skewform/report@1"
        assert doc["seed"] == 7

    def test_catalog_list_and_run(self):
        listing = run_cli("catalog", "list")
        assert listing.returncode == 0
        assert "poincare-invariant" in listing.stdout
        run = run_cli("catalog", "run", "poincare-invariant", "--json")
        assert run.returncode == 0
        doc = json.loads(run.stdout)
        assert doc["entries"][0]["passed"] is True

    def test_eval(self):
        proc = run_cli("eval", "(x+y)^2 - x^2 - 2*x*y")
        assert proc.returncode == 0
        assert proc.stdout.strip() == "y^2"
        at = run_cli("eval", "x/y", "--at", "x=1,y=3")
        assert at.stdout.strip() == "1/3"

    def test_eval_error(self):
        proc = run_cli("eval", "foo(x)")
        assert proc.returncode == 2
        assert "unknown function" in proc.stderr
