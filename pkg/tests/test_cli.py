"""
Unit tests for the .dgx format and the dgx command line
"""
import json

import pytest

from main import main
from src.cli.dgx_format import parse, parse_file, print_workspace
from src.cli.reports import Report
from src.errors import ParseError


def test_print_then_parse_keeps_workspace(fixture_path):
    """Test that printing a workspace and parsing it back gives the same content"""
    ws = parse_file(fixture_path("a2.dgx"))
    again = parse(print_workspace(ws))
    assert again.signature() == ws.signature()


def test_composite_characteristic_is_a_parse_error():
    """Test that Fp 4 is rejected with its line number"""
    with pytest.raises(ParseError) as info:
        parse("field Fp 4\n")
    assert info.value.line == 1


def test_unknown_keyword_is_a_parse_error():
    """Test that an unknown top-level keyword is rejected"""
    with pytest.raises(ParseError):
        parse("field Q\nfrobnicate A2\n")


def test_report_json_carries_schema():
    """Test the JSON rendering of a report"""
    report = Report(command="h0", ok=True, summary="done", data={"objects": ["P1"]})
    payload = json.loads(report.render("json"))
    assert payload["schema"] == 1
    assert payload["ok"] is True
    assert payload["data"] == {"objects": ["P1"]}


def test_dot_without_graph_is_an_error():
    """Test that a command without a graph cannot render DOT"""
    with pytest.raises(ValueError):
        Report(command="h0", ok=True, summary="done").render("dot")


def test_lambda_simplex_command(capsys):
    """Test the Lambda(Delta^0) command succeeds"""
    assert main(["lambda-simplex", "0"]) == 0
    assert "Lambda(Delta^0)" in capsys.readouterr().out


def test_doldkan_check_command():
    """Test N DK is the identity on the default random complex"""
    assert main(["doldkan-check", "--seed", "1"]) == 0


def test_h0_command(fixture_path, capsys):
    """Test the H0 command on the A2 workspace"""
    assert main(["--out", "json", "h0", fixture_path("a2.dgx"), "--cat", "A2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["command"] == "h0"
    assert payload["data"]["objects"] == ["P1", "P2", "S2", "SP1", "SP2"]


def test_check_hses_verdicts(fixture_path):
    """Test positive and negative short exactness verdicts map to exit codes"""
    path = fixture_path("a2.dgx")
    assert main(["check-hses", path, "--hcomplex", "alpha"]) == 0
    assert main(["check-hses", path, "--hcomplex", "alpha0"]) == 1


def test_usage_errors(fixture_path):
    """Test that missing files, unknown names and bad usage exit with 2"""
    assert main([]) == 2
    assert main(["h0", "missing.dgx", "--cat", "A2"]) == 2
    assert main(["h0", fixture_path("a2.dgx"), "--cat", "Nope"]) == 2
    assert main(["check-hses", fixture_path("a2.dgx"), "--hcomplex", "nope"]) == 2


def test_help_exits_cleanly():
    """Test that --help is not an error"""
    assert main(["--help"]) == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
