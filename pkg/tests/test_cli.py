from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from gauss_grass.algebra import FieldSpec
from gauss_grass.charts import ChartFamily, families_equal
from gauss_grass.cli import main
from gauss_grass.errors import FieldError, SchemaError
from gauss_grass.famfile import emit_family, emit_variety, format_list, load, loads, parse_family_file, parse_list

from support import QQ, example_family

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ALL_FIXTURES = sorted(FIXTURES.glob("*.fam"))

LINES_FILE = """\
field = QQ
ambient = 4
plane_dim = 1
params = [z1, z2]
f = [[z1, z2, 2*z1*z2], [0, z1, z1^2]]
"""


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def machine(text: str) -> dict[str, str]:
    return dict(line.split("\t", 1) for line in text.splitlines())


# file format


def test_parse_list_nesting():
    assert parse_list("[[a, b], [c, d]]") == [["a", "b"], ["c", "d"]]
    assert parse_list("[]") == []
    assert parse_list("[ 2*z1 , z2^2 ]") == ["2*z1", "z2^2"]
    assert format_list([["a", "b"], []]) == "[[a, b], []]"


def test_fixture_is_worked_example():
    fam = parse_family_file(FIXTURES / "twisted_plane_lines.fam")
    assert fam == example_family()


def test_loads_matches_fixture_and_allows_continuations():
    text = "# comment\n" + LINES_FILE.replace("f = [[z1, z2, 2*z1*z2], [0, z1, z1^2]]", "f = [[z1, z2, 2*z1*z2],  # row 0\n     [0, z1, z1^2]]")
    assert loads(text).family() == example_family()


def test_grid_arity_error_names_grid():
    text = "field = QQ\nambient = 4\nplane_dim = 1\nparams = [z1]\nf = [[z1, 0], [0, z1]]\n"
    with pytest.raises(SchemaError, match="grid row 0 has 2 entries, expected 3") as info:
        loads(text)
    assert info.value.field == "f" and info.value.line == 5


def test_non_prime_field():
    with pytest.raises(FieldError, match="modulus not prime: 4"):
        loads(LINES_FILE.replace("QQ", "GF 4"))


@pytest.mark.parametrize(
    "text, where",
    [
        (LINES_FILE + "colour = red\n", "unknown key"),
        (LINES_FILE.replace("plane_dim = 1\n", ""), "missing required key"),
        (LINES_FILE + "ambient = 4\n", "duplicate key"),
        (LINES_FILE.replace("params = [z1, z2]", "params = [z1, z2"), "unterminated"),
        (LINES_FILE.replace("ambient = 4", "ambient = four"), "expected an integer"),
        (LINES_FILE + "oops\n", "key = value"),
    ],
)
def test_schema_errors(text, where):
    with pytest.raises(SchemaError, match=where):
        loads(text)


def test_expression_errors_carry_line_and_field():
    ff = loads(LINES_FILE.replace("2*z1*z2", "2z1"))
    with pytest.raises(SchemaError, match="line 5, field 'f'.*implicit multiplication"):
        ff.family()
    ff = loads(LINES_FILE.replace("2*z1*z2", "2*w"))
    with pytest.raises(SchemaError, match="unknown parameter 'w'"):
        ff.family()


def test_variety_file_needs_affine_first_coordinate():
    ff = loads("field = QQ\nparams = [z]\ncoords = [z, 1, z^2]\n")
    with pytest.raises(SchemaError, match="first coordinate must be 1"):
        ff.family()
    assert ff.variety().N == 2


def test_field_override():
    fam = parse_family_file(FIXTURES / "twisted_plane_lines.fam", FieldSpec.prime(7))
    assert fam == example_family(FieldSpec.prime(7))


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.stem)
def test_emit_parse_round_trip(path):
    ff = load(path)
    fam = ff.family()
    again = loads(emit_family(fam, ff.label, ff.expect))
    assert again.family() == fam
    assert again.expect == ff.expect and again.label == ff.label
    if ff.is_variety:
        assert loads(emit_variety(ff.variety(), ff.label)).variety() == ff.variety()


def test_emit_keeps_permutation():
    fam = ChartFamily.from_strings(QQ, 3, 1, ["z"], [["z", "1/(z + 1)"], ["3/2", "-z^2"]], coord_perm=[2, 0, 3, 1])
    back = loads(emit_family(fam)).family()
    assert back == fam and families_equal(back, fam)


# commands


def test_expand_command(capsys):
    code, out, _ = run(capsys, "expand", "--out", "machine", str(FIXTURES / "twisted_plane_lines.fam"))
    rec = machine(out)
    assert code == 0
    assert rec["m_plus"] == "3"
    assert rec["g"] == "[[2*z2], [2*z1]]"
    assert rec["out.f"] == "[[-2*z1*z2], [-z1^2], [2*z2], [2*z1]]"
    assert rec["out.columns"] == "[Z4]"


def test_text_output_lists_grid_rows(capsys):
    code, out, _ = run(capsys, "expand", str(FIXTURES / "twisted_plane_lines.fam"))
    assert code == 0
    assert "m_plus: 3\n" in out
    assert "out.f:\n  [-2*z1*z2]\n  [-z1^2]\n  [2*z2]\n  [2*z1]\n" in out


def test_verify_identity_inclusion(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "--inclusion", str(FIXTURES / "twisted_plane_lines.fam"))
    assert code == 0
    assert "check.identity: pass (holds)" in out
    assert "failed: 0" in out


def test_iterate_sigma_restores_curve(capsys):
    code, out, _ = run(capsys, "iterate", "--sigma", "2", "--out", "machine", str(FIXTURES / "twisted_cubic_osculating.fam"))
    rec = machine(out)
    assert code == 0
    assert rec["step1.m"] == "1" and rec["step2.m"] == "0"
    assert rec["step2.f"] == "[[z, z^2, z^3]]"


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "twisted_plane_lines.fam"],
        ["shrink", "twisted_cubic_tangents.fam"],
        ["conormal", "twisted_plane_lines.fam"],
        ["gauss", "twisted_plane_threefold.fam"],
        ["develop", "example38_a3.fam"],
        ["curve", "twisted_cubic_tangents.fam"],
        ["maxdev", "twisted_plane_threefold.fam"],
        ["subst", "--poly", "Z0^2*Z4 + Z1*Z2^2 - 2*Z0*Z2*Z3", "twisted_plane_threefold.fam"],
        ["verify", "--ranks", "--curve", "--diagram", "--dual-involution", "twisted_cubic_tangents.fam"],
    ],
)
def test_commands_succeed(capsys, argv):
    *head, name = argv
    code, out, err = run(capsys, *head, "--out", "machine", str(FIXTURES / name))
    assert code == 0, err
    assert all(line.count("\t") >= 1 for line in out.splitlines())
    assert machine(out)["command"] == argv[0]


def test_subst_and_maxdev_values(capsys):
    path = str(FIXTURES / "twisted_plane_threefold.fam")
    _, out, _ = run(capsys, "subst", "--out", "machine", "--poly", "Z0^2*Z4 + Z1*Z2^2 - 2*Z0*Z2*Z3", path)
    assert machine(out)["vanishes"] == "true" and machine(out)["value"] == "0"
    _, out, _ = run(capsys, "subst", "--out", "machine", "--poly", "Z0*Z4 - Z1*Z3", path)
    assert machine(out)["vanishes"] == "false"
    _, out, _ = run(capsys, "maxdev", "--out", "machine", path)
    rec = machine(out)
    assert rec["params"] == "[z1, z2]" and rec["out.f"] == "[[z1, z2, 2*z1*z2], [0, z1, z1^2]]"


def test_field_override_char_two(capsys):
    code, out, _ = run(capsys, "curve", "--field", "GF:2", "--out", "machine", str(FIXTURES / "twisted_cubic.fam"))
    rec = machine(out)
    assert code == 0 and rec["field"] == "GF 2"
    assert rec["char2_dgamma_zero"] == "true"


def test_verify_suite_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", str(FIXTURES))
    assert code == 0
    assert out.rstrip().endswith("failed: 0")


# exit codes


def test_exit_one_on_failed_expectation(capsys, tmp_path):
    bad = tmp_path / "bad.fam"
    bad.write_text(LINES_FILE + "expect.m_plus = 4\n")
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1
    assert "check.expect.m_plus: fail (3)" in out


def test_exit_one_on_computation_error(capsys):
    code, out, err = run(capsys, "maxdev", str(FIXTURES / "plane_in_p4.fam"))
    assert code == 1 and out == ""
    assert "maxdev" in err and "Gauss image is a point" in err


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["expand", "does_not_exist.fam"], "does_not_exist.fam"),
        (["expand", "--field", "GF:4", "FIX/twisted_plane_lines.fam"], "modulus not prime"),
        (["subst", "--poly", "Z0^2 + Z1", "FIX/twisted_plane_threefold.fam"], "not homogeneous"),
        (["subst", "--poly", "Z0 +", "FIX/twisted_plane_threefold.fam"], "--poly"),
        (["iterate", "--gamma", "0", "FIX/twisted_cubic.fam"], "at least 1"),
        (["verify", "--suite", "no_such_dir"], "not a directory"),
    ],
)
def test_exit_two_on_usage_errors(capsys, argv, needle):
    argv = [a.replace("FIX", str(FIXTURES)) for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert argv[0] in err and needle in err


def test_exit_two_on_schema_error(capsys, tmp_path):
    bad = tmp_path / "bad.fam"
    bad.write_text(LINES_FILE.replace("[0, z1, z1^2]", "[0, z1]"))
    code, _, err = run(capsys, "expand", str(bad))
    assert code == 2 and "field 'f'" in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["iterate", str(FIXTURES / "twisted_cubic.fam")])
    assert info.value.code == 2


# determinism


def test_reports_are_byte_identical(capsys):
    for path in ALL_FIXTURES:
        first = run(capsys, "verify", "--out", "machine", str(path))
        second = run(capsys, "verify", "--out", "machine", str(path))
        assert first == second


def test_meta_flag_adds_records(capsys):
    _, out, _ = run(capsys, "expand", "--meta", "--out", "machine", str(FIXTURES / "twisted_plane_lines.fam"))
    rec = machine(out)
    assert "meta.version" in rec and "meta.generated_at" in rec
    _, plain, _ = run(capsys, "expand", "--out", "machine", str(FIXTURES / "twisted_plane_lines.fam"))
    assert "meta." not in plain


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gauss_grass.cli", "expand", "--out", "machine", str(FIXTURES / "twisted_plane_lines.fam")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "m_plus\t3" in proc.stdout
