import io
import json

import pytest

from pcontact.cli import main


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_example_pipes_into_verify():
    code, doc, _ = run(["example", "class-I", "--l", "1", "--matrix", "identity"])
    assert code == 0 and doc.startswith("algebra ")
    code, out, _ = run(["verify", "p-contact", "--output", "json"], stdin=doc)
    report = json.loads(out)
    assert code == 0 and report["status"] == "pass"
    assert report["certificates"][0]["top_coefficient"] == "-2"


def test_g2_analogue_constant_through_the_cli():
    _, doc, _ = run(["example", "g2-analogue"])
    code, out, _ = run(["verify", "p-contact", "--output", "json"], stdin=doc)
    assert code == 0 and json.loads(out)["certificates"][0]["top_coefficient"] == "12"


def test_even_dimension_is_an_input_error():
    code, out, err = run(["verify", "p-contact", "--algebra", "torus2", "--form", "phi1"])
    assert code == 2 and "odd" in err and out == ""


def test_failed_verification_exits_one():
    code, out, _ = run(["verify", "p-contact", "--algebra", "torus3", "--form", "phi1", "--output", "json"])
    report = json.loads(out)
    assert code == 1 and report["status"] == "fail" and "c=0" in report["failures"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["verify", "p-contact", "--no-such-flag"],
        ["verify", "p-contact", "--algebra", "no_such_file.cnil"],
        ["verify", "p-contact", "--algebra", "iwasawa", "--form", "phi9"],
        ["example", "class-I", "--matrix", "missing.txt"],
    ],
)
def test_input_errors_exit_two(argv, capsys):
    code, _, _ = run(argv)
    assert code == 2


def test_empty_stdin_is_an_input_error():
    assert run(["verify", "p-contact"])[0] == 2


def test_matrix_file(tmp_path):
    path = tmp_path / "A.txt"
    path.write_text("\n".join(" ".join("1" if i == j else "0" for j in range(5)) for i in range(5)))
    code, doc, _ = run(["example", "class-I", "--l", "1", "--matrix", str(path)])
    assert code == 0
    assert run(["verify", "p-contact"], stdin=doc)[0] == 0


def test_json_is_deterministic_and_round_trips():
    argv = ["deform", "--algebra", "iwasawa", "--vector", "psi1", "--output", "json"]
    first, second = run(argv)[1], run(argv)[1]
    assert first == second
    report = json.loads(first)
    assert json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == first
    assert set(report) == {"command", "inputs", "status", "certificates", "dims", "series", "failures"}
    assert report["series"] == ["psi1 = phi~1*e2 + phi~2*e1", "psi2 = phi~3*e3"]


@pytest.mark.parametrize(
    "argv",
    [
        ["kernels", "--algebra", "iwasawa"],
        ["froelicher", "--algebra", "iwasawa"],
        ["structure-theorem", "--algebra", "symplectic_base_sigma0"],
        ["no-structure", "contact", "--algebra", "class_I_l1_identity"],
        ["no-structure", "symplectic", "--algebra", "heisenberg_line_l2"],
        ["verify", "s-symplectic", "--algebra", "heisenberg_line_l2"],
    ],
)
def test_verbs_pass_on_corpus(argv):
    code, out, _ = run(argv)
    assert code == 0 and out.endswith("status: pass\n")


def test_no_structure_inconclusive_is_a_failure():
    assert run(["no-structure", "contact", "--algebra", "iwasawa"])[0] == 1


def test_froelicher_json_dims():
    code, out, _ = run(["froelicher", "--algebra", "iwasawa", "--output", "json"])
    dims = json.loads(out)["dims"]
    assert dims["E1"]["1,0"] == 3 and dims["E2"]["1,1"] == 4


def test_structure_theorem_requires_fibration():
    assert run(["structure-theorem", "--algebra", "iwasawa"])[0] == 2
