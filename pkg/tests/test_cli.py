import csv
import io

from softpi.cli import main
from softpi.corpus import DEFAULT_CORPUS
from softpi.library import DUPSER_SCRIPT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_valid_entry(capsys):
    code, out, _ = run(capsys, "check", str(DEFAULT_CORPUS / "mult_1_2.thm"))
    assert code == 0
    assert "|- y : 1 * 1 * 1 * 1" in out


def test_check_dupser_fails(capsys, tmp_path):
    f = tmp_path / "dupser.thm"
    f.write_text(DUPSER_SCRIPT, encoding="utf-8")
    code, _, err = run(capsys, "check", str(f))
    assert code != 0
    assert err.startswith("AuxiliaryNonlinear")


def test_blowup_steps(capsys):
    code, out, _ = run(capsys, "blowup", "--n", "8", "--format", "csv")
    (row,) = csv.DictReader(io.StringIO(out))
    assert code == 0
    assert int(row["steps"]) >= 256


def test_analyze_corpus(capsys):
    code, out, _ = run(capsys, "analyze", str(DEFAULT_CORPUS))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["name", "size", "bde", "dupf", "wei", "judgment_depth"]
    mult = next(r for r in rows if r["name"] == "mult_1_2")
    assert (mult["size"], mult["bde"], mult["dupf"], mult["wei"]) == ("3", "0", "0", "3")


def test_extract_reduce_run_certify(capsys, tmp_path):
    thm = str(DEFAULT_CORPUS / "mult_closed_2.thm")
    assert run(capsys, "extract", thm)[0] == 0
    trace = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "reduce", thm, "--emit-trace", str(trace))
    assert code == 0 and "terminated=true" in out
    assert trace.read_text(encoding="utf-8").startswith("index,rule,wei,dupf,size")
    assert run(capsys, "run", str(DEFAULT_CORPUS / "blowup_2.pi"))[0] == 0
    code, out, _ = run(capsys, "certify", thm)
    assert code == 0 and "satisfied=true" in out


def test_corpus_command(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    assert out.startswith("name,kind,expect,status")


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent.thm")
    assert code == 2
    assert err.startswith("FileNotFoundError")
