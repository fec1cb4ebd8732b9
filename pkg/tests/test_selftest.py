import pytest

from pcontact import corpus
from pcontact.cli import main
from pcontact.selftest import SAMPLES, Sampler, run_selftest


@pytest.fixture(scope="module")
def default_run():
    return run_selftest(seed=0)


def test_default_seed_passes(default_run):
    assert default_run.ok, [s.line() for s in default_run.suites if not s.ok]


def test_identity_suites_meet_the_sample_floor(default_run):
    for s in default_run.suites:
        if s.name in ("corpus-parse", "dsl-roundtrip", "contact-certificates", "horizontal-vertical", "e2-below-e1"):
            continue
        assert s.samples >= SAMPLES, s.name


def test_corrupted_corpus_names_the_failing_suite(tmp_path):
    for name in ("iwasawa", "torus3"):
        (tmp_path / f"{name}.cnil").write_text(corpus.source(name))
    (tmp_path / "broken.cnil").write_text("algebra broken {\n  dim 3\n  d phi3 = phi1^phi7\n}\n")
    result = run_selftest(seed=1, corpus_dir=tmp_path)
    parse = result.suite("corpus-parse")
    assert not parse.ok and any(e.startswith("broken:") for e in parse.examples)
    assert all(s.ok for s in result.suites if s.name != "corpus-parse")


def test_seed_changes_inputs_not_outcomes(tmp_path):
    (tmp_path / "iwasawa.cnil").write_text(corpus.source("iwasawa"))
    algebra = corpus.load("iwasawa").algebra()
    assert Sampler(3).vector(algebra) != Sampler(4).vector(algebra)
    a = run_selftest(seed=3, corpus_dir=tmp_path)
    b = run_selftest(seed=4, corpus_dir=tmp_path)
    assert a.ok and b.ok
    assert [s.name for s in a.suites] == [s.name for s in b.suites]


def test_cli_selftest_reports_a_broken_corpus(tmp_path, capsys):
    (tmp_path / "bad.cnil").write_text("algebra bad { dim 2; d phi1 = phi1^phi2 }")
    code = main(["selftest", "--corpus", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 1 and "FAIL corpus-parse" in out and "bad:" in out
