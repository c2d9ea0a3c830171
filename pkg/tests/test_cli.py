import pytest

from biasedclique.cli import main
from biasedclique.instance import make_ka, read_instance, validate
from biasedclique.bipartite import read_bipartite, validate_bipartite

from cli_fixtures import commands, run_cli, write_suite


@pytest.fixture(scope="module")
def suite(tmp_path_factory):
    root = tmp_path_factory.mktemp("suite")
    return write_suite(root), root


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_then_validate(tmp_path, capsys):
    f = tmp_path / "f.txt"
    assert run(capsys, "gen", "--family", "ka", "--a", "2", "--n", "6", "--out", str(f))[0] == 0
    assert read_instance(f) == make_ka(2, 6)
    code, out, _ = run(capsys, "validate", str(f))
    assert code == 0 and out.startswith("valid=true")


@pytest.mark.parametrize("family", ["ku", "ko", "labelling", "premise", "random"])
def test_generated_families_are_valid(tmp_path, capsys, family):
    f = tmp_path / f"{family}.txt"
    assert run(capsys, "gen", "--family", family, "--n", "6", "--out", str(f))[0] == 0
    assert validate(read_instance(f)).valid


def test_gen_biclique(tmp_path, capsys):
    f = tmp_path / "bi.txt"
    assert run(capsys, "gen", "--family", "biclique", "--n", "3", "--nb", "4", "--out", str(f))[0] == 0
    assert validate_bipartite(read_bipartite(f)).valid
    assert run(capsys, "gen", "--family", "biclique", "--n", "3")[0] == 2


def test_gen_ka_needs_a(capsys):
    code, _, err = run(capsys, "gen", "--family", "ka", "--n", "6")
    assert code == 2 and "--a" in err


def test_validate_invalid_exits_1(suite, capsys):
    paths, _ = suite
    code, out, _ = run(capsys, "validate", str(paths["bad_theta"]))
    assert code == 1
    assert out.splitlines()[0].startswith("valid=false")
    assert out.splitlines()[1].startswith("violation theta x=1 y=2")


def test_malformed_file_exits_2_with_line(suite, capsys):
    paths, _ = suite
    code, out, err = run(capsys, "validate", str(paths["malformed"]))
    assert code == 2 and out == ""
    assert err.strip() == f"error: {paths['malformed']}: line 4: vertex 9 exceeds n=5"


def test_missing_file_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.txt"))
    assert code == 2 and err.startswith("error:")


def test_unknown_verb_exits_2():
    proc = run_cli(["frobnicate"])
    assert proc.returncode == 2


def test_bad_flag_values_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["omega", "--n", "99"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["omega", "--n", "5", "--jobs", "0"])
    assert exc.value.code == 2


def test_large_guards(capsys):
    assert run(capsys, "omega", "--n", "9")[0] == 2
    assert run(capsys, "counterexample", "--n", "11", "--all")[0] == 2
    assert run(capsys, "counterexample", "--n", "9", "--all")[0] == 2


def test_classify(suite, capsys):
    paths, _ = suite
    code, out, _ = run(capsys, "classify", str(paths["ka2_6"]))
    assert code == 0
    assert out.splitlines() == ["delta_multiples=2", "labellable=IsKa:2", "constant a=2 per_vertex_check=true"]
    out = run(capsys, "classify", str(paths["ko6"]))[1]
    assert out.splitlines() == ["delta_multiples=none", "labellable=Inconclusive", "constant=none"]
    out = run(capsys, "classify", str(paths["bq10"]))[1]
    assert out.splitlines() == ["delta_multiples=none", "labellable=No", "constant a=6 per_vertex_check=true"]


def test_classify_rejects_bipartite(suite, capsys):
    paths, _ = suite
    assert run(capsys, "classify", str(paths["bi44"]))[0] == 2


def test_search(suite, capsys):
    paths, _ = suite
    out = run(capsys, "search", str(paths["ku6"]), "--r", "5")[1]
    assert out.splitlines()[0] == "kind=Ku witness=1,2,3,4,5"
    out = run(capsys, "search", str(paths["ko6"]), "--s", "6", "--r", "6")[1]
    assert out.splitlines()[0] == "kind=Ko witness=1,2,3,4,5,6"
    out = run(capsys, "search", str(paths["ka3_7"]), "--r", "5", "--s", "5", "--t", "6")[1]
    assert out.splitlines()[0] == "kind=Ka:3 witness=1,2,3,4,5,6"
    assert out.splitlines()[1].startswith("certificate: ")


def test_omega(capsys):
    code, out, _ = run(capsys, "omega", "--n", "5")
    assert code == 0
    assert out.splitlines() == [
        "delta=0: 10 circuits",
        "delta=1: 10 circuits",
        "delta=2: 5 circuits",
        "components=3 match_delta_classes=true",
    ]


def test_verify_lemma_omega(capsys):
    code, out, _ = run(capsys, "verify-lemma", "omega", "--n", "5")
    assert code == 0 and out.splitlines()[-1] == "omega n=5: verified"


@pytest.mark.parametrize("which", ["basic", "paths", "constant", "theta-counts"])
def test_verify_lemmas(capsys, which):
    code, out, _ = run(capsys, "verify-lemma", which, "--n", "6", "--count", "5")
    assert code == 0 and out.splitlines()[-1] == f"{which} n=6: verified"


def test_bipartite_search(suite, capsys):
    paths, _ = suite
    code, out, _ = run(capsys, "bipartite-search", str(paths["bi44"]), "--t", "2")
    assert code == 0 and out.startswith("A=")
    code, out, _ = run(capsys, "bipartite-search", str(paths["bi44"]), "--t", "5")
    assert code == 0 and out == "none\n"
    assert run(capsys, "bipartite-search", str(paths["ku6"]), "--t", "2")[0] == 2


def test_counterexample_single_masks(capsys):
    code, out, _ = run(capsys, "counterexample", "--n", "10", "--q-mask", "6")
    assert code == 0 and out == "6 valid=true labellable=No\n"
    code, out, _ = run(capsys, "counterexample", "--n", "10", "--q-mask", "0")
    assert code == 0 and out == "0 valid=true labellable=IsKa:6\n"
    code, out, _ = run(capsys, "counterexample", "--n", "10", "--q-mask", "1")
    assert code == 1 and out == "1 valid=false labellable=No\n"
    assert run(capsys, "counterexample", "--n", "10")[0] == 2


def test_counterexample_all(capsys):
    code, out, _ = run(capsys, "counterexample", "--n", "10", "--all")
    lines = out.splitlines()
    assert [l.split()[0] for l in lines[:16]] == [str(m) for m in range(16)]
    assert "count 14 >= 4: true" in lines
    # the Q containing the partition with no free vertex in I are not biased graphs
    assert code == 1


def test_module_entry_point():
    proc = run_cli(["verify-lemma", "paths", "--n", "4"])
    assert proc.returncode == 0
    assert proc.stdout.decode().splitlines()[-1] == "paths n=4: verified"


def test_fixture_suite_exit_codes(suite):
    paths, root = suite
    expected_nonzero = {"bad_theta": 1, "malformed": 2}
    for argv in commands(paths, root):
        if argv[0] == "counterexample" and "--all" in argv:
            continue
        proc = run_cli(argv)
        target = next((v for k, v in expected_nonzero.items() if str(paths[k]) in argv), 0)
        assert proc.returncode == target, (argv, proc.stderr)
