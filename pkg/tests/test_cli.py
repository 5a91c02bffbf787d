import subprocess
import sys

import pytest

from bdhyper.core import complete_hypergraph, format_graph, gaifman, parse_instance
from bdhyper.core import format_hypergraph
from bdhyper.suites import run_cli


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def test_gen_appendix_b_and_bad_n():
    code, out, _ = run_cli(["gen", "appendix-b", "--n", "30", "--d", "3",
                            "--seed", "7"])
    h = parse_instance(out)
    assert code == 0 and set(h.degrees()[1:]) == {3}
    code, _, err = run_cli(["gen", "appendix-b", "--n", "31", "--d", "3"])
    assert code == 2 and "error" in err


def test_gen_writes_file(tmp_path):
    out = tmp_path / "far.hgr"
    assert run_cli(["gen", "far-tw", "--n", "40", "--out", str(out)])[0] == 0
    code, text, _ = run_cli(["solve", "k-partite", "--distance", str(out)])
    assert code == 1 and text == "distance=1/6\n"


def test_gen_requires_n():
    assert run_cli(["gen", "far-tw"])[0] == 2


def test_reduce_three_par(files, tmp_path):
    k3 = files("k3.gr", "p gr 3 2 3\n1 2\n1 3\n2 3\n")
    out = tmp_path / "out.hgr"
    assert run_cli(["reduce", "three-par", k3, str(out)])[0] == 0
    assert parse_instance(out.read_text()).edges == ((1, 2, 4), (1, 3, 5),
                                                     (2, 3, 7))


def test_reduce_gaifman(files):
    h = complete_hypergraph(3, 4)
    p = files("k4.hgr", format_hypergraph(h))
    code, out, _ = run_cli(["reduce", "gaifman", p])
    assert out == format_graph(gaifman(h))


def test_reduce_mismatch_and_parse_error(files):
    k3 = files("k3.gr", "p gr 3 2 3\n1 2\n1 3\n2 3\n")
    assert run_cli(["reduce", "ind", k3])[0] == 2
    assert run_cli(["reduce", "three-par", files("x.gr", "junk\n")])[0] == 2
    assert run_cli(["reduce", "k-par", k3, "--adapter"])[0] == 2
    assert run_cli(["reduce", "three-par", "/nonexistent/file"])[0] == 2


def test_adapter_session(files):
    k3 = files("k3.gr", "p gr 3 2 3\n1 2\n1 3\n2 3\n")
    code, out, trace = run_cli(["reduce", "three-par", k3, "--adapter",
                                "--trace", "-"], "4 1\n4 2\n")
    assert code == 0 and out == "1 2 4\n_\n"
    assert trace.splitlines()[0] == "Q base 1 1 -> 2"
    assert run_cli(["reduce", "three-par", k3, "--adapter"], "4\n")[0] == 2


def test_adapter_three_col(files):
    cnf = files("f.cnf", "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n")
    code, out, _ = run_cli(["reduce", "three-col", cnf, "--adapter"], "1 1\n")
    assert code == 0 and len(out.split()) == 3


def test_solve_codes(files):
    k4 = files("k4.hgr", "p hgr 3 4 3 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n")
    one = files("one.hgr", "p hgr 3 3 1 1\n1 2 3\n")
    assert run_cli(["solve", "k-partite", k4])[0] == 1
    code, out, _ = run_cli(["solve", "k-partite", one])
    assert code == 0 and out.splitlines()[0] == "verdict=yes"
    code, out, _ = run_cli(["solve", "independence", k4, "--threshold", "2"])
    assert code == 0 and out.count("s set") == 2
    assert run_cli(["solve", "independence", k4, "--threshold", "x"])[0] == 2
    assert run_cli(["solve", "graph-colorable", k4])[0] == 2


def test_solve_capacity(files):
    run = run_cli(["gen", "far-tw", "--n", "40"])[1]
    far = files("far.hgr", run)
    code, _, err = run_cli(["solve", "k-partite", far, "--budget", "5"])
    assert code == 3 and err.startswith("capacity")


def test_test_command(files):
    yes = files("yes.hgr", run_cli(["gen", "yes-tw", "--n", "60",
                                    "--seed", "2"])[1])
    far = files("far.hgr", run_cli(["gen", "far-tw", "--n", "120"])[1])
    assert run_cli(["test", yes, "--seed", "4"])[0] == 0
    code, out, _ = run_cli(["test", far, "--epsilon", "0.05", "--trials",
                            "100"])
    freq = [l for l in out.splitlines() if l.startswith("rejection_frequency")]
    assert code == 1 and freq == ["rejection_frequency=1"]
    assert run_cli(["test", files("bad.hgr", "p hgr 3\n")])[0] == 2
    assert run_cli(["test", far, "--epsilon", "2"])[0] == 2
    assert run_cli(["test", far, "--trials", "0"])[0] == 2


def test_test_through_adapter(files):
    k3 = files("k3.gr", "p gr 3 2 3\n1 2\n1 3\n2 3\n")
    assert run_cli(["test", k3, "--adapter", "three-par"])[0] == 0
    assert run_cli(["test", k3])[0] == 2


def test_console_script_verify():
    r = subprocess.run([sys.executable, "-m", "bdhyper", "verify", "gadgets"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("suite gadgets: PASS")


def test_version():
    r = subprocess.run([sys.executable, "-m", "bdhyper", "--version"],
                       capture_output=True, text=True)
    assert r.stdout.startswith("bdhyper ")
