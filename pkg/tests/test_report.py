from bdhyper.suites import run_cli


def test_report_writes_tables_and_figures(tmp_path):
    code, out, _ = run_cli(["report", "--out", str(tmp_path)])
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["locality.png", "locality.tsv", "multi_edge.png",
                     "multi_edge.tsv", "tester.png", "tester.tsv"]
    assert (tmp_path / "locality.png").read_bytes()[:4] == b"\x89PNG"
    rows = (tmp_path / "multi_edge.tsv").read_text().splitlines()
    assert rows[0] == "n\trate" and len(rows) == 6
    rates = [float(r.split("\t")[1]) for r in rows[1:]]
    assert rates[0] > rates[-1]
    assert out.splitlines()[0].endswith("locality.tsv")
