import csv
import io
import random

import pytest

from e2ibs import bench, scheme
from e2ibs.cli import bench_main, sim_main
from e2ibs.errors import ConfigurationError


@pytest.fixture(scope="module")
def reports():
    return bench.bench_all(iters=bench.MIN_ITERS, seed=1)


def test_sizes(reports):
    by = {r.scheme: r for r in reports}
    assert (by["e2ibs"].sig_bytes, by["e2ibs"].pk_bytes, by["e2ibs"].payload_bytes) == (64, 32, 111)
    assert by["hier2"].payload_bytes > by["e2ibs"].payload_bytes
    assert all(r.correct for r in reports)
    assert by["e2ibs"].extract_per_sec > 0


def test_csv_shape(reports):
    text = bench.emit_table(reports)
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 1 + len(reports)
    assert len({len(r) for r in rows}) == 1
    assert rows[0] == [f for f in bench.BenchReport.__dataclass_fields__]
    assert bench.emit_table(reports[:1]).splitlines()[0] == text.splitlines()[0]
    assert len(bench.emit_table(reports[:1]).splitlines()) == 2
    assert "e2ibs" in bench.emit_table(reports, "text")


def test_empty_table():
    with pytest.raises(ValueError):
        bench.emit_table([])


def test_guards():
    with pytest.raises(ConfigurationError):
        bench.bench_scheme("e2ibs", iters=10)
    with pytest.raises(ConfigurationError):
        bench.bench_scheme("rsa")


def test_wrong_verifier_is_caught(monkeypatch):
    monkeypatch.setattr(bench._Harness, "verify", lambda self, m, s: True)
    r = bench.bench_scheme("schnorr-plain", iters=bench.MIN_ITERS)
    assert not r.correct


def test_extraction_cache_ab():
    m = scheme.setup(rng=random.Random(3))
    # best of three each, interleaved, to keep host noise out of the comparison
    on, off = [], []
    for _ in range(3):
        on.append(bench.bench_extraction(m, 1000, seed=1, cache=True))
        off.append(bench.bench_extraction(m, 1000, seed=1, cache=False))
    assert max(on) >= max(off)


def test_bench_cli(tmp_path):
    out = tmp_path / "o.csv"
    assert bench_main(["run", "--scheme", "schnorr-plain", "--iters", "1000", "--csv", str(out)]) == 0
    assert out.read_text().startswith("scheme,iters")
    with pytest.raises(SystemExit):
        bench_main(["run", "--iters", "5"])


def test_sim_cli(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert sim_main(["run", "honest", "--seed", "4", "--trace", str(a)]) == 0
    assert sim_main(["run", "honest", "--seed", "4", "--trace", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
