import csv

import pytest

from lindecomp import bench
from lindecomp.bench import BenchRecord, bench_span_closure, check_bounds, loglog_slope, summarize

COUNTERS = ("basis_dim", "productive_lists", "candidates", "max_list_candidates", "max_list_generated")


def test_small_cell_respects_ambient_bound():
    for rec in bench_span_closure([(2, 1, 1009)], seeds_per_cell=5):
        assert rec.error is None
        assert rec.basis_dim <= 4
        assert rec.violations == []


def test_default_grid_has_no_violations():
    records = bench_span_closure(bench.DEFAULT_GRID, seeds_per_cell=2)
    assert len(records) == 2 * len(bench.DEFAULT_GRID)
    for rec in records:
        assert rec.error is None, rec.error
        assert rec.violations == []
        assert rec.productive_lists <= rec.r
        assert rec.max_list_candidates <= 4 * rec.k**2 * rec.r


def test_fixed_seed_is_deterministic():
    grid = [(3, 2, 1009), (4, 1, 1009)]
    a, b = bench_span_closure(grid, 2, seed=7), bench_span_closure(grid, 2, seed=7)
    for r1, r2 in zip(a, b):
        assert [getattr(r1, c) for c in COUNTERS] == [getattr(r2, c) for c in COUNTERS]


def test_check_bounds_flags_each_violation():
    rec = BenchRecord(2, 1, 1009, 0, basis_dim=5, productive_lists=5, max_list_candidates=17, closure_ok=False)
    assert len(check_bounds(rec)) == 4
    assert check_bounds(BenchRecord(2, 1, 1009, 0, basis_dim=4, productive_lists=4, max_list_candidates=16)) == []


def test_invalid_cell():
    with pytest.raises(ValueError):
        bench_span_closure([(1, 1, 1009)])


def test_csv_layout(tmp_path):
    records = bench_span_closure([(2, 1, 1009), (3, 1, 1009)], 1)
    path = tmp_path / "bench.csv"
    bench.write_csv(records, path)
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == bench.CSV_FIELDS
    assert len(rows) == 3
    assert [int(x) for x in rows[1][:4]] == [2, 1, 1009, 0]


def test_loglog_slope():
    assert loglog_slope([4, 9, 16], [16, 81, 256]) == pytest.approx(2.0)
    assert loglog_slope([4, 4], [1, 2]) is None


def test_summary_structure():
    summary = summarize(bench_span_closure([(2, 1, 1009), (3, 1, 1009)], 2))
    assert summary["violations"] == [] and summary["errors"] == []
    assert [c["r"] for c in summary["cells"]] == [4, 9]
    assert set(summary["loglog_slope_time_vs_r"]) == {"1"}


def test_compare_backends_covers_every_backend():
    from lindecomp import kernels

    out = bench.compare_backends([(2, 1, 1009)], seeds_per_cell=1)
    assert set(out) == set(kernels.available())
    for timings in out.values():
        assert list(timings) == ["2,1,1009"]
