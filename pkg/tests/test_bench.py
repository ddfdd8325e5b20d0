import io

import pytest

from greennet.bench import bench_case, run_bench, write_csv
from greennet.errors import UsageError
from greennet.generators import bench_rng, random_attachment, random_network


class TestRunBench:
    def test_small_network_agrees_with_oracle(self):
        rows = run_bench([2], [1], trials=1, seed=0)
        assert len(rows) == 1
        assert rows[0].max_dev <= 1e-9
        assert rows[0].speedup > 0

    @pytest.mark.parametrize("lam", [0.0, 1.0])
    def test_larger_networks(self, lam):
        for row in run_bench([12, 30], [1, 5], trials=2, seed=4, lam=lam):
            assert row.max_dev <= 1e-9

    def test_skips_more_anchors_than_vertices(self):
        rows = run_bench([3], [1, 4], trials=1)
        assert [row.m for row in rows] == [1]

    @pytest.mark.parametrize("kwargs", [dict(n_list=[1], m_list=[1]), dict(n_list=[3], m_list=[0]), dict(n_list=[3], m_list=[1], trials=0)])
    def test_rejects_bad_sizes(self, kwargs):
        with pytest.raises(UsageError):
            run_bench(**kwargs)

    def test_csv_columns(self):
        stream = io.StringIO()
        write_csv(run_bench([2], [1], trials=1), stream)
        header, row = stream.getvalue().splitlines()
        assert header == "n,m,t_update_ms,t_recompute_ms,speedup,max_dev"
        assert row.startswith("2,1,")


class TestDeterminism:
    def test_same_seed_same_network(self):
        first = random_network(20, bench_rng(7, 20, 3, 1), extra_edge_prob=0.05)
        second = random_network(20, bench_rng(7, 20, 3, 1), extra_edge_prob=0.05)
        assert first == second

    def test_trial_changes_network(self):
        first = random_network(20, bench_rng(7, 20, 3, 0), extra_edge_prob=0.05)
        second = random_network(20, bench_rng(7, 20, 3, 1), extra_edge_prob=0.05)
        assert first != second

    def test_same_attachment(self):
        rng_a, rng_b = bench_rng(1, 10, 2, 0), bench_rng(1, 10, 2, 0)
        spec = random_network(10, rng_a)
        random_network(10, rng_b)
        assert random_attachment(spec, rng_a, m=2) == random_attachment(spec, rng_b, m=2)

    def test_deviation_is_reproducible(self):
        assert bench_case(8, 2, 0, seed=11)[2] == bench_case(8, 2, 0, seed=11)[2]


@pytest.mark.slow
class TestSpeedup:
    @pytest.mark.parametrize("m", [1, 5])
    def test_update_beats_recompute_at_1000(self, m):
        row = run_bench([1000], [m], trials=1, seed=0)[0]
        assert row.speedup > 1
        assert row.max_dev <= 1e-8
