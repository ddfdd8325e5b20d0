"""
Closed-form vertex addition against from-scratch recomputation.

For each (n, m) and trial a random network is generated from bench_rng(seed, n, m, trial), G is
computed once, and the two paths are timed: added_vertex_pinv given G, and pinv_oracle on the
(n+1) x (n+1) Schrodinger matrix of the grown network. Rows report median times over trials.
"""
import csv
import logging
import time
from typing import List, Sequence, TextIO

import numpy as np

from greennet.errors import UsageError
from greennet.funspace import max_abs
from greennet.generators import bench_rng, random_attachment, random_network
from greennet.green import green_direct, pinv_oracle
from greennet.network import schrodinger_matrix
from greennet.schemas import BenchRow
from greennet.vertex_addition import added_vertex_pinv, extended_network

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("n", "m", "t_update_ms", "t_recompute_ms", "speedup", "max_dev")


def _check_sizes(n_list: Sequence[int], m_list: Sequence[int], trials: int) -> None:
    if trials < 1:
        raise UsageError(f"trials must be at least 1, got {trials}")
    if not n_list or not m_list:
        raise UsageError("bench needs at least one n and one m")
    if min(n_list) < 2:
        raise UsageError(f"network sizes must be at least 2, got {min(n_list)}")
    if min(m_list) < 1:
        raise UsageError(f"anchor counts must be at least 1, got {min(m_list)}")


def bench_case(n: int, m: int, trial: int, seed: int, lam: float = 0.0, extra_edge_prob: float = 0.05):
    """(t_update_ms, t_recompute_ms, max_dev) for one trial"""
    rng = bench_rng(seed, n, m, trial)
    spec = random_network(n, rng, extra_edge_prob=extra_edge_prob, lam=lam)
    att = random_attachment(spec, rng, m=m)
    g = green_direct(schrodinger_matrix(spec), spec.lam, spec.omega)
    lp = schrodinger_matrix(extended_network(spec, att))

    start = time.perf_counter()
    update = added_vertex_pinv(g, spec, att)
    t_update = (time.perf_counter() - start) * 1000.0

    start = time.perf_counter()
    reference = pinv_oracle(lp)
    t_recompute = (time.perf_counter() - start) * 1000.0

    return t_update, t_recompute, max_abs(update - reference)


def run_bench(
    n_list: Sequence[int],
    m_list: Sequence[int],
    trials: int = 3,
    seed: int = 0,
    lam: float = 0.0,
    extra_edge_prob: float = 0.05,
) -> List[BenchRow]:
    _check_sizes(n_list, m_list, trials)
    rows = []
    for n in n_list:
        for m in m_list:
            if m > n:
                logger.warning(f"Skipping n={n}, m={m}: more anchors than vertices")
                continue
            samples = np.array([bench_case(n, m, trial, seed, lam, extra_edge_prob) for trial in range(trials)])
            t_update = float(np.median(samples[:, 0]))
            t_recompute = float(np.median(samples[:, 1]))
            row = BenchRow(
                n=n,
                m=m,
                t_update_ms=t_update,
                t_recompute_ms=t_recompute,
                speedup=t_recompute / t_update if t_update > 0 else float("inf"),
                max_dev=float(samples[:, 2].max()),
            )
            logger.info(f"Bench n={n} m={m}: update {t_update:.3f} ms, recompute {t_recompute:.3f} ms, speedup {row.speedup:.2f}, max_dev {row.max_dev:.3e}")
            rows.append(row)
    return rows


def write_csv(rows: Sequence[BenchRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([row.n, row.m, f"{row.t_update_ms:.6f}", f"{row.t_recompute_ms:.6f}", f"{row.speedup:.4f}", f"{row.max_dev:.3e}"])
