"""Sharded runs of the extraction pipelines.

Work is split into contiguous shards, processed in worker processes and
merged in shard order.  Every merge is a commutative monoid operation, so
the result does not depend on the worker count.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from subcat import extraction, morphology, treebank
from subcat.config import RunConfig
from subcat.extraction import FilterTally, RawResult
from subcat.lexicon import FrameLexicon
from subcat.morphology import UnknownPolicy, VerbPolicy
from subcat.trees import TreeNode


def _shards(n: int, workers: int) -> list[tuple[int, int]]:
    if workers <= 1 or n < 2:
        return [(0, n)]
    size = -(-n // workers)
    return [(i, min(n, i + size)) for i in range(0, n, size)]


def _map_shards(fn: Callable, items: Sequence, workers: int, *args) -> list:
    """Apply ``fn(chunk, first_id, *args)`` per shard; results in shard order."""
    bounds = _shards(len(items), workers)
    jobs = [(fn, items[lo:hi], lo + 1, args) for lo, hi in bounds]
    if len(jobs) == 1:
        return [_run_job(jobs[0])]
    ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn")
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs)), mp_context=ctx) as pool:
        return list(pool.map(_run_job, jobs))


def _run_job(job):
    fn, chunk, first_id, args = job
    return fn(chunk, first_id, *args)


def _treebank_job(trees, first_id, config):
    return treebank.process_treebank(trees, config, first_id)


def _raw_job(sentences, first_id, analyzer, heuristics, policy, fractional):
    return extraction.extract_raw(sentences, analyzer, heuristics, policy, fractional, first_id)


def _filter_job(sentences, first_id, analyzer, policy):
    return extraction.filter_tally(sentences, analyzer, policy)


def _ambiguity_job(tokens, first_id, analyzer, unknown):
    return morphology.ambiguity_tally(tokens, analyzer, unknown)


def run_treebank(trees: list[TreeNode], cfg: RunConfig) -> treebank.TreebankResult:
    result = treebank.TreebankResult()
    for part in _map_shards(_treebank_job, trees, cfg.workers, cfg.extraction_config()):
        result = result + part
    return result


def run_raw(sentences: list[list[str]], analyzer, cfg: RunConfig) -> RawResult:
    parts = _map_shards(_raw_job, sentences, cfg.workers, analyzer, cfg.heuristics(),
                        VerbPolicy(cfg.policy), cfg.fractional)
    result = RawResult(FrameLexicon(cfg.fractional), FilterTally(), [])
    for part in parts:
        result = result + part
    return result


def filter_shards(sentences, analyzer, cfg: RunConfig) -> list:
    return _map_shards(_filter_job, sentences, cfg.workers, analyzer, VerbPolicy(cfg.policy))


def ambiguity_shards(tokens, analyzer, cfg: RunConfig) -> list:
    return _map_shards(_ambiguity_job, tokens, cfg.workers, analyzer, UnknownPolicy(cfg.unknown))
