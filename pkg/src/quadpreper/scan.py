"""Batch computation of preperiodic graphs over ranges of (D, c)."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Iterable, Iterator, Optional, Sequence

from .errors import QuadPreperError
from .graphs import (
    Catalog,
    Outcome,
    canonical_form,
    classify,
    cycle_structure,
    is_strongly_admissible,
    main_theorem_screen,
)
from .preper import DEFAULT_MAX_BOX, graph_of
from .qfield import RATIONAL, QuadElem, format_elem, parse_elem, squarefree_kernel


@dataclass(frozen=True)
class ScanTask:
    D: int
    c: str
    max_box: int = DEFAULT_MAX_BOX


def field_range(lo: int, hi: int) -> list[int]:
    """Field descriptors in ``lo..hi``: squarefree integers, with 1 standing for Q."""
    return [d for d in range(lo, hi + 1) if d != 0 and squarefree_kernel(d) == d]


def c_values(num_bound: int, denominators: Sequence[int]) -> list[Fraction]:
    vals = {Fraction(n, d) for d in denominators for n in range(-num_bound, num_bound + 1)}
    return sorted(vals)


def task_key(task: ScanTask) -> tuple:
    return (abs(task.D), task.D, parse_elem(task.c, task.D).sort_key())


def make_tasks(
    discs: Iterable[int], cs: Iterable, max_box: int = DEFAULT_MAX_BOX
) -> list[ScanTask]:
    """One task per (D, c), in the output order (|D|, D, c)."""
    cs = list(cs)
    tasks = []
    for D in discs:
        for c in cs:
            text = c if isinstance(c, str) else format_elem(QuadElem(Fraction(c), 0, D) if not isinstance(c, QuadElem) else c)
            tasks.append(ScanTask(D, text, max_box))
    return sorted(set(tasks), key=task_key)


def graph_record(D: int, c, catalog: Catalog, max_box: int = DEFAULT_MAX_BOX, timing: bool = False) -> dict:
    """The JSON report for one pair: size, cycles, label, canonical form and screen outcome."""
    start = time.perf_counter()
    if isinstance(c, str):
        c = parse_elem(c, D)
    G = graph_of(D, c, max_box=max_box)
    screen = main_theorem_screen(G, catalog)
    rec = {
        "disc": D,
        "c": format_elem(c) if isinstance(c, QuadElem) else str(c),
        "vertices": len(G),
        "cycle_structure": cycle_structure(G),
        "label": classify(G, catalog),
        "canonical": canonical_form(G),
        "strongly_admissible": is_strongly_admissible(G),
        "screen": str(screen),
        "ms": None,
    }
    if timing:
        rec["ms"] = round(1000 * (time.perf_counter() - start), 3)
    return rec


_worker_catalog: Optional[Catalog] = None
_worker_timing = False


def _init_worker(catalog: Catalog, timing: bool) -> None:
    global _worker_catalog, _worker_timing
    _worker_catalog, _worker_timing = catalog, timing


def _run(task: ScanTask) -> dict:
    try:
        return graph_record(task.D, task.c, _worker_catalog, task.max_box, _worker_timing)
    except QuadPreperError as exc:
        return {"disc": task.D, "c": task.c, "error": f"{type(exc).__name__}: {exc}"}


def run_tasks(
    tasks: Sequence[ScanTask], catalog: Catalog, workers: int = 1, timing: bool = False
) -> Iterator[dict]:
    """Records in task order; ``workers > 1`` spreads the work over processes."""
    if workers <= 1:
        _init_worker(catalog, timing)
        for task in tasks:
            yield _run(task)
        return
    with Pool(workers, initializer=_init_worker, initargs=(catalog, timing)) as pool:
        yield from pool.imap(_run, tasks, chunksize=32)


def is_violation(record: dict) -> bool:
    return record.get("screen") == Outcome.VIOLATION.value


def dumps_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True)


def record_key(record: dict) -> tuple[int, str]:
    return (record["disc"], record["c"])


__all__ = [
    "RATIONAL",
    "ScanTask",
    "c_values",
    "dumps_record",
    "field_range",
    "graph_record",
    "is_violation",
    "make_tasks",
    "record_key",
    "run_tasks",
    "task_key",
]
