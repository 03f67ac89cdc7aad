"""Functional graphs of preperiodic points.

A graph here is a finite set with a successor map (out-degree one), as
produced by f_c on a forward-closed point set.  The module covers
isomorphism-invariant canonical strings, the admissibility conditions that
every preperiodic graph of a quadratic polynomial obeys, minimal admissible
closures of generator sets, subgraph embedding, the catalog of known graphs
and the screening of new graphs against it.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .dynatomic import max_cycles
from .errors import DataIntegrityError, GeneratorSpecError, GraphError
from .preper import PointType

EMPTY_CANONICAL = "empty"
CATALOG_ENV = "QUADPREPER_CATALOG"


@dataclass
class PreperGraph:
    """Vertices, successor map and optional point labels and types."""

    vertices: list
    succ: dict
    labels: dict = field(default_factory=dict)
    types: dict = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertices")
        for v in self.vertices:
            if v not in self.succ:
                raise GraphError(f"vertex {v!r} has no successor")
            if self.succ[v] not in vs:
                raise GraphError(f"successor of {v!r} is not a vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    def preds(self) -> dict:
        out = {v: [] for v in self.vertices}
        for v in self.vertices:
            out[self.succ[v]].append(v)
        return out

    def in_degrees(self) -> dict:
        return {v: len(p) for v, p in self.preds().items()}

    def cycles(self) -> list[list]:
        """Each cycle as a vertex list in successor order, starting at its least-indexed vertex."""
        state: dict = {}
        out = []
        for start in self.vertices:
            if start in state:
                continue
            path, pos = [], {}
            v = start
            while v not in state and v not in pos:
                pos[v] = len(path)
                path.append(v)
                v = self.succ[v]
            if v in pos:
                out.append(path[pos[v] :])
            for u in path:
                state[u] = True
        return out

    def periodic(self) -> set:
        return {v for cyc in self.cycles() for v in cyc}

    def induced(self, keep: Iterable) -> "PreperGraph":
        keep = [v for v in self.vertices if v in set(keep)]
        return PreperGraph(
            keep,
            {v: self.succ[v] for v in keep},
            {v: self.labels[v] for v in keep if v in self.labels},
            {v: self.types[v] for v in keep if v in self.types},
        )


def compute_types(G: PreperGraph) -> dict:
    """Period and preperiod of every vertex, from the graph structure alone."""
    out = {}
    for cyc in G.cycles():
        for v in cyc:
            out[v] = PointType(len(cyc), 0)
    preds = G.preds()
    frontier = list(out)
    while frontier:
        nxt = []
        for v in frontier:
            for u in preds[v]:
                if u not in out:
                    out[u] = PointType(out[v].period, out[v].preperiod + 1)
                    nxt.append(u)
        frontier = nxt
    return out


# -- canonical form ----------------------------------------------------------------


def _tree_codes(G: PreperGraph) -> dict:
    periodic = G.periodic()
    preds = G.preds()
    codes: dict = {}

    def code(v):
        if v in codes:
            return codes[v]
        kids = sorted(code(u) for u in preds[v] if u not in periodic)
        codes[v] = "(" + "".join(kids) + ")"
        return codes[v]

    for v in G.vertices:
        code(v)
    return codes


def canonical_form(G: PreperGraph) -> str:
    """A string equal for two graphs iff they are isomorphic.

    Each vertex gets the sorted-children parenthesis code of its tree of
    non-periodic ancestors; each cycle reads off the lexicographically least
    rotation of its vertex codes; components are sorted and concatenated.
    """
    if not G.vertices:
        return EMPTY_CANONICAL
    import sys

    if len(G.vertices) + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(len(G.vertices) + 1000)
    codes = _tree_codes(G)
    comps = []
    for cyc in G.cycles():
        seq = [codes[v] for v in cyc]
        best = min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))
        comps.append("<" + "".join(best) + ">")
    return "".join(sorted(comps))


def _split_balanced(s: str) -> list[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                out.append(s[start : i + 1])
        if depth < 0:
            raise GraphError(f"malformed canonical string {s!r}")
    if depth:
        raise GraphError(f"malformed canonical string {s!r}")
    return out


def graph_from_canonical(text: str) -> PreperGraph:
    """Rebuild a graph (integer vertices) from its canonical string."""
    if text == EMPTY_CANONICAL:
        return PreperGraph([], {})
    succ: dict[int, int] = {}
    counter = itertools.count()

    def grow(code: str, parent: int):
        for child in _split_balanced(code[1:-1]):
            v = next(counter)
            succ[v] = parent
            grow(child, v)

    pos = 0
    while pos < len(text):
        if text[pos] != "<":
            raise GraphError(f"malformed canonical string {text!r}")
        end = text.index(">", pos)
        blocks = _split_balanced(text[pos + 1 : end])
        if not blocks:
            raise GraphError(f"empty cycle in {text!r}")
        ids = [next(counter) for _ in blocks]
        for i, v in enumerate(ids):
            succ[v] = ids[(i + 1) % len(ids)]
        for v, block in zip(ids, blocks):
            grow(block, v)
        pos = end + 1
    verts = sorted(succ)
    G = PreperGraph(verts, succ)
    G.types = compute_types(G)
    return G


def cycle_structure(G: PreperGraph) -> list[int]:
    """Cycle lengths in nondecreasing order."""
    return sorted(len(c) for c in G.cycles())


def shape_label(G: PreperGraph) -> str:
    """``N(l1,l2,...)`` with the vertex count and cycle lengths in nonincreasing order."""
    if not G.vertices:
        return "0"
    cyc = ",".join(str(n) for n in sorted(cycle_structure(G), reverse=True))
    return f"{len(G)}({cyc})"


def is_admissible(G: PreperGraph) -> bool:
    """In-degrees are 0 or 2, and no period N >= 2 has more cycles than the generic maximum."""
    if any(d not in (0, 2) for d in G.in_degrees().values()):
        return False
    counts: dict[int, int] = {}
    for n in cycle_structure(G):
        counts[n] = counts.get(n, 0) + 1
    return all(k <= max_cycles(n) for n, k in counts.items() if n >= 2)


def is_strongly_admissible(G: PreperGraph) -> bool:
    """Admissible with either no fixed points or exactly two."""
    return is_admissible(G) and cycle_structure(G).count(1) in (0, 2)


# -- generated graphs --------------------------------------------------------------


@dataclass
class GeneratorSpec:
    """Point types generating a graph.

    With ``disjoint`` (the default) every generator lies over its own cycle,
    so two generators of type ``1_0`` are the two distinct fixed points.
    Otherwise generators of equal period share one cycle and their tails
    share a common path into it.
    """

    types: list
    disjoint: bool = True

    def __post_init__(self):
        self.types = [PointType.parse(t) if isinstance(t, str) else t for t in self.types]
        if not self.types:
            raise GeneratorSpecError("at least one generator is required")


def admissible_closure(spec: GeneratorSpec) -> tuple[PreperGraph, list]:
    """Smallest admissible graph containing points of the requested types.

    Returns the graph and the vertices playing the generators.
    """
    succ: dict[int, int] = {}
    counter = itertools.count()
    cycles: dict = {}
    gens = []

    def new_cycle(m):
        ids = [next(counter) for _ in range(m)]
        for i, v in enumerate(ids):
            succ[v] = ids[(i + 1) % m]
        return ids

    shared_tails: dict = {}
    per_period: dict[int, int] = {}
    for idx, pt in enumerate(spec.types):
        key = idx if spec.disjoint else pt.period
        if key not in cycles:
            cycles[key] = new_cycle(pt.period)
            per_period[pt.period] = per_period.get(pt.period, 0) + 1
        cyc = cycles[key]
        if pt.preperiod == 0:
            gens.append(cyc[0])
            continue
        tail = shared_tails.setdefault(key, [])
        target = cyc[0]
        for depth in range(1, pt.preperiod + 1):
            if depth <= len(tail):
                target = tail[depth - 1]
                continue
            v = next(counter)
            succ[v] = target
            tail.append(v)
            target = v
        gens.append(target)
    for n, k in per_period.items():
        cap = 2 if n == 1 else max_cycles(n)
        if k > cap:
            raise GeneratorSpecError(f"{k} cycles of length {n} exceed the maximum {cap}")
    indeg: dict[int, int] = {v: 0 for v in succ}
    for v in list(succ):
        indeg[succ[v]] += 1
    for v in list(succ):
        if indeg[v] == 1:
            leaf = next(counter)
            succ[leaf] = v
    verts = sorted(succ)
    G = PreperGraph(verts, succ)
    G.types = compute_types(G)
    if not is_admissible(G):
        raise GeneratorSpecError("generators do not fit in an admissible graph")
    for g, pt in zip(gens, spec.types):
        if G.types[g] != pt:
            raise GeneratorSpecError(f"generator type {pt} could not be realised")
    return G, gens


def forward_closure(G: PreperGraph, start: Iterable) -> set:
    out = set()
    for v in start:
        while v not in out:
            out.add(v)
            v = G.succ[v]
    return out


def is_minimal_closure(G: PreperGraph, generators: Sequence, max_vertices: int = 14) -> bool:
    """No proper forward-closed admissible subgraph still contains the generators.

    Exhaustive over vertex subsets, so only run on small graphs.
    """
    if len(G) > max_vertices:
        raise GraphError(f"exhaustive minimality check limited to {max_vertices} vertices")
    required = forward_closure(G, generators)
    optional = [v for v in G.vertices if v not in required]
    for k in range(len(optional)):
        for extra in itertools.combinations(optional, k):
            keep = required | set(extra)
            if any(G.succ[v] not in keep for v in keep):
                continue
            if is_admissible(G.induced(keep)):
                return False
    return True


# -- embeddings --------------------------------------------------------------------


def subgraph_contains(G: PreperGraph, H: PreperGraph, proper: bool = False) -> bool:
    """Is there an injective map from H into G commuting with the successor maps?"""
    if len(H) > len(G) or (proper and len(H) == len(G)):
        return False
    if not H.vertices:
        return True
    g_preds = G.preds()
    h_preds = H.preds()
    g_cycles = G.cycles()
    h_cycles = sorted(H.cycles(), key=len, reverse=True)
    h_periodic = H.periodic()

    tree_order = []
    frontier = [v for c in h_cycles for v in c]
    while frontier:
        nxt = []
        for v in frontier:
            for u in h_preds[v]:
                if u not in h_periodic:
                    tree_order.append(u)
                    nxt.append(u)
        frontier = nxt

    phi: dict = {}
    used: set = set()

    def place_trees(i: int) -> bool:
        if i == len(tree_order):
            return True
        u = tree_order[i]
        for cand in g_preds[phi[H.succ[u]]]:
            if cand in used:
                continue
            phi[u] = cand
            used.add(cand)
            if place_trees(i + 1):
                return True
            used.discard(cand)
            del phi[u]
        return False

    def place_cycles(i: int, free: list) -> bool:
        if i == len(h_cycles):
            return place_trees(0)
        hc = h_cycles[i]
        for j, gc in enumerate(free):
            if gc is None or len(gc) != len(hc):
                continue
            rest = free[:j] + [None] + free[j + 1 :]
            for r in range(len(gc)):
                for k, v in enumerate(hc):
                    phi[v] = gc[(r + k) % len(gc)]
                    used.add(phi[v])
                if place_cycles(i + 1, rest):
                    return True
                for v in hc:
                    used.discard(phi.pop(v))
        return False

    return place_cycles(0, list(g_cycles))


# -- catalog -------------------------------------------------------------------------


CATALOG_LABELS = (
    "0 2(1) 3(1,1) 3(2) 4(1) 4(1,1) 4(2) 5(1,1)a 5(1,1)b 5(2)a 5(2)b 6(1,1) 6(2) 6(2,1) 6(3) "
    "7(1,1)a 7(1,1)b 7(2,1,1)a 7(2,1,1)b 8(1,1)a 8(1,1)b 8(2)a 8(2)b 8(2,1,1) 8(3) 8(4) 9(2,1,1) "
    "10(1,1)a 10(1,1)b 10(2) 10(2,1,1)a 10(2,1,1)b 10(3)a 10(3)b 10(3,1,1) 10(3,2) 12(2) "
    "12(2,1,1)a 12(2,1,1)b 12(3) 12(4) 12(4,2) 12(6) 14(2,1,1) 14(3,1,1) 14(3,2)"
).split()

_MISSING = "-"


@dataclass(frozen=True)
class CatalogEntry:
    """A labelled graph, with a pair (D, c) realizing it when one is known."""

    label: str
    canonical: str
    D: Optional[int] = None
    c: Optional[str] = None

    def __post_init__(self):
        graph_from_canonical(self.canonical)

    @property
    def shape(self) -> str:
        return self.label.rstrip("abcdefghijklmnopqrstuvwxyz")


class Catalog:
    """Known preperiodic graphs keyed by canonical form."""

    def __init__(self, entries: Iterable[CatalogEntry] = ()):
        self.entries: list[CatalogEntry] = []
        self._by_canon: dict[str, CatalogEntry] = {}
        self._by_label: dict[str, CatalogEntry] = {}
        for e in entries:
            self.add(e)

    def add(self, entry: CatalogEntry) -> None:
        if entry.label in self._by_label:
            raise DataIntegrityError(f"duplicate catalog label {entry.label}")
        if entry.canonical in self._by_canon:
            other = self._by_canon[entry.canonical].label
            raise DataIntegrityError(f"labels {other} and {entry.label} describe the same graph")
        self.entries.append(entry)
        self._by_canon[entry.canonical] = entry
        self._by_label[entry.label] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def lookup(self, canonical: str) -> Optional[CatalogEntry]:
        return self._by_canon.get(canonical)

    def entry(self, label: str) -> CatalogEntry:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"label {label} is not in the catalog") from None

    @lru_cache(maxsize=None)
    def graph(self, label: str) -> PreperGraph:
        return graph_from_canonical(self.entry(label).canonical)

    def __hash__(self):
        return id(self)

    @classmethod
    def parse(cls, text: str, source: str = "<catalog>") -> "Catalog":
        cat = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataIntegrityError(f"{source}:{lineno}: expected 4 tab-separated fields")
            label, canonical, D, c = parts
            try:
                if D == _MISSING:
                    entry = CatalogEntry(label, canonical)
                else:
                    entry = CatalogEntry(label, canonical, int(D), c)
            except (ValueError, GraphError) as exc:
                raise DataIntegrityError(f"{source}:{lineno}: {exc}") from exc
            cat.add(entry)
        return cat

    def dumps(self) -> str:
        lines = ["# label\tcanonical\tD\tc"]
        for e in self.entries:
            D = _MISSING if e.D is None else e.D
            c = _MISSING if e.c is None else e.c
            lines.append(f"{e.label}\t{e.canonical}\t{D}\t{c}")
        return "\n".join(lines) + "\n"

    def next_label(self, G: PreperGraph) -> str:
        """``N(cycles)`` plus the next free letter for a graph not yet listed."""
        shape = shape_label(G)
        taken = [e.label for e in self.entries if e.shape == shape]
        if not taken:
            return shape
        for k in range(len(taken), 26):
            label = shape + chr(ord("a") + k)
            if label not in self._by_label:
                return label
        raise DataIntegrityError(f"too many catalog graphs of shape {shape}")


@dataclass(frozen=True)
class Representative:
    """One row of a representatives file: a label with a pair or an explicit canonical."""

    label: str
    D: Optional[int]
    c: Optional[str]
    canonical: Optional[str] = None


def parse_representatives(text: str, source: str = "<representatives>") -> list[Representative]:
    """Rows ``label<TAB>D<TAB>c``; ``label<TAB>-<TAB>-<TAB>canonical`` when no pair is known."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 3 and parts[1] != _MISSING:
            try:
                rows.append(Representative(parts[0], int(parts[1]), parts[2]))
            except ValueError as exc:
                raise DataIntegrityError(f"{source}:{lineno}: {exc}") from exc
        elif len(parts) == 4 and parts[1] == parts[2] == _MISSING:
            rows.append(Representative(parts[0], None, None, parts[3]))
        else:
            raise DataIntegrityError(f"{source}:{lineno}: expected label, D, c")
    return rows


def build_catalog(reps: Sequence[Representative], max_box: int = 10**7) -> Catalog:
    """Compute each representative graph and collect them under their labels.

    A row whose computed shape disagrees with its label is a data error.
    """
    from .preper import graph_of
    from .qfield import parse_elem

    cat = Catalog()
    for rep in reps:
        if rep.canonical is not None:
            G = graph_from_canonical(rep.canonical)
            entry = CatalogEntry(rep.label, canonical_form(G))
        else:
            G = graph_of(rep.D, parse_elem(rep.c, rep.D), max_box=max_box)
            entry = CatalogEntry(rep.label, canonical_form(G), rep.D, rep.c)
        if shape_label(G) != entry.shape:
            raise DataIntegrityError(f"{rep.label}: representative has shape {shape_label(G)}")
        cat.add(entry)
    return cat


def _data_text(name: str) -> str:
    return resources.files("quadpreper").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def load_catalog(path: Optional[str] = None) -> Catalog:
    """The shipped catalog, or the file named by ``path`` / ``$QUADPREPER_CATALOG``."""
    path = path or os.environ.get(CATALOG_ENV)
    if path:
        return Catalog.parse(Path(path).read_text(encoding="utf-8"), source=str(path))
    return Catalog.parse(_data_text("catalog.tsv"), source="catalog.tsv")


def classify(G: PreperGraph, catalog: Catalog) -> Optional[str]:
    entry = catalog.lookup(canonical_form(G))
    return entry.label if entry else None


# -- exceptional graphs and the screen ------------------------------------------

CLOSURE_GENERATORS = {
    "G0": ["1_0", "1_0", "4_0"],
    "G1": ["1_3", "1_2"],
    "G4": ["1_0", "1_0", "2_3"],
    "G5": ["1_2", "1_2", "2_0"],
    "G6": ["1_2", "1_0", "2_2"],
    "G8": ["1_2", "1_0", "3_0"],
    "G10": ["2_2", "3_0"],
}

PROPER_CONTAINMENT_LABELS = ["10(1,1)b", "10(2)", "10(3)a", "10(3)b", "12(2,1,1)b", "12(4)", "12(4,2)"]
CONTAINMENT_GRAPHS = ["G0", "G2", "G4"]


@lru_cache(maxsize=None)
def _exceptional_table() -> dict[str, str]:
    out = {}
    for line in _data_text("exceptional.tsv").splitlines():
        if line.strip() and not line.startswith("#"):
            name, canonical = line.split("\t")[:2]
            out[name] = canonical
    return out


def exceptional_graph(name: str) -> PreperGraph:
    """One of the graphs G0 .. G10 that the classification treats separately."""
    if name in CLOSURE_GENERATORS:
        G, _ = admissible_closure(GeneratorSpec(CLOSURE_GENERATORS[name]))
        return G
    table = _exceptional_table()
    if name not in table:
        raise KeyError(f"unknown exceptional graph {name}")
    return graph_from_canonical(table[name])


def enumerate_admissible(cycle_lengths: Sequence[int], n_vertices: int) -> list[str]:
    """Canonical forms of all admissible graphs with the given cycles and size.

    Every periodic vertex carries exactly one non-periodic child whose
    subtree is a full binary tree, so the search runs over odd subtree sizes.
    """
    periodic = sum(cycle_lengths)
    budget = n_vertices - 2 * periodic
    if budget < 0 or budget % 2:
        return []
    slots = periodic
    trees = _full_binary_trees(n_vertices)
    found = set()
    for extra in _compositions(budget // 2, slots):
        sizes = [2 * e + 1 for e in extra]
        choices = [trees[s] for s in sizes]
        for combo in itertools.product(*choices):
            comps, k = [], 0
            for length in cycle_lengths:
                seq = ["(" + combo[k + i] + ")" for i in range(length)]
                k += length
                best = min(tuple(seq[i:] + seq[:i]) for i in range(length))
                comps.append("<" + "".join(best) + ">")
            found.add("".join(sorted(comps)))
    result = []
    for canon in sorted(found):
        G = graph_from_canonical(canon)
        if is_admissible(G):
            result.append(canon)
    return result


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _full_binary_trees(max_size: int) -> dict[int, list[str]]:
    out: dict[int, list[str]] = {1: ["()"]}
    for size in range(3, max_size + 1, 2):
        codes = set()
        for left in range(1, size - 1, 2):
            right = size - 1 - left
            if right < left:
                break
            for a in out[left]:
                for b in out[right]:
                    codes.add("(" + "".join(sorted((a, b))) + ")")
        out[size] = sorted(codes)
    return out


class Outcome(str, Enum):
    IN_CATALOG = "IN_CATALOG"
    EXCEPTIONAL = "EXCEPTIONAL"
    VIOLATION = "VIOLATION"
    OUT_OF_HYPOTHESIS = "OUT_OF_HYPOTHESIS"


@dataclass
class ScreenResult:
    outcome: Outcome
    label: Optional[str] = None
    witnesses: list = field(default_factory=list)

    def __str__(self) -> str:
        if self.outcome is Outcome.IN_CATALOG:
            return f"IN_CATALOG({self.label})"
        if self.outcome is Outcome.EXCEPTIONAL:
            return f"EXCEPTIONAL({','.join(self.witnesses)})"
        return self.outcome.value


def main_theorem_screen(G: PreperGraph, catalog: Catalog) -> ScreenResult:
    """Check a graph against the catalog and the list of exceptional containments.

    Graphs absent from the catalog must properly contain one of a fixed set of
    catalog graphs or contain one of G0, G2, G4.  Anything else is reported as
    a violation.  Graphs that are not strongly admissible, or that have
    cycles longer than 4, fall outside the classification.
    """
    label = classify(G, catalog)
    if label is not None:
        return ScreenResult(Outcome.IN_CATALOG, label)
    if not is_strongly_admissible(G) or any(n > 4 for n in cycle_structure(G)):
        return ScreenResult(Outcome.OUT_OF_HYPOTHESIS)
    witnesses = []
    for name in PROPER_CONTAINMENT_LABELS:
        if name in catalog and subgraph_contains(G, catalog.graph(name), proper=True):
            witnesses.append(name)
    for name in CONTAINMENT_GRAPHS:
        if subgraph_contains(G, exceptional_graph(name)):
            witnesses.append(name)
    if witnesses:
        return ScreenResult(Outcome.EXCEPTIONAL, witnesses=witnesses)
    return ScreenResult(Outcome.VIOLATION)


# -- export ----------------------------------------------------------------------


def to_dot(G: PreperGraph, name: str = "preper") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    for v in G.vertices:
        text = str(G.labels.get(v, v))
        if v in G.types:
            text += f" [{G.types[v]}]"
        lines.append(f"  {json.dumps(str(v))} [label={json.dumps(text)}];")
    for v in G.vertices:
        lines.append(f"  {json.dumps(str(v))} -> {json.dumps(str(G.succ[v]))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(G: PreperGraph) -> str:
    rows = []
    for v in G.vertices:
        t = G.types.get(v, "")
        rows.append(f"{G.labels.get(v, v)} -> {G.labels.get(G.succ[v], G.succ[v])}  {t}")
    return "\n".join(rows) + ("\n" if rows else "")
