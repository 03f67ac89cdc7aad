import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadpreper.errors import DataIntegrityError, GeneratorSpecError
from quadpreper.graphs import (
    CATALOG_LABELS,
    EMPTY_CANONICAL,
    Catalog,
    CatalogEntry,
    GeneratorSpec,
    Outcome,
    PreperGraph,
    admissible_closure,
    build_catalog,
    canonical_form,
    classify,
    cycle_structure,
    enumerate_admissible,
    exceptional_graph,
    graph_from_canonical,
    is_admissible,
    is_minimal_closure,
    is_strongly_admissible,
    load_catalog,
    main_theorem_screen,
    parse_representatives,
    shape_label,
    subgraph_contains,
    to_dot,
)
from quadpreper.preper import PointType, graph_of
from quadpreper.qfield import parse_elem


def relabel(G, rng):
    ids = list(G.vertices)
    perm = dict(zip(ids, rng.sample(range(1000, 1000 + len(ids)), len(ids))))
    return PreperGraph([perm[v] for v in ids], {perm[v]: perm[G.succ[v]] for v in ids})


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


def test_canonical_invariant_under_relabeling():
    rng = random.Random(7)
    G = graph_of(-7, Fraction(3, 16))
    canon = canonical_form(G)
    for _ in range(100):
        assert canonical_form(relabel(G, rng)) == canon


def test_canonical_separates_leaf_placement():
    spread = PreperGraph([0, 1, 2, 3], {0: 1, 1: 0, 2: 0, 3: 1})
    bunched = PreperGraph([0, 1, 2, 3], {0: 1, 1: 0, 2: 0, 3: 2})
    assert canonical_form(spread) != canonical_form(bunched)


def test_empty_graph():
    G = PreperGraph([], {})
    assert canonical_form(G) == EMPTY_CANONICAL
    assert cycle_structure(G) == []
    assert shape_label(G) == "0"


@given(st.lists(st.integers(0, 11), min_size=1, max_size=12))
def test_canonical_roundtrip_random_maps(targets):
    n = len(targets)
    G = PreperGraph(list(range(n)), {i: t % n for i, t in enumerate(targets)})
    canon = canonical_form(G)
    H = graph_from_canonical(canon)
    assert canonical_form(H) == canon
    assert len(H) == n
    assert cycle_structure(H) == cycle_structure(G)


def test_admissibility_examples():
    four_two = PreperGraph([0, 1, 2, 3], {0: 1, 1: 0, 2: 0, 3: 1})
    assert is_admissible(four_two)
    assert not is_admissible(PreperGraph([0], {0: 0}))
    quarter = graph_of(1, Fraction(1, 4))
    assert is_admissible(quarter) and not is_strongly_admissible(quarter)


@pytest.mark.parametrize(
    "types, size",
    [(["2_0"], 4), (["1_0"], 2), (["1_0", "1_0", "4_0"], 12), (["1_0", "1_0", "2_3"], 12), (["1_3", "1_2"], 10)],
)
def test_closure_sizes(types, size):
    G, gens = admissible_closure(GeneratorSpec(types))
    assert len(G) == size
    assert is_admissible(G)
    assert is_minimal_closure(G, gens)
    for g, t in zip(gens, types):
        assert G.types[g] == PointType.parse(t)


def test_closure_rejects_too_many_cycles():
    with pytest.raises(GeneratorSpecError):
        admissible_closure(GeneratorSpec(["3_0", "3_0", "3_0"]))


@pytest.mark.parametrize(
    "cycles, n, count",
    [((2,), 10, 3), ((1, 1), 10, 3), ((1, 1), 8, 2), ((1, 1), 6, 1), ((3,), 10, 2), ((1, 1, 2), 12, 5),
     ((1, 1, 3), 12, 2), ((2, 3), 12, 2)],
)
def test_enumeration_counts(cycles, n, count):
    assert len(enumerate_admissible(cycles, n)) == count


def test_subgraph_examples():
    three_two = graph_of(3, Fraction(-1))
    four_two = PreperGraph([0, 1, 2, 3], {0: 1, 1: 0, 2: 0, 3: 1})
    assert subgraph_contains(four_two, three_two)
    G = graph_of(-7, Fraction(3, 16))
    assert subgraph_contains(G, G)
    assert not subgraph_contains(G, G, proper=True)
    assert subgraph_contains(exceptional_graph("G2"), four_two)


def test_exceptional_graph_relations(catalog):
    assert subgraph_contains(catalog.graph("12(2)"), exceptional_graph("G2"), proper=True)
    assert subgraph_contains(catalog.graph("14(2,1,1)"), exceptional_graph("G3"), proper=True)
    assert subgraph_contains(catalog.graph("14(3,1,1)"), exceptional_graph("G7"), proper=True)
    assert subgraph_contains(catalog.graph("14(3,2)"), exceptional_graph("G9"), proper=True)
    for name in ("G0", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10"):
        assert is_admissible(exceptional_graph(name))


def test_catalog_has_all_labels(catalog):
    assert catalog.labels() == CATALOG_LABELS
    assert len(CATALOG_LABELS) == 46
    for e in catalog.entries:
        assert shape_label(catalog.graph(e.label)) == e.shape


def test_catalog_rejects_duplicates():
    canon = canonical_form(graph_of(-7, Fraction(3, 16)))
    cat = Catalog([CatalogEntry("10(1,1)a", canon, -7, "3/16")])
    with pytest.raises(DataIntegrityError):
        cat.add(CatalogEntry("10(1,1)a", "<(())>", None, None))
    with pytest.raises(DataIntegrityError):
        cat.add(CatalogEntry("other", canon, None, None))


def test_catalog_text_roundtrip(catalog):
    again = Catalog.parse(catalog.dumps())
    assert again.entries == catalog.entries


def test_catalog_parse_errors():
    with pytest.raises(DataIntegrityError):
        Catalog.parse("x\t<(())\t1\t0\n")
    with pytest.raises(DataIntegrityError):
        Catalog.parse("only-two\tfields\n")


def test_build_from_representatives():
    reps = parse_representatives("10(1,1)a\t-7\t3/16\n")
    cat = build_catalog(reps)
    assert cat.entry("10(1,1)a").canonical == canonical_form(graph_of(-7, Fraction(3, 16)))
    with pytest.raises(DataIntegrityError):
        build_catalog(parse_representatives("12(2)\t-7\t3/16\n"))


def test_next_label():
    cat = Catalog()
    G = graph_of(-7, Fraction(3, 16))
    assert cat.next_label(G) == "10(1,1)"
    cat.add(CatalogEntry("10(1,1)a", canonical_form(G), -7, "3/16"))
    assert cat.next_label(graph_from_canonical("<((((()())())()))><(())>")) == "10(1,1)b"


@pytest.mark.parametrize(
    "D, c, label",
    [(-7, "3/16", "10(1,1)a"), (17, "-21/16", "14(2,1,1)"), (-7, "-5/16", "12(2,1,1)a"), (1, "-1", "3(2)"),
     (2, "1/3", "0")],
)
def test_classify(catalog, D, c, label):
    assert classify(graph_of(D, parse_elem(c, D)), catalog) == label


def test_screen_outcomes(catalog):
    res = main_theorem_screen(graph_of(-7, Fraction(3, 16)), catalog)
    assert res.outcome is Outcome.IN_CATALOG and res.label == "10(1,1)a"
    res = main_theorem_screen(exceptional_graph("G0"), catalog)
    assert res.outcome is Outcome.EXCEPTIONAL and "G0" in res.witnesses
    big = exceptional_graph("G2")
    res = main_theorem_screen(big, catalog)
    assert res.outcome is Outcome.EXCEPTIONAL and res.witnesses == ["G2"]
    assert main_theorem_screen(exceptional_graph("G1"), catalog).outcome is Outcome.VIOLATION
    quarter = graph_of(5, Fraction(1, 4))
    if classify(quarter, catalog) is None:
        assert main_theorem_screen(quarter, catalog).outcome is Outcome.OUT_OF_HYPOTHESIS


def test_screen_proper_containment(catalog):
    # attach a fresh pair of preimages to a leaf of 10(2): proper supergraph of 10(2)
    G = catalog.graph("10(2)")
    preds = G.preds()
    leaf = next(v for v in G.vertices if not preds[v])
    succ = dict(G.succ)
    succ[100], succ[101] = leaf, leaf
    bigger = PreperGraph(list(G.vertices) + [100, 101], succ)
    res = main_theorem_screen(bigger, catalog)
    assert res.outcome is Outcome.EXCEPTIONAL
    assert "10(2)" in res.witnesses


def test_dot_export():
    dot = to_dot(graph_of(1, Fraction(0)))
    assert dot.startswith("digraph") and dot.count("->") == 3


def test_exceptional_table_characterisations(catalog):
    canon = lambda gs: {canonical_form(g) for g in gs}  # noqa: E731
    tens = set(enumerate_admissible((2,), 10))
    assert canonical_form(exceptional_graph("G2")) in tens and canonical_form(exceptional_graph("G3")) in tens
    assert set(enumerate_admissible((1, 1, 3), 12)) == canon([exceptional_graph("G7"), exceptional_graph("G8")])
    assert set(enumerate_admissible((2, 3), 12)) == canon([exceptional_graph("G9"), exceptional_graph("G10")])
    assert not subgraph_contains(catalog.graph("12(2)"), exceptional_graph("G3"))
    assert not subgraph_contains(catalog.graph("14(2,1,1)"), exceptional_graph("G2"))


def test_unrealised_ten_vertex_graph_by_elimination(catalog):
    forms = enumerate_admissible((1, 1), 10)
    g1 = exceptional_graph("G1")
    remaining = [f for f in forms if f != catalog.entry("10(1,1)a").canonical
                 and not subgraph_contains(graph_from_canonical(f), g1)]
    assert remaining == [catalog.entry("10(1,1)b").canonical]
    assert catalog.entry("10(1,1)b").D is None
