"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from quadpreper.curves import count_points_mod_p, load_models, resultant, search_rational_points, stoll_bound
from quadpreper.dynatomic import BivarPoly, dnrn, dynatomic_poly, iterate_poly
from quadpreper.families import FAMILIES, FamilyId, family_forward, family_inverse, sample_parameters
from quadpreper.graphs import (
    GeneratorSpec,
    Outcome,
    admissible_closure,
    classify,
    cycle_structure,
    is_admissible,
    is_minimal_closure,
    load_catalog,
    subgraph_contains,
)
from quadpreper.preper import graph_of, preper_via_closure, preperiodic_points
from quadpreper.verify import oracle_pairs, screen_scan_records

MODELS = load_models()


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


@pytest.fixture
def report(capsys):
    """Run a criterion body, print one status line and re-raise any failure."""

    def run(name, budget, body):
        start = time.perf_counter()
        error = None
        try:
            body()
            elapsed = time.perf_counter() - start
            if elapsed > budget:
                error = AssertionError(f"took {elapsed:.1f}s, budget {budget}s")
        except Exception as exc:  # reported, then re-raised below
            error = exc
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            status = "PASS" if error is None else "FAIL"
            detail = "" if error is None else f"  [{type(error).__name__}: {error}]"
            print(f"\n{status} {name} ({elapsed:.2f}s){detail}")
        if error is not None:
            raise error

    return run


def test_criterion_1_dynatomic_identities(report):
    def body():
        x = BivarPoly({(1, 0): 1})
        for N in range(1, 7):
            prod = BivarPoly({(0, 0): 1})
            for n in range(1, N + 1):
                if N % n == 0:
                    prod = prod * dynatomic_poly(n)
            assert prod == iterate_poly(N) - x, N
        table = [(2, 2), (2, 1), (6, 2), (12, 3), (30, 6), (54, 9), (126, 18), (240, 30)]
        assert [tuple(dnrn(N)) for N in range(1, 9)] == table

    report("criterion 1: dynatomic product identity and cycle counts", 5, body)


NAMED = [
    (-7, "3/16", 10, [1, 1], "10(1,1)a"),
    (17, "-21/16", 14, [1, 1, 2], "14(2,1,1)"),
    (-7, "-5/16", 12, [1, 1, 2], "12(2,1,1)a"),
    (33, "-29/16", 14, [1, 1, 3], "14(3,1,1)"),
]


def _named(catalog, rows):
    from quadpreper.qfield import parse_elem

    for D, c, n, cycles, label in rows:
        G = graph_of(D, parse_elem(c, D))
        assert (len(G), cycle_structure(G)) == (n, cycles), (D, c, len(G), cycle_structure(G))
        assert classify(G, catalog) == label, (D, c)


def _containment(catalog):
    from quadpreper.qfield import parse_elem

    twelve_two = catalog.graph("12(2)")
    for D, c in [(2, "-15/8"), (57, "-55/48")]:
        assert subgraph_contains(graph_of(D, parse_elem(c, D)), twelve_two), (D, c)
    assert 6 in cycle_structure(graph_of(33, parse_elem("-71/48", 33)))
    cyc = cycle_structure(graph_of(-15, parse_elem("-31/48", -15)))
    assert 2 in cyc and 4 in cyc


def test_criterion_2_named_pairs(report, catalog):
    def body():
        _named(catalog, NAMED)
        _containment(catalog)
        # the pair below is the printed (-17, -29/16) row with the field that carries its 2-cycle
        _named(catalog, [(17, "-29/16", 14, [2, 3], "14(3,2)")])

    report("criterion 2: named pair graphs", 60, body)


@pytest.mark.xfail(strict=True, reason="the 2-cycle of c = -29/16 is defined over Q(sqrt(17)), not Q(sqrt(-17))")
def test_criterion_2_row_minus_17(report, catalog):
    report("criterion 2 row (-17, -29/16) -> 14 vertices, (3,2)", 60,
           lambda: _named(catalog, [(-17, "-29/16", 14, [2, 3], "14(3,2)")]))


def test_criterion_3_oracle_equivalence(report):
    def body():
        pairs = oracle_pairs(50)
        assert len(pairs) >= 50
        nonempty = 0
        for D, c in pairs:
            assert abs(D) <= 30
            assert max(abs(c.a.numerator), c.a.denominator, abs(c.b.numerator), c.b.denominator) <= 48
            box = {x for x, _ in preperiodic_points(D, c)}
            closure = {x for x, _ in preper_via_closure(D, c)}
            assert box == closure, (D, c)
            nonempty += bool(box)
        assert nonempty >= 10

    report("criterion 3: box enumeration equals closure oracle on 50 pairs", 120, body)


def test_criterion_4_family_roundtrips(report):
    def body():
        assert len(FAMILIES) == 17
        for fid in FamilyId:
            rng = random.Random(f"acceptance-{fid.value}")
            marked = dict(FAMILIES[fid].marked)
            for _ in range(100):
                params = sample_parameters(fid, rng)
                cfg = family_forward(fid, params)
                assert cfg.types == marked, fid
                assert family_inverse(fid, cfg) == tuple(params), (fid, params)
        cfg = family_forward(FamilyId.PER3, (Fraction(1),))
        alpha = cfg.points["alpha"]
        cycle = {alpha, cfg.f(alpha), cfg.f(alpha, 2)}
        assert cycle == {Fraction(5, 4), Fraction(-1, 4), Fraction(-7, 4)}
        assert cfg.f(alpha, 3) == alpha

    report("criterion 4: family roundtrips and PER3 at t=1", 120, body)


def test_criterion_5_resultants(report):
    def body():
        pairs = [("per13", "per23", 2**12), ("g1_f", "g1_g", -(2**8)),
                 ("g5_f", "g5_g", 2**24 * 3**2), ("g6_f", "g6_g", 2**24 * 5)]
        for a, b, value in pairs:
            assert resultant(MODELS[a].f, MODELS[b].f) == value, (a, b)

    report("criterion 5: curve resultants", 5, body)


def test_criterion_6_counts_and_bounds(report):
    def body():
        counts = [("per14_c3", 7, 6), ("per14_c4", 5, 10), ("g4_c3", 7, 10), ("g8_c", 5, 6), ("g10_c", 11, 6)]
        for name, p, total in counts:
            assert count_points_mod_p(MODELS[name], p).total == total, name
        assert stoll_bound(6, 1, 7) == 8
        assert stoll_bound(10, 2, 5) == 15
        assert stoll_bound(6, 2, 11) == 10

    report("criterion 6: F_p point counts and rational point bounds", 10, body)


def test_criterion_7_point_searches(report):
    def body():
        pm = lambda x, y: {(Fraction(x), Fraction(y)), (Fraction(x), Fraction(-y))}  # noqa: E731
        for name in ("per13", "per23"):
            assert set(search_rational_points(MODELS[name], 10**4)) == pm(0, 1) | pm(-1, 1), name
        expected = {(Fraction(0), Fraction(0))} | pm(1, 2) | pm(-1, 2)
        assert set(search_rational_points(MODELS["per4"], 10**4)) == expected

    report("criterion 7: height 10^4 rational point searches", 60, body)


def test_criterion_8_closure_sizes(report):
    def body():
        for types, size in [(["2_0"], 4), (["1_0"], 2), (["1_0", "1_0", "4_0"], 12), (["1_0", "1_0", "2_3"], 12)]:
            G, gens = admissible_closure(GeneratorSpec(types))
            assert len(G) == size, types
            assert is_admissible(G) and is_minimal_closure(G, gens), types

    report("criterion 8: admissible closure sizes", 5, body)


def test_criterion_9_screen_soundness(report):
    def body():
        records = screen_scan_records()
        assert len(records) > 4000
        screened = 0
        for rec in records:
            assert "error" not in rec, rec
            if not rec["strongly_admissible"] or max(rec["cycle_structure"], default=0) > 4:
                continue
            screened += 1
            assert rec["screen"].startswith((Outcome.IN_CATALOG.value, Outcome.EXCEPTIONAL.value)), rec
        assert screened > 0

    report("criterion 9: theorem screen over the discriminant and c box", 300, body)
