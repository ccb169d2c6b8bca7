import itertools
from collections import Counter

from ko7.nogo import (
    SCAN_RESISTANT_INTERPRETATION,
    canonical_family,
    catalog,
    catalog_family,
    duplication_depth_tie,
    duplication_stress,
    find_violation,
    iter_witnesses,
    kappa_depth,
    kbo_search,
    lpo_boundary_report,
    lpo_greater,
    poly_search,
    search_precedence,
    symbol_weight,
    tree_depth,
)
from ko7.rewrite import RelationKind, RuleId, root_steps_full
from ko7.terms import (
    KINDS,
    VOID,
    app,
    delta,
    enumerate_terms,
    eqw,
    integrate,
    merge,
    rec,
    size,
)

FAMILY_NAMES = [
    "additive-kappa",
    "lex-kappa-size",
    "linear-poly",
    "delta-flag",
    "size",
    "kappa-depth",
    "naive-multiset",
    "hybrid-flag-size",
    "raw-recursion",
    "precedence-rank",
    "kbo-weight",
    "tree-depth",
]


class TestKappaDepth:
    def test_nesting(self):
        assert kappa_depth(delta(delta(VOID))) == 2
        assert kappa_depth(VOID) == 0

    def test_merge_takes_maximum(self):
        for t in enumerate_terms(4):
            assert kappa_depth(merge(t, t)) == kappa_depth(t)

    def test_duplication_tie_instance(self):
        lhs = rec(VOID, delta(VOID), delta(VOID))
        rhs = app(delta(VOID), rec(VOID, delta(VOID), VOID))
        assert kappa_depth(lhs) == kappa_depth(rhs) == 1


class TestCatalog:
    def test_exactly_twelve(self):
        assert [f.name for f in catalog()] == FAMILY_NAMES

    def test_lookup(self):
        assert catalog_family("tree-depth").name == "tree-depth"
        try:
            catalog_family("nope")
        except KeyError:
            pass
        else:
            raise AssertionError("expected KeyError")

    def test_every_family_has_a_counterexample(self):
        for family in catalog():
            hunt = find_violation(family, max_size=7)
            assert hunt.found, family.name
            c = hunt.counterexample
            # non-decrease verified against the family's own order
            assert not family.less(c.value_after, c.value_before)

    def test_orders_irreflexive_on_sampled_values(self):
        for family in catalog():
            for t in enumerate_terms(4):
                v = family.valuation(t)
                assert not family.less(v, v), family.name


class TestStoryWitnesses:
    """Frozen first-found counterexamples for the families whose failure
    pattern the catalog pins to one rule."""

    def test_additive_kappa_ties_on_duplication(self):
        hunt = find_violation(catalog_family("additive-kappa"), max_size=7)
        c = hunt.counterexample
        assert c.witness.rule is RuleId.REC_SUCC
        assert c.witness.source == rec(VOID, delta(VOID), delta(VOID))
        assert c.value_before == c.value_after == 1

    def test_lex_pair_ties_then_grows(self):
        c = find_violation(catalog_family("lex-kappa-size"), max_size=7).counterexample
        assert c.witness.rule is RuleId.REC_SUCC
        assert c.value_before == (1, 6)
        assert c.value_after == (1, 8)

    def test_delta_flag_can_increase(self):
        # beyond the first tie, the flag genuinely toggles 0 -> 1
        family = catalog_family("delta-flag")
        flagged = rec(VOID, VOID, delta(VOID))
        toggles = [
            w
            for w in iter_witnesses(RelationKind.FULL_ROOT, 7)
            if w.rule in family.focus
            and family.valuation(w.source) == 0
            and family.valuation(w.result) == 1
        ]
        assert merge(VOID, flagged) in {w.source for w in toggles}

    def test_precedence_rank_same_head(self):
        c = find_violation(catalog_family("precedence-rank"), max_size=7).counterexample
        assert c.witness.rule is RuleId.MERGE_CANCEL
        assert c.witness.source.kind == c.witness.result.kind == "merge"
        assert c.value_before == c.value_after

    def test_tree_depth_ties_and_increases(self):
        c = find_violation(catalog_family("tree-depth"), max_size=7).counterexample
        assert c.witness.rule is RuleId.REC_SUCC
        deep = rec(VOID, delta(VOID), delta(VOID))
        (w,) = root_steps_full(deep)
        assert tree_depth(w.result) > tree_depth(deep)

    def test_size_fails_on_eq_diff(self):
        c = find_violation(catalog_family("size"), max_size=7).counterexample
        assert c.witness.rule is RuleId.EQ_DIFF
        assert c.value_after == c.value_before + 1

    def test_naive_multiset_not_contained(self):
        c = find_violation(catalog_family("naive-multiset"), max_size=7).counterexample
        assert c.witness.rule is RuleId.REC_SUCC
        assert not c.value_before == c.value_after


class TestCanonicalSurvives:
    def test_no_violation_on_guarded_relation(self):
        hunt = find_violation(canonical_family(), RelationKind.SAFE_ROOT, 7)
        assert not hunt.found
        assert hunt.scanned > 1000

    def test_unguarded_relation_breaks_it(self):
        # the full relation can raise the flag, so the certificate is
        # genuinely scoped to the guarded fragment
        hunt = find_violation(canonical_family(), RelationKind.FULL_ROOT, 7)
        assert hunt.found


class TestDepthTie:
    def test_tie_with_constant_shifts(self):
        report = duplication_depth_tie(7, constants=(0, 1, 5))
        assert report.witness.rule is RuleId.REC_SUCC
        assert kappa_depth(report.witness.source) == kappa_depth(report.witness.result)
        assert report.constants == (0, 1, 5)


class TestDuplicationStress:
    def test_fitted_identity(self):
        report = duplication_stress(7)
        assert report.instances == 40
        assert report.fitted_offset == 0
        assert report.failures == []
        assert report.strict_drops == 0
        assert report.min_growth == 1

    def test_identity_against_direct_scan(self):
        for t in enumerate_terms(6):
            for w in root_steps_full(t):
                if w.rule is RuleId.REC_SUCC:
                    s = w.source.children[1]
                    assert size(w.result) == size(w.source) + size(s)

    def test_void_step_grows_by_one(self):
        (w,) = root_steps_full(rec(VOID, VOID, delta(VOID)))
        assert size(w.result) == size(w.source) + 1


class TestLpo:
    def test_subterm_clause(self):
        prec = {kind: rank for rank, kind in enumerate(KINDS)}
        for t in enumerate_terms(4):
            assert lpo_greater(merge(t, t), t, prec)

    def test_irreflexive(self):
        prec = {kind: rank for rank, kind in enumerate(KINDS)}
        for t in enumerate_terms(4):
            assert not lpo_greater(t, t, prec)

    def test_natural_order_orients_all_rules(self):
        prec = {kind: rank for rank, kind in enumerate(KINDS)}
        for t in enumerate_terms(5):
            for w in root_steps_full(t):
                assert lpo_greater(w.source, w.result, prec)

    def test_search_finds_a_precedence(self):
        prec = search_precedence(max_size=4)
        assert prec is not None
        for t in enumerate_terms(4):
            for w in root_steps_full(t):
                assert lpo_greater(w.source, w.result, prec)

    def test_boundary_report(self):
        report = lpo_boundary_report(max_size=4, hunt_size=7)
        assert report.ok
        assert report.orienting_count >= 1
        assert report.rank_only.found
        assert report.rank_only.counterexample.witness.rule is RuleId.MERGE_CANCEL


class TestPolySearch:
    def test_zero_orienting_assignments(self):
        report = poly_search(3)
        assert report.ok
        assert report.orienting_assignments == 0
        assert report.min_step_excess >= 1
        assert report.step_combos_checked == 27

    def test_space_size_arithmetic(self):
        # coefficients 1..3 per child slot, constants 0..3 per constructor
        report = poly_search(3)
        expected = (4) * (3 * 4) ** 2 * (9 * 4) ** 2 * (27 * 4) * (9 * 4)
        assert report.space_size == expected

    def test_constructed_witnesses_verified_independently(self):
        from ko7.nogo import LinearInterpretation, _grow_step_operand

        def value(interp, t):
            i = KINDS.index(t.kind)
            return interp.consts[i] + sum(
                c * value(interp, ch) for c, ch in zip(interp.coefs[i], t.children)
            )

        candidates = [
            LinearInterpretation(((), (1,), (1,), (1, 1), (1, 1), (1, 1, 1), (1, 1)),
                                 (0, 0, 0, 0, 0, 0, 0)),
            LinearInterpretation(((), (3,), (3,), (3, 3), (3, 3), (3, 3, 3), (3, 3)),
                                 (3, 3, 3, 3, 3, 3, 3)),
            SCAN_RESISTANT_INTERPRETATION,
        ]
        for interp in candidates:
            _, lhs, rhs = _grow_step_operand(interp)
            assert value(interp, rhs) >= value(interp, lhs)

        report = poly_search(2, sample_count=8)
        c = report.example
        assert c.witness.rule is RuleId.REC_SUCC
        assert c.value_after >= c.value_before

    def test_scan_resistant_interpretation(self):
        # orients every unguarded root instance up to size 6, so the
        # bounded scan alone cannot refute it; the pumped witness can
        report = poly_search(3)
        assert not report.scan_resistant_small_violation
        interp = SCAN_RESISTANT_INTERPRETATION
        for t in enumerate_terms(6):
            for w in root_steps_full(t):
                assert interp.value(w.result) < interp.value(w.source)
        c = report.scan_resistant_example
        assert c.value_after >= c.value_before


class TestKboSearch:
    def test_exhaustive_zero_orienting(self):
        report = kbo_search(3)
        assert report.ok
        assert report.assignments_checked == 4**7
        assert report.orienting_assignments == 0

    def test_witnesses_evaluate_correctly(self):
        # re-derive the example's weights-free claim: total symbol weight
        # cannot strictly drop on the constructed instance for any vector
        for vector in itertools.islice(
            itertools.product(range(3), repeat=len(KINDS)), 0, 64, 7
        ):
            weights = dict(zip(KINDS, vector))
            from ko7.nogo import _weight_counterexample

            lhs, rhs, wl, wr = _weight_counterexample(weights)
            assert symbol_weight(lhs, weights) == wl
            assert symbol_weight(rhs, weights) == wr
            assert wr >= wl


class TestJsonForms:
    def test_hunt_report(self):
        payload = find_violation(catalog_family("size"), max_size=5).to_json()
        assert set(payload) == {"family", "relation", "maxSize", "scanned", "counterexample"}
        c = payload["counterexample"]
        assert {"rule", "pos", "from", "to", "family", "before", "after", "verdict"} <= set(c)

    def test_poly_report(self):
        payload = poly_search(2, sample_count=4).to_json()
        assert payload["orientingAssignments"] == 0
        assert "scanResistant" in payload

    def test_stress_report(self):
        payload = duplication_stress(5).to_json()
        assert payload["fittedOffset"] == 0
        assert payload["strictDrops"] == 0
