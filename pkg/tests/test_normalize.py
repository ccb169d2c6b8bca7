import pytest

from ko7.measure import lex3_less, tau
from ko7.normalize import (
    FullRunResult,
    TargetNotNormalError,
    is_normal_form_safe,
    normalize_full,
    normalize_safe,
    reaches_target,
)
from ko7.rewrite import RuleId, root_steps_safe
from ko7.terms import (
    VOID,
    app,
    delta,
    enumerate_terms,
    eqw,
    integrate,
    merge,
    rec,
)


class TestNormalFormPredicate:
    def test_atom(self):
        assert is_normal_form_safe(VOID)

    def test_stuck_integrate(self):
        assert is_normal_form_safe(integrate(merge(VOID, VOID)))

    def test_eqw_refl_reducible(self):
        assert not is_normal_form_safe(eqw(VOID, VOID))


class TestNormalizeSafe:
    def test_integrate_delta(self):
        trace = normalize_safe(integrate(delta(VOID)))
        assert trace.final_term == VOID
        assert len(trace.steps) == 1
        assert trace.steps[0].witness.rule is RuleId.INT_DELTA

    def test_eq_diff_lands_on_normal_form(self):
        trace = normalize_safe(eqw(delta(VOID), VOID))
        assert trace.final_term == integrate(merge(delta(VOID), VOID))
        assert len(trace.steps) == 1

    def test_rec_succ_stops_at_app(self):
        trace = normalize_safe(rec(VOID, VOID, delta(VOID)))
        assert trace.final_term == app(VOID, rec(VOID, VOID, VOID))
        assert [s.witness.rule for s in trace.steps] == [RuleId.REC_SUCC]

    def test_trace_invariants(self):
        for t in enumerate_terms(6):
            trace = normalize_safe(t)
            assert trace.source == t
            current = t
            for step in trace.steps:
                assert step.witness.source == current
                assert lex3_less(step.after, step.before)
                current = step.witness.result
            assert current == trace.final_term
            assert is_normal_form_safe(trace.final_term)

    def test_step_count_bounded_by_tau(self):
        for t in enumerate_terms(6):
            assert len(normalize_safe(t).steps) <= tau(t)

    def test_trace_json_schema(self):
        payload = normalize_safe(eqw(VOID, VOID)).to_json()
        assert set(payload) == {"source", "steps", "normalForm"}
        assert set(payload["steps"][0]) == {"witness", "before", "after"}


class TestNormalizeFull:
    def test_inner_merge(self):
        run = normalize_full(integrate(merge(VOID, VOID)), fuel=10)
        assert run.normalized
        assert run.term == integrate(VOID)
        assert run.steps_taken == 1

    def test_zero_fuel_on_normal_form(self):
        run = normalize_full(VOID, fuel=0)
        assert run == FullRunResult(True, VOID, ())

    def test_eqw_strategy_picks_refl_first(self):
        run = normalize_full(eqw(VOID, VOID), fuel=10)
        assert run.normalized
        assert run.term == VOID

    def test_fuel_exhaustion(self):
        run = normalize_full(eqw(VOID, VOID), fuel=0)
        assert not run.normalized
        assert run.term == eqw(VOID, VOID)
        assert run.steps_taken == 0


class TestReachesTarget:
    def test_integrate_delta_chain(self):
        assert reaches_target(integrate(delta(delta(VOID))), VOID)

    def test_reflexive(self):
        assert reaches_target(VOID, VOID)

    def test_negative(self):
        assert not reaches_target(eqw(delta(VOID), VOID), VOID)

    def test_rejects_non_normal_target(self):
        with pytest.raises(TargetNotNormalError):
            reaches_target(VOID, eqw(VOID, VOID))

    def test_agrees_with_exhaustive_reachability(self):
        from ko7.confluence import guarded_root_normal_forms
        from collections import deque

        def reachable(t):
            seen = {t}
            queue = deque([t])
            while queue:
                current = queue.popleft()
                for w in root_steps_safe(current):
                    if w.result not in seen:
                        seen.add(w.result)
                        queue.append(w.result)
            return seen

        pool = enumerate_terms(4)
        targets = [c for c in pool if is_normal_form_safe(c)]
        for t in pool:
            reach = reachable(t)
            for c in targets:
                assert reaches_target(t, c) == (c in reach)
