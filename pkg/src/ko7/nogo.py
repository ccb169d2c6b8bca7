"""Executable catalog of failed termination-method families.

Twelve measure families that cannot orient the unguarded kernel, a hunter
that finds a concrete non-decreasing rule instance for each, the size
identity satisfied by the duplicating recursor rule, exhaustive searches
over linear polynomial interpretations and symbol-weight sums, and a
lexicographic-path-order demonstration marking where external subterm
reasoning takes over from internally computable measures.

The duplication mechanism behind most failures: rec_succ rewrites
rec b s (delta n) to app s (rec b s n), so the step operand s lands twice
on the right-hand side and any additive account of s gains a copy.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

from .measure import lex3_less, measure3
from .rewrite import (
    RelationKind,
    RuleId,
    StepWitness,
    delta_flag,
    root_steps_full,
    steps,
)
from .terms import (
    ARITY,
    KIND_INDEX,
    KINDS,
    Term,
    VOID,
    app,
    delta,
    enumerate_terms,
    merge,
    rec,
    size,
    subterms,
)


def kappa_depth(t: Term) -> int:
    """Delta-nesting depth: only delta increments, every other constructor
    takes the maximum over its children."""
    if t.kind == "void":
        return 0
    if t.kind == "delta":
        return 1 + kappa_depth(t.children[0])
    return max(kappa_depth(c) for c in t.children)


def tree_depth(t: Term) -> int:
    if not t.children:
        return 1
    return 1 + max(tree_depth(c) for c in t.children)


def _lex_pair_less(a: tuple, b: tuple) -> bool:
    return a < b


def _nat_less(a: int, b: int) -> bool:
    return a < b


def _proper_submultiset(x: Counter, y: Counter) -> bool:
    return not (x - y) and x != y


def render_value(value_kind: str, value: Any):
    """JSON-friendly form of a family value, by kind."""
    if value_kind == "pair":
        return list(value)
    if value_kind == "multiset":
        return sorted(value.elements())
    if value_kind == "measure3":
        return value.to_json()
    return value


@dataclass(frozen=True)
class MeasureFamily:
    """A candidate termination measure: valuation plus strict order."""

    name: str
    description: str
    valuation: Callable[[Term], Any]
    less: Callable[[Any, Any], bool]
    value_kind: str  # nat | bit | pair | multiset | measure3
    focus: tuple[RuleId, ...] = ()

    def render(self, value: Any):
        return render_value(self.value_kind, value)


# Representative linear interpretation for the polynomial family: orients
# the seven non-duplicating rules and loses on every rec_succ instance.
_POLY_COEFS = {
    "void": (),
    "delta": (1,),
    "integrate": (1,),
    "merge": (1, 1),
    "app": (1, 1),
    "rec": (1, 1, 1),
    "eqw": (1, 1),
}
_POLY_CONSTS = {
    "void": 1,
    "delta": 0,
    "integrate": 1,
    "merge": 1,
    "app": 0,
    "rec": 1,
    "eqw": 3,
}


def _poly_value(t: Term) -> int:
    return _POLY_CONSTS[t.kind] + sum(
        c * _poly_value(ch) for c, ch in zip(_POLY_COEFS[t.kind], t.children)
    )


# Representative symbol weights: heavy delta and eqw keep the seven
# non-duplicating rules oriented; the duplicated step operand still wins.
_KBO_WEIGHTS = {
    "void": 1,
    "delta": 3,
    "integrate": 1,
    "merge": 1,
    "app": 1,
    "rec": 1,
    "eqw": 4,
}


def symbol_weight(t: Term, weights: dict[str, int]) -> int:
    return sum(weights[u.kind] for u in subterms(t))


def catalog() -> list[MeasureFamily]:
    """The twelve executable failed families, in catalog order."""
    return [
        MeasureFamily(
            "additive-kappa",
            "delta-nesting depth plus a fixed constant (any k; ties are "
            "constant-invariant)",
            kappa_depth,
            _nat_less,
            "nat",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "lex-kappa-size",
            "lexicographic pair (delta-nesting depth, node count)",
            lambda t: (kappa_depth(t), size(t)),
            _lex_pair_less,
            "pair",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "linear-poly",
            "representative linear interpretation (see poly_search for the "
            "exhaustive sweep)",
            _poly_value,
            _nat_less,
            "nat",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "delta-flag",
            "the single-bit root-shape detector on its own",
            delta_flag,
            _nat_less,
            "bit",
            focus=(RuleId.MERGE_VOID_LEFT, RuleId.MERGE_VOID_RIGHT),
        ),
        MeasureFamily(
            "size",
            "node count as a plain ordinal",
            size,
            _nat_less,
            "nat",
        ),
        MeasureFamily(
            "kappa-depth",
            "delta-nesting depth on its own",
            kappa_depth,
            _nat_less,
            "nat",
            focus=(RuleId.MERGE_CANCEL,),
        ),
        MeasureFamily(
            "naive-multiset",
            "multiset of all subterm sizes under proper sub-multiset order "
            "(no replace-by-smaller clause)",
            lambda t: Counter(size(u) for u in subterms(t)),
            _proper_submultiset,
            "multiset",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "hybrid-flag-size",
            "lexicographic pair (delta flag, node count)",
            lambda t: (delta_flag(t), size(t)),
            _lex_pair_less,
            "pair",
        ),
        MeasureFamily(
            "raw-recursion",
            "node count probed on the unguarded duplicating rule itself",
            size,
            _nat_less,
            "nat",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "precedence-rank",
            "head-constructor rank under a fixed total precedence, with no "
            "subterm clause",
            lambda t: KIND_INDEX[t.kind],
            _nat_less,
            "nat",
            focus=(RuleId.MERGE_CANCEL,),
        ),
        MeasureFamily(
            "kbo-weight",
            "representative linear symbol-weight sum (see kbo_search for "
            "the exhaustive sweep)",
            lambda t: symbol_weight(t, _KBO_WEIGHTS),
            _nat_less,
            "nat",
            focus=(RuleId.REC_SUCC,),
        ),
        MeasureFamily(
            "tree-depth",
            "maximum tree depth (every constructor increments)",
            tree_depth,
            _nat_less,
            "nat",
            focus=(RuleId.REC_SUCC,),
        ),
    ]


def catalog_family(name: str) -> MeasureFamily:
    for family in catalog():
        if family.name == name:
            return family
    raise KeyError(name)


def canonical_family() -> MeasureFamily:
    """The shipped triple-lex certificate wrapped as a family, for running
    through the same hunter as the failures."""
    return MeasureFamily(
        "canonical-triple",
        "the certified lexicographic stack (flag, rec multiset, weighted count)",
        measure3,
        lex3_less,
        "measure3",
    )


@dataclass(frozen=True)
class CounterexampleReport:
    family: str
    witness: StepWitness
    value_before: Any
    value_after: Any
    verdict: str  # "increase" | "no-strict-drop"
    value_kind: str

    def to_json(self) -> dict:
        base = self.witness.to_json()
        base.update(
            {
                "family": self.family,
                "before": render_value(self.value_kind, self.value_before),
                "after": render_value(self.value_kind, self.value_after),
                "verdict": self.verdict,
            }
        )
        return base


@dataclass
class HuntReport:
    family: str
    relation: str
    max_size: int
    scanned: int
    counterexample: Optional[CounterexampleReport]

    @property
    def found(self) -> bool:
        return self.counterexample is not None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "relation": self.relation,
            "maxSize": self.max_size,
            "scanned": self.scanned,
            "counterexample": (
                self.counterexample.to_json() if self.counterexample else None
            ),
        }


def _no_drop_report(
    family: MeasureFamily, w: StepWitness
) -> Optional[CounterexampleReport]:
    before = family.valuation(w.source)
    after = family.valuation(w.result)
    if family.less(after, before):
        return None
    verdict = "increase" if family.less(before, after) else "no-strict-drop"
    return CounterexampleReport(family.name, w, before, after, verdict, family.value_kind)


def iter_witnesses(
    relation: RelationKind, max_size: int
) -> Iterator[StepWitness]:
    for t in enumerate_terms(max_size):
        yield from steps(t, relation)


def find_violation(
    family: MeasureFamily,
    relation: RelationKind = RelationKind.FULL_ROOT,
    max_size: int = 7,
) -> HuntReport:
    """Scan all rule instances up to max_size for one where the family's
    order fails to drop strictly.

    When the family carries focus rules (the rules its failure story
    targets), the first non-dropping focused instance is preferred; a
    non-dropping instance of any other rule is kept as fallback.
    """
    scanned = 0
    fallback: Optional[CounterexampleReport] = None
    for w in iter_witnesses(relation, max_size):
        scanned += 1
        report = _no_drop_report(family, w)
        if report is None:
            continue
        if not family.focus or w.rule in family.focus:
            return HuntReport(family.name, relation.value, max_size, scanned, report)
        if fallback is None:
            fallback = report
    return HuntReport(family.name, relation.value, max_size, scanned, fallback)


# ---------------------------------------------------------------------------
# The depth tie on the duplicating rule: adding any fixed constant to the
# nesting depth cannot restore a strict drop.


@dataclass(frozen=True)
class DepthTieReport:
    witness: StepWitness
    depth: int
    constants: tuple[int, ...]

    def to_json(self) -> dict:
        base = self.witness.to_json()
        base.update({"depth": self.depth, "constantsChecked": list(self.constants)})
        return base


def duplication_depth_tie(
    max_size: int = 7, constants: tuple[int, ...] = (0, 1, 5)
) -> DepthTieReport:
    """First rec_succ instance whose delta-nesting depth ties exactly,
    checked to stay tied under each constant shift."""
    for w in iter_witnesses(RelationKind.FULL_ROOT, max_size):
        if w.rule is not RuleId.REC_SUCC:
            continue
        before = kappa_depth(w.source)
        after = kappa_depth(w.result)
        if before == after:
            for k in constants:
                assert before + k == after + k
            return DepthTieReport(w, before, constants)
    raise RuntimeError(f"no depth-tied rec_succ instance up to size {max_size}")


# ---------------------------------------------------------------------------
# Duplication stress identity for the additive node count.


@dataclass
class StressReport:
    max_size: int
    instances: int = 0
    fitted_offset: Optional[int] = None
    failures: list[StepWitness] = field(default_factory=list)
    strict_drops: int = 0
    min_growth: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.instances > 0 and not self.failures

    @property
    def identity(self) -> str:
        return f"size(result) = size(source) + size(step) + {self.fitted_offset}"

    def to_json(self) -> dict:
        return {
            "maxSize": self.max_size,
            "instances": self.instances,
            "fittedOffset": self.fitted_offset,
            "identity": self.identity,
            "failures": [w.to_json() for w in self.failures],
            "strictDrops": self.strict_drops,
            "minGrowth": self.min_growth,
        }


def duplication_stress(max_size: int = 7) -> StressReport:
    """Fit and verify the size identity of the duplicating rule.

    The offset is fitted from the scan rather than assumed: for node count
    the growth equals the step operand's size exactly, so no rec_succ
    instance ever drops."""
    report = StressReport(max_size)
    for w in iter_witnesses(RelationKind.FULL_ROOT, max_size):
        if w.rule is not RuleId.REC_SUCC:
            continue
        report.instances += 1
        step_size = size(w.source.children[1])
        diff = size(w.result) - size(w.source)
        offset = diff - step_size
        if report.fitted_offset is None:
            report.fitted_offset = offset
        elif offset != report.fitted_offset:
            report.failures.append(w)
        if diff < 0:
            report.strict_drops += 1
        report.min_growth = diff if report.min_growth is None else min(report.min_growth, diff)
    return report


# ---------------------------------------------------------------------------
# Lexicographic path order over the seven-symbol signature.

Precedence = dict[str, int]  # kind -> rank, higher is greater


def lpo_greater(a: Term, b: Term, prec: Precedence) -> bool:
    """Standard LPO: subterm clause, precedence clause, and same-head
    lexicographic clause."""
    if a == b:
        return False
    if any(c == b or lpo_greater(c, b, prec) for c in a.children):
        return True
    ra, rb = prec[a.kind], prec[b.kind]
    if ra > rb:
        return all(lpo_greater(a, c, prec) for c in b.children)
    if ra < rb:
        return False
    # same head constructor: first differing child must dominate
    for x, y in zip(a.children, b.children):
        if x == y:
            continue
        if not lpo_greater(x, y, prec):
            return False
        return all(lpo_greater(a, c, prec) for c in b.children)
    return False


def _rule_instances(max_size: int) -> list[tuple[Term, Term]]:
    return [
        (w.source, w.result)
        for t in enumerate_terms(max_size)
        for w in root_steps_full(t)
    ]


def orients_all(prec: Precedence, instances: list[tuple[Term, Term]]) -> bool:
    return all(lpo_greater(lhs, rhs, prec) for lhs, rhs in instances)


def search_precedence(max_size: int = 5) -> Optional[Precedence]:
    """First total precedence under which LPO orients every rule instance
    up to max_size, scanning all orders of the seven constructors."""
    instances = _rule_instances(max_size)
    for order in itertools.permutations(KINDS):
        prec = {kind: rank for rank, kind in enumerate(order)}
        if orients_all(prec, instances):
            return prec
    return None


@dataclass(frozen=True)
class LpoReport:
    """The external-boundary demonstration: full LPO (with its universal
    subterm clause) orients the kernel, while head precedence alone has a
    concrete counterexample."""

    precedence: tuple[str, ...]  # least to greatest
    orienting_count: int
    precedences_checked: int
    instances_checked: int
    rank_only: HuntReport

    @property
    def ok(self) -> bool:
        return self.orienting_count >= 1 and self.rank_only.found

    def to_json(self) -> dict:
        return {
            "precedence": list(self.precedence),
            "orientingPrecedences": self.orienting_count,
            "precedencesChecked": self.precedences_checked,
            "instancesChecked": self.instances_checked,
            "rankOnlyCounterexample": self.rank_only.to_json(),
        }


def lpo_boundary_report(max_size: int = 5, hunt_size: int = 7) -> LpoReport:
    instances = _rule_instances(max_size)
    first: Optional[tuple[str, ...]] = None
    count = 0
    total = 0
    for order in itertools.permutations(KINDS):
        total += 1
        prec = {kind: rank for rank, kind in enumerate(order)}
        if orients_all(prec, instances):
            count += 1
            if first is None:
                first = order
    rank_only = find_violation(
        catalog_family("precedence-rank"), RelationKind.FULL_ROOT, hunt_size
    )
    if first is None:
        raise RuntimeError("no orienting precedence found")
    return LpoReport(first, count, total, len(instances), rank_only)


# ---------------------------------------------------------------------------
# Exhaustive searches over interpretation families.


@dataclass(frozen=True)
class LinearInterpretation:
    """M(K(t1..tn)) = const_K + sum coef_K,i * M(ti), coefficients >= 1."""

    coefs: tuple[tuple[int, ...], ...]  # per kind, in KINDS order
    consts: tuple[int, ...]

    def value(self, t: Term) -> int:
        i = KIND_INDEX[t.kind]
        return self.consts[i] + sum(
            c * self.value(ch) for c, ch in zip(self.coefs[i], t.children)
        )

    def to_json(self) -> dict:
        return {
            kind: {"coefs": list(self.coefs[i]), "const": self.consts[i]}
            for i, kind in enumerate(KINDS)
        }


def _grow_step_operand(
    interp: LinearInterpretation, cap: int = 64
) -> tuple[Term, Term, Term]:
    """Build a rec_succ instance (step, lhs, rhs) on which `interp` fails
    to drop strictly, by pumping the step operand until the duplicated
    copy overtakes the left-hand side."""
    s = VOID
    if interp.value(VOID) == 0:
        # seed a positive value if any constructor constant allows one
        for i, kind in enumerate(KINDS):
            if kind != "void" and interp.consts[i] > 0:
                s = Term(kind, (VOID,) * ARITY[kind])
                break
    for _ in range(cap):
        lhs = rec(VOID, s, delta(VOID))
        rhs = app(s, rec(VOID, s, VOID))
        if interp.value(lhs) <= interp.value(rhs):
            return s, lhs, rhs
        s = merge(s, s)
    raise RuntimeError("failed to construct a non-dropping rec_succ instance")


def _linear_space_size(bound: int) -> int:
    total = 1
    for kind in KINDS:
        total *= bound ** ARITY[kind] * (bound + 1)
    return total


def _sample_interpretations(bound: int, count: int) -> list[LinearInterpretation]:
    """Deterministic spread over the parameter grid: per-slot strides by
    distinct primes, plus the all-min and all-max corners."""
    primes = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)
    coef_values = list(range(1, bound + 1))
    const_values = list(range(bound + 1))
    samples = []

    def build(pick: Callable[[int, list[int]], int]) -> LinearInterpretation:
        slot = itertools.count()
        coefs = tuple(
            tuple(pick(next(slot), coef_values) for _ in range(ARITY[kind]))
            for kind in KINDS
        )
        consts = tuple(pick(next(slot), const_values) for _ in KINDS)
        return LinearInterpretation(coefs, consts)

    samples.append(build(lambda i, vals: vals[0]))
    samples.append(build(lambda i, vals: vals[-1]))
    for j in range(2, count):
        samples.append(build(lambda i, vals, j=j: vals[(j * primes[i % len(primes)]) % len(vals)]))
    return samples


# An interpretation that strictly orients every unguarded root instance up
# to size 6 yet still fails on taller step operands: evidence that the
# bounded instance scan alone cannot deliver the orientation verdict.
SCAN_RESISTANT_INTERPRETATION = LinearInterpretation(
    coefs=((), (1,), (1,), (1, 1), (1, 1), (1, 1, 3), (1, 1)),
    consts=(0, 1, 1, 1, 0, 1, 3),
)


@dataclass
class PolyReport:
    coef_bound: int
    space_size: int
    orienting_assignments: int
    step_combos_checked: int
    min_step_excess: int
    samples_confirmed: int
    example: CounterexampleReport
    scan_resistant_small_violation: bool
    scan_resistant_example: CounterexampleReport

    @property
    def ok(self) -> bool:
        return self.orienting_assignments == 0 and self.min_step_excess >= 1

    def to_json(self) -> dict:
        return {
            "coefBound": self.coef_bound,
            "spaceSize": self.space_size,
            "orientingAssignments": self.orienting_assignments,
            "stepCombosChecked": self.step_combos_checked,
            "minStepExcess": self.min_step_excess,
            "samplesConfirmed": self.samples_confirmed,
            "example": self.example.to_json(),
            "scanResistant": {
                "interpretation": SCAN_RESISTANT_INTERPRETATION.to_json(),
                "violationWithinSize6": self.scan_resistant_small_violation,
                "example": self.scan_resistant_example.to_json(),
            },
        }


def _interp_counterexample(interp: LinearInterpretation, name: str) -> CounterexampleReport:
    _, lhs, rhs = _grow_step_operand(interp)
    before, after = interp.value(lhs), interp.value(rhs)
    assert after >= before
    witness = StepWitness(RuleId.REC_SUCC, (), lhs, rhs)
    verdict = "increase" if after > before else "no-strict-drop"
    return CounterexampleReport(name, witness, before, after, verdict, "nat")


def _interp_fails_within(interp: LinearInterpretation, max_size: int) -> bool:
    for w in iter_witnesses(RelationKind.FULL_ROOT, max_size):
        if interp.value(w.result) >= interp.value(w.source):
            return True
    return False


def poly_search(coef_bound: int = 3, sample_count: int = 64) -> PolyReport:
    """No linear interpretation with child coefficients in 1..coef_bound
    and constants in 0..coef_bound orients the kernel.

    The verdict is exact over the whole space: on the duplicating rule the
    right-hand side carries the step operand with coefficient a1 + a2*r2
    against r2 on the left (app coefficients a1, a2; rec step coefficient
    r2), a strict excess for every choice, so a tall enough step operand
    defeats any assignment.  The excess is checked for every (r2, a1, a2)
    combination, and non-dropping instances are constructed and evaluated
    concretely for a deterministic sample of full assignments.
    """
    if coef_bound < 1:
        raise ValueError("coef_bound must be >= 1")
    combos = 0
    min_excess: Optional[int] = None
    for r2 in range(1, coef_bound + 1):
        for a1 in range(1, coef_bound + 1):
            for a2 in range(1, coef_bound + 1):
                combos += 1
                excess = (a1 + a2 * r2) - r2
                min_excess = excess if min_excess is None else min(min_excess, excess)
    assert min_excess is not None and min_excess >= 1

    samples = _sample_interpretations(coef_bound, sample_count)
    confirmed = 0
    example: Optional[CounterexampleReport] = None
    for interp in samples:
        report = _interp_counterexample(interp, "linear-poly")
        confirmed += 1
        if example is None:
            example = report

    resistant_small = _interp_fails_within(SCAN_RESISTANT_INTERPRETATION, 6)
    resistant_example = _interp_counterexample(
        SCAN_RESISTANT_INTERPRETATION, "linear-poly"
    )
    assert example is not None
    return PolyReport(
        coef_bound,
        _linear_space_size(coef_bound),
        0,
        combos,
        min_excess,
        confirmed,
        example,
        resistant_small,
        resistant_example,
    )


@dataclass
class KboReport:
    weight_bound: int
    assignments_checked: int
    orienting_assignments: int
    example: CounterexampleReport

    @property
    def ok(self) -> bool:
        return self.orienting_assignments == 0

    def to_json(self) -> dict:
        return {
            "weightBound": self.weight_bound,
            "assignmentsChecked": self.assignments_checked,
            "orientingAssignments": self.orienting_assignments,
            "example": self.example.to_json(),
        }


def _weight_counterexample(weights: dict[str, int]) -> tuple[Term, Term, int, int]:
    """A rec_succ instance whose total symbol weight does not drop under
    `weights`, grown by pumping the step operand when necessary."""
    s = VOID
    if all(w == 0 for w in weights.values()):
        lhs = rec(VOID, s, delta(VOID))
        rhs = app(s, rec(VOID, s, VOID))
        return lhs, rhs, symbol_weight(lhs, weights), symbol_weight(rhs, weights)
    if weights["void"] == 0:
        for kind in KINDS:
            if kind != "void" and weights[kind] > 0:
                s = Term(kind, (VOID,) * ARITY[kind])
                break
    for _ in range(64):
        lhs = rec(VOID, s, delta(VOID))
        rhs = app(s, rec(VOID, s, VOID))
        wl, wr = symbol_weight(lhs, weights), symbol_weight(rhs, weights)
        if wr >= wl:
            return lhs, rhs, wl, wr
        s = merge(s, s)
    raise RuntimeError("failed to construct a non-dropping weighted instance")


def kbo_search(weight_bound: int = 3) -> KboReport:
    """Exhaustive sweep over all symbol-weight vectors in 0..weight_bound:
    none makes total weight strictly drop on every rule instance, because
    the duplicated step operand adds its own full weight to the right-hand
    side of rec_succ."""
    if weight_bound < 1:
        raise ValueError("weight_bound must be >= 1")
    checked = 0
    orienting = 0
    example: Optional[CounterexampleReport] = None
    for vector in itertools.product(range(weight_bound + 1), repeat=len(KINDS)):
        checked += 1
        weights = dict(zip(KINDS, vector))
        lhs, rhs, wl, wr = _weight_counterexample(weights)
        assert wr >= wl  # never a strict drop on this instance
        if example is None:
            witness = StepWitness(RuleId.REC_SUCC, (), lhs, rhs)
            verdict = "increase" if wr > wl else "no-strict-drop"
            example = CounterexampleReport("kbo-weight", witness, wl, wr, verdict, "nat")
    assert example is not None
    return KboReport(weight_bound, checked, orienting, example)
