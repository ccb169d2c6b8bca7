"""Confluence workbench: fork enumeration, bounded joinability, local-join
and unique-normal-form sweeps for the safe relations, root critical-pair
coverage, and the full-relation non-join witness at eqw void void.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .measure import kappa_m
from .normalize import normalize_full, normalize_safe
from .rewrite import (
    RelationKind,
    StepWitness,
    root_steps_safe,
    steps,
)
from .terms import (
    Term,
    VOID,
    app,
    count_terms,
    enumerate_terms,
    eqw,
    integrate,
    merge,
    rec,
    render,
    term_to_json,
)
from .workers import chunk_bounds, run_chunks


@dataclass(frozen=True)
class Fork:
    """Two distinct one-step witnesses from the same source."""

    source: Term
    left: StepWitness
    right: StepWitness


@dataclass(frozen=True)
class JoinResult:
    joined: bool
    common: Term | None
    left_path: tuple[StepWitness, ...]
    right_path: tuple[StepWitness, ...]
    budget_used: int

    def to_json(self) -> dict:
        return {
            "joined": self.joined,
            "common": term_to_json(self.common) if self.common else None,
            "leftPath": [w.to_json() for w in self.left_path],
            "rightPath": [w.to_json() for w in self.right_path],
            "budgetUsed": self.budget_used,
        }


def forks(t: Term, relation: RelationKind) -> list[Fork]:
    """All unordered pairs of distinct witnesses of t under the relation."""
    ws = steps(t, relation)
    return [Fork(t, a, b) for a, b in itertools.combinations(ws, 2)]


def _reconstruct(parents: dict, term: Term) -> tuple[StepWitness, ...]:
    path = []
    while parents[term] is not None:
        prev, witness = parents[term]
        path.append(witness)
        term = prev
    return tuple(reversed(path))


def joinable(u: Term, v: Term, relation: RelationKind, budget: int) -> JoinResult:
    """Bidirectional breadth-first search for a common reduct of u and v,
    expanding at most `budget` terms per side."""
    sides = [
        {"parents": {u: None}, "queue": deque([u]), "expanded": 0},
        {"parents": {v: None}, "queue": deque([v]), "expanded": 0},
    ]

    def meeting(term: Term) -> JoinResult:
        used = sides[0]["expanded"] + sides[1]["expanded"]
        return JoinResult(
            True,
            term,
            _reconstruct(sides[0]["parents"], term),
            _reconstruct(sides[1]["parents"], term),
            used,
        )

    if u in sides[1]["parents"]:
        return meeting(u)

    while any(side["queue"] and side["expanded"] < budget for side in sides):
        for me, other in ((sides[0], sides[1]), (sides[1], sides[0])):
            if not me["queue"] or me["expanded"] >= budget:
                continue
            current = me["queue"].popleft()
            me["expanded"] += 1
            for w in steps(current, relation):
                if w.result in me["parents"]:
                    continue
                me["parents"][w.result] = (current, w)
                if w.result in other["parents"]:
                    return meeting(w.result)
                me["queue"].append(w.result)
    return JoinResult(
        False, None, (), (), sides[0]["expanded"] + sides[1]["expanded"]
    )


@dataclass
class SweepReport:
    relation: str
    max_size: int
    forks_checked: int = 0
    joined: int = 0
    inconclusive: list[Fork] = field(default_factory=list)
    violations: list[Fork] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "SweepReport") -> None:
        self.forks_checked += other.forks_checked
        self.joined += other.joined
        self.inconclusive.extend(other.inconclusive)
        self.violations.extend(other.violations)

    def to_json(self) -> dict:
        def fork_json(f: Fork) -> dict:
            return {
                "source": term_to_json(f.source),
                "left": f.left.to_json(),
                "right": f.right.to_json(),
            }

        return {
            "relation": self.relation,
            "maxSize": self.max_size,
            "forksChecked": self.forks_checked,
            "joined": self.joined,
            "inconclusive": [fork_json(f) for f in self.inconclusive],
            "violations": [fork_json(f) for f in self.violations],
        }


def _local_join_chunk(chunk: tuple) -> SweepReport:
    max_size, lo, hi, relation_value, budget = chunk
    relation = RelationKind(relation_value)
    report = SweepReport(relation.value, max_size)
    for t in enumerate_terms(max_size)[lo:hi]:
        for fork in forks(t, relation):
            report.forks_checked += 1
            result = joinable(fork.left.result, fork.right.result, relation, budget)
            if result.joined:
                report.joined += 1
            elif relation is RelationKind.SAFE_ROOT:
                report.violations.append(fork)
            else:
                report.inconclusive.append(fork)
    return report


def local_join_sweep(
    max_size: int, relation: RelationKind, budget: int, workers: int = 1
) -> SweepReport:
    """Join every single-step fork of every term of size <= max_size.

    A fork that fails to join within budget is a violation for the
    root-guarded relation (strong normalization makes the search complete
    there) and merely inconclusive for the context closure.
    """
    if relation not in (RelationKind.SAFE_ROOT, RelationKind.SAFE_CTX):
        raise ValueError("local-join sweep is defined for the safe relations")
    bounds = chunk_bounds(count_terms(max_size), workers)
    parts = run_chunks(
        _local_join_chunk,
        [(max_size, lo, hi, relation.value, budget) for lo, hi in bounds],
        workers,
    )
    report = parts[0]
    for part in parts[1:]:
        report.merge(part)
    return report


@dataclass
class UniqueNFReport:
    max_size: int
    terms_checked: int = 0
    violations: list[Term] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "UniqueNFReport") -> None:
        self.terms_checked += other.terms_checked
        self.violations.extend(other.violations)

    def to_json(self) -> dict:
        return {
            "maxSize": self.max_size,
            "termsChecked": self.terms_checked,
            "violations": [term_to_json(t) for t in self.violations],
        }


def guarded_root_normal_forms(t: Term) -> set[Term]:
    """All terminal terms over every guarded-root reduction order
    (exhaustive breadth-first exploration; finite by strong normalization)."""
    seen = {t}
    queue = deque([t])
    terminals: set[Term] = set()
    while queue:
        current = queue.popleft()
        witnesses = root_steps_safe(current)
        if not witnesses:
            terminals.add(current)
            continue
        for w in witnesses:
            if w.result not in seen:
                seen.add(w.result)
                queue.append(w.result)
    return terminals


def _unique_nf_chunk(chunk: tuple) -> UniqueNFReport:
    max_size, lo, hi = chunk
    report = UniqueNFReport(max_size)
    for t in enumerate_terms(max_size)[lo:hi]:
        report.terms_checked += 1
        terminals = guarded_root_normal_forms(t)
        if len(terminals) != 1 or normalize_safe(t).final_term not in terminals:
            report.violations.append(t)
    return report


def unique_nf_sweep(max_size: int, workers: int = 1) -> UniqueNFReport:
    """For every term, all guarded-root reduction orders must reach exactly
    one normal form, equal to the normalizer's."""
    bounds = chunk_bounds(count_terms(max_size), workers)
    parts = run_chunks(_unique_nf_chunk, [(max_size, lo, hi) for lo, hi in bounds], workers)
    report = parts[0]
    for part in parts[1:]:
        report.merge(part)
    return report


# ---------------------------------------------------------------------------
# Critical-pair coverage at the root: the eight guarded source shapes and
# their unique targets, plus the guard-blocked eqw shape (vacuously joined).

_ROOT_SHAPES = (
    "int-delta",
    "merge-void-left",
    "merge-void-right",
    "merge-cancel",
    "rec-zero",
    "rec-succ",
    "eqw-diff",
    "eqw-refl",
)


def _shape_targets(t: Term) -> list[tuple[str, Term]]:
    rows: list[tuple[str, Term]] = []
    if t.kind == "integrate" and t.children[0].kind == "delta":
        rows.append(("int-delta", VOID))
    elif t.kind == "merge":
        left, right = t.children
        if left == VOID:
            rows.append(("merge-void-left", right))
        if right == VOID:
            rows.append(("merge-void-right", left))
        if left == right:
            rows.append(("merge-cancel", left))
    elif t.kind == "rec":
        base, step, arg = t.children
        if arg == VOID:
            rows.append(("rec-zero", base))
        elif arg.kind == "delta":
            rows.append(("rec-succ", app(step, rec(base, step, arg.children[0]))))
    elif t.kind == "eqw":
        left, right = t.children
        if left != right:
            rows.append(("eqw-diff", integrate(merge(left, right))))
        elif not kappa_m(left):
            rows.append(("eqw-refl", VOID))
    return rows


@dataclass
class CoverageReport:
    max_size: int
    instances: dict[str, int] = field(default_factory=dict)
    mismatches: list[tuple[str, Term]] = field(default_factory=list)
    vacuous_checked: int = 0
    vacuous_violations: list[Term] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.mismatches
            and not self.vacuous_violations
            and all(self.instances.get(s, 0) >= 1 for s in _ROOT_SHAPES)
        )

    def to_json(self) -> dict:
        return {
            "maxSize": self.max_size,
            "instances": {s: self.instances.get(s, 0) for s in _ROOT_SHAPES},
            "mismatches": [
                {"shape": s, "term": term_to_json(t)} for s, t in self.mismatches
            ],
            "vacuousChecked": self.vacuous_checked,
            "vacuousViolations": [term_to_json(t) for t in self.vacuous_violations],
        }


def root_coverage_sweep(max_size: int) -> CoverageReport:
    """Realize each guarded root shape on enumerated terms and confirm that
    every applicable guarded step lands on the shape's unique target.

    The guard-blocked shape eqw a a with rec-containing a only exists above
    the enumeration sizes, so its instances are built directly from
    enumerated arguments a.
    """
    report = CoverageReport(max_size)
    pool = enumerate_terms(max_size)
    for t in pool:
        rows = _shape_targets(t)
        if not rows:
            continue
        witnesses = root_steps_safe(t)
        if not witnesses:
            continue  # guard-blocked instance, shape not realized here
        for shape, target in rows:
            report.instances[shape] = report.instances.get(shape, 0) + 1
            if any(w.result != target for w in witnesses):
                report.mismatches.append((shape, t))
    for a in pool:
        if kappa_m(a):
            report.vacuous_checked += 1
            blocked = eqw(a, a)
            if root_steps_safe(blocked):
                report.vacuous_violations.append(blocked)
    return report


# ---------------------------------------------------------------------------
# The full-relation non-join witness.


@dataclass(frozen=True)
class NonJoinWitness:
    source: Term
    reduct_refl: Term
    reduct_diff: Term
    normal_refl: Term
    normal_diff: Term
    distinct: bool
    join: JoinResult

    @property
    def ok(self) -> bool:
        return self.distinct and not self.join.joined

    def to_json(self) -> dict:
        return {
            "source": term_to_json(self.source),
            "reducts": {
                "eq_refl": term_to_json(self.reduct_refl),
                "eq_diff": term_to_json(self.reduct_diff),
            },
            "normalForms": {
                "eq_refl": term_to_json(self.normal_refl),
                "eq_diff": term_to_json(self.normal_diff),
            },
            "distinct": self.distinct,
            "joined": self.join.joined,
            "budgetUsed": self.join.budget_used,
        }


def non_join_witness(budget: int = 1000, fuel: int = 1000) -> NonJoinWitness:
    """eqw void void steps to both void and integrate (merge void void)
    under the full root relation; their full-context normal forms are void
    and (integrate void), which are distinct and never rejoin."""
    source = eqw(VOID, VOID)
    full = steps(source, RelationKind.FULL_ROOT)
    by_rule = {w.rule.value: w.result for w in full}
    reduct_refl = by_rule["eq_refl"]
    reduct_diff = by_rule["eq_diff"]
    run_refl = normalize_full(reduct_refl, fuel)
    run_diff = normalize_full(reduct_diff, fuel)
    if not (run_refl.normalized and run_diff.normalized):
        raise RuntimeError("non-join reducts did not normalize within fuel")
    join = joinable(reduct_refl, reduct_diff, RelationKind.FULL_CTX, budget)
    witness = NonJoinWitness(
        source,
        reduct_refl,
        reduct_diff,
        run_refl.term,
        run_diff.term,
        run_refl.term != run_diff.term,
        join,
    )
    if not witness.ok:
        raise RuntimeError(
            f"non-join witness falsified: {render(run_refl.term)} vs "
            f"{render(run_diff.term)} joined={join.joined}"
        )
    return witness
