"""The triple-lexicographic termination certificate for the safe relation.

measure3(t) = (delta_flag(t), kappa_m(t), tau(t)), compared by

    Lex( < on {0,1},  Dershowitz-Manna on multisets of naturals,  < on nat ).

tau is a weighted node count (eqw nodes weigh 3, everything else 1): the
minimal weighting that strictly orients the eqw-diff rule, whose right-hand
side has one more node than its left.  kappa_m collects the tau values of
all rec-rooted subterm occurrences, which hands rec-zero a strict
sub-multiset drop.  Every guarded root step strictly decreases the triple;
`decrease_sweep` checks this exhaustively and accounts for which component
decided each rule instance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .rewrite import StepWitness, delta_flag, root_steps_safe
from .terms import Term, count_terms, enumerate_terms, subterms
from .workers import chunk_bounds, run_chunks

NatMultiset = Counter  # element -> multiplicity, multiplicities >= 1


def tau(t: Term) -> int:
    """Weighted node count: eqw weighs 3, all other constructors 1."""
    weight = 3 if t.kind == "eqw" else 1
    return weight + sum(tau(c) for c in t.children)


def kappa_m(t: Term) -> NatMultiset:
    """Multiset of tau values of the rec-rooted subterm occurrences of t."""
    return Counter(tau(u) for u in subterms(t) if u.kind == "rec")


def dm_less(x: NatMultiset, y: NatMultiset) -> bool:
    """Strict Dershowitz-Manna order: x is obtained from y by removing a
    nonempty multiset Z and adding elements each strictly below some
    element of Z."""
    removed = y - x  # counter subtraction keeps positive multiplicities only
    if not removed:
        return False
    added = x - y
    return all(any(a < r for r in removed) for a in added)


@dataclass(frozen=True)
class Measure3:
    dflag: int
    kappa: NatMultiset
    tau: int

    def to_json(self) -> list:
        return [self.dflag, sorted(self.kappa.elements()), self.tau]

    def __str__(self):
        ms = "{" + ", ".join(str(v) for v in sorted(self.kappa.elements())) + "}"
        return f"({self.dflag}, {ms}, {self.tau})"


def measure3(t: Term) -> Measure3:
    return Measure3(delta_flag(t), kappa_m(t), tau(t))


def lex3_less(a: Measure3, b: Measure3) -> bool:
    if a.dflag != b.dflag:
        return a.dflag < b.dflag
    if a.kappa != b.kappa:
        return dm_less(a.kappa, b.kappa)
    return a.tau < b.tau


def deciding_component(after: Measure3, before: Measure3) -> str | None:
    """Which component makes after < before, or None if no strict drop."""
    if after.dflag != before.dflag:
        return "dflag" if after.dflag < before.dflag else None
    if after.kappa != before.kappa:
        return "kappaM" if dm_less(after.kappa, before.kappa) else None
    return "tau" if after.tau < before.tau else None


@dataclass
class DecreaseReport:
    max_size: int
    checked: int = 0
    violations: list[StepWitness] = field(default_factory=list)
    decided_by: Counter = field(default_factory=Counter)
    by_rule: dict[str, Counter] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "DecreaseReport") -> None:
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.decided_by.update(other.decided_by)
        for rule, counts in other.by_rule.items():
            self.by_rule.setdefault(rule, Counter()).update(counts)

    def to_json(self) -> dict:
        return {
            "maxSize": self.max_size,
            "checked": self.checked,
            "violations": [w.to_json() for w in self.violations],
            "decidedBy": {
                "dflag": self.decided_by["dflag"],
                "kappaM": self.decided_by["kappaM"],
                "tau": self.decided_by["tau"],
            },
            "byRule": {rule: dict(c) for rule, c in sorted(self.by_rule.items())},
        }


def _decrease_chunk(chunk: tuple) -> DecreaseReport:
    max_size, lo, hi = chunk
    report = DecreaseReport(max_size)
    for t in enumerate_terms(max_size)[lo:hi]:
        before = measure3(t)
        for w in root_steps_safe(t):
            report.checked += 1
            component = deciding_component(measure3(w.result), before)
            if component is None:
                report.violations.append(w)
            else:
                report.decided_by[component] += 1
                report.by_rule.setdefault(w.rule.value, Counter())[component] += 1
    return report


def decrease_sweep(max_size: int, workers: int = 1) -> DecreaseReport:
    """Check that every guarded root step on every term of size <= max_size
    strictly decreases measure3, recording the deciding component per rule."""
    bounds = chunk_bounds(count_terms(max_size), workers)
    parts = run_chunks(_decrease_chunk, [(max_size, lo, hi) for lo, hi in bounds], workers)
    report = parts[0]
    for part in parts[1:]:
        report.merge(part)
    return report
