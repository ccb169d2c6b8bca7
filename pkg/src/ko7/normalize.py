"""Normalization for the guarded root relation, plus a fueled reducer for
the full relation and the fixed-target reachability decider.

normalize_safe always terminates: measure3 strictly decreases on every
guarded root step (a well-founded order), and the decrease is re-asserted
at runtime on every step of every run.  The full relation carries no
termination claim, so normalize_full takes a fuel budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measure import Measure3, lex3_less, measure3
from .rewrite import StepWitness, ctx_steps_full, root_steps_safe
from .terms import Term, term_to_json

DEFAULT_FUEL = 10_000


class MeasureInvariantError(RuntimeError):
    """A guarded step failed to decrease the measure: a bug in the guards
    or the measure, never an expected outcome."""

    def __init__(self, witness: StepWitness, before: Measure3, after: Measure3):
        super().__init__(
            f"measure did not decrease on {witness.rule.value}: {before} -> {after}"
        )
        self.witness = witness


class TargetNotNormalError(ValueError):
    """Reachability target is not a normal form of the guarded relation."""


@dataclass(frozen=True)
class TraceStep:
    witness: StepWitness
    before: Measure3
    after: Measure3


@dataclass(frozen=True)
class Trace:
    source: Term
    steps: tuple[TraceStep, ...]
    final_term: Term

    def to_json(self) -> dict:
        return {
            "source": term_to_json(self.source),
            "steps": [
                {
                    "witness": s.witness.to_json(),
                    "before": s.before.to_json(),
                    "after": s.after.to_json(),
                }
                for s in self.steps
            ],
            "normalForm": term_to_json(self.final_term),
        }


@dataclass(frozen=True)
class FullRunResult:
    """Outcome of a fueled run under the full context relation."""

    normalized: bool
    term: Term  # the normal form, or the last term reached when fuel ran out
    steps: tuple[StepWitness, ...]

    @property
    def steps_taken(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "normalized": self.normalized,
            "term": term_to_json(self.term),
            "steps": [w.to_json() for w in self.steps],
        }


def is_normal_form_safe(t: Term) -> bool:
    """True iff no guarded root rule applies."""
    return not root_steps_safe(t)


def normalize_safe(t: Term) -> Trace:
    """Reduce t to a guarded-root normal form, taking the first witness in
    the fixed (position, rule) order at each step.  Asserts the measure
    decrease on every step and records both measures."""
    steps: list[TraceStep] = []
    current = t
    before = measure3(current)
    while True:
        witnesses = root_steps_safe(current)
        if not witnesses:
            return Trace(t, tuple(steps), current)
        w = witnesses[0]
        after = measure3(w.result)
        if not lex3_less(after, before):
            raise MeasureInvariantError(w, before, after)
        steps.append(TraceStep(w, before, after))
        current = w.result
        before = after


def normalize_full(t: Term, fuel: int = DEFAULT_FUEL) -> FullRunResult:
    """Apply first full-context witnesses up to `fuel` times."""
    steps: list[StepWitness] = []
    current = t
    for _ in range(fuel):
        witnesses = ctx_steps_full(current)
        if not witnesses:
            return FullRunResult(True, current, tuple(steps))
        w = witnesses[0]
        steps.append(w)
        current = w.result
    if not ctx_steps_full(current):
        return FullRunResult(True, current, tuple(steps))
    return FullRunResult(False, current, tuple(steps))


def reaches_target(t: Term, target: Term) -> bool:
    """Decide whether t reduces to `target` under the guarded root
    relation.  The target must itself be a normal form; with unique normal
    forms this is one normalization plus an equality check."""
    if not is_normal_form_safe(target):
        raise TargetNotNormalError(
            f"target {target!r} is not a normal form of the guarded relation"
        )
    return normalize_safe(t).final_term == target
