"""Step relations of the KO7 kernel.

Four relations are exposed, each as an enumerator of all one-step
successors of a term:

  root_steps_full  - the 8 unguarded kernel rules at the root
  root_steps_safe  - the guarded subrelation at the root
  ctx_steps_safe   - safe steps closed under integrate/merge/app/rec
                     positions only (never under delta or eqw)
  ctx_steps_full   - full steps at every position

Guards of the safe relation:

  merge void t   -> t   requires delta_flag(t) = 0   (likewise t void)
  merge t t      -> t   requires kappa_m(t) empty
  rec b s void   -> b   requires delta_flag(b) = 0
  rec b s (delta n) -> app s (rec b s n)   unguarded
  integrate (delta t) -> void              unguarded
  eqw a a        -> void                  requires kappa_m(a) empty
  eqw a b        -> integrate (merge a b)  requires a != b

In the full relation the eqw rules overlap on eqw a a and the merge-void
rules carry no flag condition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .terms import Position, Term, VOID, app, integrate, merge, rec, replace_at, term_to_json


class RuleId(enum.Enum):
    # declaration order is the canonical rule order used to sort witnesses
    MERGE_VOID_LEFT = "merge_void_left"
    MERGE_VOID_RIGHT = "merge_void_right"
    MERGE_CANCEL = "merge_cancel"
    REC_ZERO = "rec_zero"
    REC_SUCC = "rec_succ"
    INT_DELTA = "int_delta"
    EQ_REFL = "eq_refl"
    EQ_DIFF = "eq_diff"

    @property
    def index(self) -> int:
        return _RULE_INDEX[self]


_RULE_INDEX = {r: i for i, r in enumerate(RuleId)}


class RelationKind(enum.Enum):
    FULL_ROOT = "full-root"
    SAFE_ROOT = "safe-root"
    SAFE_CTX = "safe-ctx"
    FULL_CTX = "full-ctx"


@dataclass(frozen=True)
class StepWitness:
    """One rewrite event: result = replace_at(source, position, rhs)."""

    rule: RuleId
    position: Position
    source: Term
    result: Term

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "pos": list(self.position),
            "from": term_to_json(self.source),
            "to": term_to_json(self.result),
        }


def delta_flag(t: Term) -> int:
    """1 iff the root is rec with a delta-rooted third child, else 0."""
    return int(t.kind == "rec" and t.children[2].kind == "delta")


def _has_rec(t: Term) -> bool:
    return t.kind == "rec" or any(_has_rec(c) for c in t.children)


def _kappa_empty(t: Term) -> bool:
    return not _has_rec(t)


def _root_rewrites(t: Term, safe: bool) -> list[tuple[RuleId, Term]]:
    out: list[tuple[RuleId, Term]] = []
    if t.kind == "merge":
        left, right = t.children
        if left == VOID and (not safe or delta_flag(right) == 0):
            out.append((RuleId.MERGE_VOID_LEFT, right))
        if right == VOID and (not safe or delta_flag(left) == 0):
            out.append((RuleId.MERGE_VOID_RIGHT, left))
        if left == right and (not safe or _kappa_empty(left)):
            out.append((RuleId.MERGE_CANCEL, left))
    elif t.kind == "rec":
        base, step, arg = t.children
        if arg == VOID and (not safe or delta_flag(base) == 0):
            out.append((RuleId.REC_ZERO, base))
        elif arg.kind == "delta":
            out.append((RuleId.REC_SUCC, app(step, rec(base, step, arg.children[0]))))
    elif t.kind == "integrate":
        if t.children[0].kind == "delta":
            out.append((RuleId.INT_DELTA, VOID))
    elif t.kind == "eqw":
        left, right = t.children
        if left == right:
            if not safe or _kappa_empty(left):
                out.append((RuleId.EQ_REFL, VOID))
            if not safe:
                out.append((RuleId.EQ_DIFF, integrate(merge(left, right))))
        else:
            out.append((RuleId.EQ_DIFF, integrate(merge(left, right))))
    return out


def root_steps_full(t: Term) -> list[StepWitness]:
    """All unguarded rule instances at the root."""
    return [StepWitness(r, (), t, u) for r, u in _root_rewrites(t, safe=False)]


def root_steps_safe(t: Term) -> list[StepWitness]:
    """All guarded rule instances at the root."""
    return [StepWitness(r, (), t, u) for r, u in _root_rewrites(t, safe=True)]


# context closure of the safe relation descends these signatures only
_SAFE_CTX_KINDS = frozenset({"integrate", "merge", "app", "rec"})


def _lift(t: Term, index: int, w: StepWitness) -> StepWitness:
    return StepWitness(
        w.rule, (index,) + w.position, t, replace_at(t, (index,), w.result)
    )


def ctx_steps_safe(t: Term) -> list[StepWitness]:
    """Safe steps under the partial context closure (no delta, no eqw)."""
    out = root_steps_safe(t)
    if t.kind in _SAFE_CTX_KINDS:
        for i, child in enumerate(t.children):
            out.extend(_lift(t, i, w) for w in ctx_steps_safe(child))
    return out


def ctx_steps_full(t: Term) -> list[StepWitness]:
    """Full steps at every position, closed under all constructors."""
    out = root_steps_full(t)
    for i, child in enumerate(t.children):
        out.extend(_lift(t, i, w) for w in ctx_steps_full(child))
    return out


_STEP_FUNCTIONS = {
    RelationKind.FULL_ROOT: root_steps_full,
    RelationKind.SAFE_ROOT: root_steps_safe,
    RelationKind.SAFE_CTX: ctx_steps_safe,
    RelationKind.FULL_CTX: ctx_steps_full,
}


def steps(t: Term, relation: RelationKind) -> list[StepWitness]:
    """One-step successors of t under the chosen relation."""
    return _STEP_FUNCTIONS[relation](t)
