"""Strategy DSL and bounded state-graph generation.

A strategy is a regular-expression-like composition of rule applications:
sequence, choice, repetition, option. Applying it to a task generates the
model solution (leftmost derivation) and, for diagnosis, the bounded set
of states a student could reach within a few steps.

Apply nodes may carry a named site filter: the rule catalog stays fully
general, but a teaching strategy needs to say things like "move the
non-x summand", which a bare rule id cannot express.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import DegreeTooHigh, DepthCapExceeded, NoDerivation
from .expr import EqSet, Equation, Pow, contains_var, const_value, is_literal_zero, summands
from .algebra import _equation_poly, expand_poly, is_solved_form, relation_signature
from .rules import RuleId, Site, applicable_sites, apply_rule, is_minor, _side

DEPTH_CAP = 8


# -- site filters --------------------------------------------------------------

def _affected(s: EqSet, site: Site) -> Iterator[Equation]:
    if site.eq is None:
        yield from s.equations
    else:
        yield s.equations[site.eq]


def _filter_isolate(s: EqSet, site: Site) -> bool:
    """Moves that isolate the unknown: non-x terms leave the x side,
    x terms leave the non-x side (toward the lhs)."""
    for eq in _affected(s, site):
        side = _side(eq, site.side)
        term = summands(side)[site.index]
        if site.side == "lhs":
            if not (contains_var(side) and not contains_var(term)):
                return False
        else:
            if not contains_var(term):
                return False
    return True


def _filter_from_rhs(s: EqSet, site: Site) -> bool:
    """Derive-to-zero moves: everything travels right to left."""
    return site.side == "rhs"


SITE_FILTERS: dict[str, Callable[[EqSet, Site], bool]] = {
    "isolate": _filter_isolate,
    "from-rhs": _filter_from_rhs,
}


# -- the DSL -------------------------------------------------------------------

class Strategy:
    __slots__ = ()


@dataclass(frozen=True)
class Succeed(Strategy):
    pass


@dataclass(frozen=True)
class Apply(Strategy):
    rule: RuleId
    where: str | None = None  # key into SITE_FILTERS


@dataclass(frozen=True)
class Seq(Strategy):
    parts: tuple[Strategy, ...]


@dataclass(frozen=True)
class Choice(Strategy):
    options: tuple[Strategy, ...]


@dataclass(frozen=True)
class Option(Strategy):
    body: Strategy


@dataclass(frozen=True)
class Many(Strategy):
    body: Strategy

    def __post_init__(self):
        if nullable(self.body):
            raise ValueError("Many body must make progress (must not be nullable)")


SUCCEED = Succeed()


def seq(*parts: Strategy) -> Strategy:
    flat = [p for part in parts for p in (part.parts if isinstance(part, Seq) else (part,))]
    flat = [p for p in flat if not isinstance(p, Succeed)]
    if not flat:
        return SUCCEED
    return flat[0] if len(flat) == 1 else Seq(tuple(flat))


def choice(*options: Strategy) -> Strategy:
    return options[0] if len(options) == 1 else Choice(tuple(options))


def nullable(st: Strategy) -> bool:
    """True when the strategy can succeed without consuming a rule."""
    if isinstance(st, (Succeed, Option, Many)):
        return True
    if isinstance(st, Apply):
        return False
    if isinstance(st, Seq):
        return all(nullable(p) for p in st.parts)
    if isinstance(st, Choice):
        return any(nullable(o) for o in st.options)
    raise TypeError(f"unknown strategy node {st!r}")


@dataclass(frozen=True)
class Continuation:
    rule: RuleId
    site: Site
    state: EqSet
    residual: Strategy


def firsts(st: Strategy, s: EqSet) -> list[Continuation]:
    """All single-rule continuations the strategy admits at state s.

    Preserves strategy order (leftmost choice first, uniform sites first)
    and deduplicates on (rule, site) keeping the first occurrence.
    """
    out: list[Continuation] = []
    seen: set[tuple[RuleId, Site]] = set()

    def emit(rule: RuleId, site: Site, residual: Strategy) -> None:
        if (rule, site) in seen:
            return
        seen.add((rule, site))
        out.append(Continuation(rule, site, apply_rule(rule, site, s), residual))

    def walk(node: Strategy, after: tuple[Strategy, ...]) -> None:
        if isinstance(node, Succeed):
            return
        if isinstance(node, Apply):
            keep = SITE_FILTERS[node.where] if node.where else None
            for site in applicable_sites(node.rule, s):
                if keep is None or keep(s, site):
                    emit(node.rule, site, seq(*after))
            return
        if isinstance(node, Seq):
            parts = node.parts
            walk(parts[0], tuple(parts[1:]) + after)
            if nullable(parts[0]):
                walk(seq(*parts[1:]), after)
            return
        if isinstance(node, Choice):
            for opt in node.options:
                walk(opt, after)
            return
        if isinstance(node, Option):
            walk(node.body, after)
            return
        if isinstance(node, Many):
            walk(node.body, (node,) + after)
            return
        raise TypeError(f"unknown strategy node {node!r}")

    walk(st, ())
    return out


# -- bounded state graph -------------------------------------------------------

@dataclass(frozen=True)
class StateNode:
    state: EqSet
    depth: int
    path: tuple[tuple[RuleId, Site], ...]
    residual: Strategy

    @property
    def rules(self) -> tuple[RuleId, ...]:
        return tuple(rule for rule, _ in self.path)


def reachable_states(st: Strategy, s: EqSet, max_depth: int) -> list[StateNode]:
    """Distinct states reachable in 1..max_depth non-minor steps.

    States are deduplicated on their relation signature (what the matcher
    can observe), keeping the shallowest node; minor rules extend the path
    without adding depth. Output is sorted by (depth, canonical state).
    """
    if max_depth > DEPTH_CAP:
        raise DepthCapExceeded(f"max_depth {max_depth} exceeds the cap of {DEPTH_CAP}")
    root = StateNode(s, 0, (), st)
    settled: dict[tuple, StateNode] = {}
    counter = 0
    frontier: list[tuple[int, int, StateNode]] = [(0, counter, root)]
    # Dijkstra over (depth, discovery order); minor rules are free edges,
    # so a signature is final only once its node is popped
    while frontier:
        depth, _, node = heapq.heappop(frontier)
        sig = relation_signature(node.state)
        if sig in settled:
            continue
        settled[sig] = node
        for cont in firsts(node.residual, node.state):
            ndepth = depth + (0 if is_minor(cont.rule) else 1)
            if ndepth > max_depth:
                continue
            if relation_signature(cont.state) in settled:
                continue
            child = StateNode(cont.state, ndepth, node.path + ((cont.rule, cont.site),), cont.residual)
            counter += 1
            heapq.heappush(frontier, (ndepth, counter, child))
    nodes = [n for n in settled.values() if n.depth >= 1]
    nodes.sort(key=lambda n: (n.depth, relation_signature(n.state)))
    return nodes


@dataclass(frozen=True)
class ModelSolution:
    states: tuple[EqSet, ...]
    rules: tuple[tuple[RuleId, Site], ...]


def model_solution(task: EqSet, st: Strategy) -> ModelSolution:
    """The canonically-first complete derivation to solved form."""

    # the cycle guard must be structural: relation signatures are blind to
    # cosmetic differences ("1*x = 1" vs "x = 1") that a path may cross
    def dfs(state: EqSet, node: Strategy, depth: int, seen: frozenset) -> list[tuple] | None:
        if is_solved_form(state):
            return []
        if depth >= DEPTH_CAP:
            return None
        for cont in firsts(node, state):
            if cont.state in seen:
                continue
            ndepth = depth + (0 if is_minor(cont.rule) else 1)
            tail = dfs(cont.state, cont.residual, ndepth, seen | {cont.state})
            if tail is not None:
                return [(cont.rule, cont.site, cont.state)] + tail
        return None

    path = dfs(task, st, 0, frozenset({task}))
    if path is None:
        raise NoDerivation("strategy does not reach solved form within the depth cap")
    states = (task,) + tuple(state for _, _, state in path)
    rules = tuple((rule, site) for rule, site, _ in path)
    return ModelSolution(states, rules)


# -- the strategy catalog ------------------------------------------------------

def _tidy_after(st: Strategy) -> Strategy:
    return seq(st, Option(Apply(RuleId.TIDY)))


def _isolation_tail() -> Strategy:
    gather = Many(choice(Apply(RuleId.MOVE_TERM, "isolate"), Apply(RuleId.COLLECT_TERMS)))
    finish = Many(choice(Apply(RuleId.NEGATE_BOTH_SIDES), Apply(RuleId.DIV_BY_CONST)))
    return seq(Option(gather), Option(finish), Option(Apply(RuleId.TIDY)))


def linear_strategy() -> Strategy:
    return _isolation_tail()


def sqrt_strategy() -> Strategy:
    return seq(_tidy_after(Apply(RuleId.SQRT_BOTH_SIDES)), _isolation_tail())


def factor_strategy() -> Strategy:
    return seq(
        _tidy_after(Apply(RuleId.FACTOR_COMMON)),
        _tidy_after(Apply(RuleId.SPLIT_ZERO_PRODUCT)),
        _isolation_tail(),
    )


def formula_strategy() -> Strategy:
    derive = Many(choice(Apply(RuleId.MOVE_TERM, "from-rhs"), Apply(RuleId.COLLECT_TERMS)))
    return seq(Option(derive), _tidy_after(Apply(RuleId.QUADRATIC_FORMULA)))


def expand_strategy() -> Strategy:
    return seq(_tidy_after(Apply(RuleId.EXPAND)), formula_strategy())


STRATEGIES: dict[str, Callable[[], Strategy]] = {
    "linear": linear_strategy,
    "sqrt": sqrt_strategy,
    "factor": factor_strategy,
    "quadratic-formula": formula_strategy,
    "expand": expand_strategy,
}


def _task_degree(task: EqSet) -> int:
    """Degree of lhs - rhs after full cancellation, maxed over the set."""
    degree = 0
    for eq in task.equations:
        degree = max(degree, max(_equation_poly(eq), default=0))
    if degree > 2:
        raise DegreeTooHigh(f"task has degree {degree}")
    return degree


def select_strategy(task: EqSet) -> tuple[str, Strategy]:
    """Shape-based preferred strategy for a single-equation task."""
    degree = _task_degree(task)
    if degree <= 1:
        return "linear", linear_strategy()
    eq = task.equations[0]
    if isinstance(eq.lhs, Pow) and eq.lhs.exponent == 2 and const_value(eq.rhs) is not None:
        return "sqrt", sqrt_strategy()
    if is_literal_zero(eq.rhs):
        poly = expand_poly(eq.lhs)
        if 0 not in poly and 1 in poly:  # a*x^2 + b*x = 0, factoring needs b != 0
            return "factor", factor_strategy()
    return "quadratic-formula", formula_strategy()


def residual_at(st: Strategy, task: EqSet, prev: EqSet, max_depth: int = DEPTH_CAP) -> tuple[EqSet, Strategy]:
    """Locate prev inside the strategy graph from the task.

    Returns the canonical state and remaining strategy at prev's position;
    falls back to (prev, st) when prev is not on the strategy's paths.
    """
    target = relation_signature(prev)
    if relation_signature(task) == target:
        return task, st
    for node in reachable_states(st, task, max_depth):
        if relation_signature(node.state) == target:
            return node.state, node.residual
    return prev, st
