"""Index scheduling strategies and the per-slot client selection rule.

Every strategy assigns each eligible flow a scalar index from its observable
history and the station serves the argmax.  Atomic kinds cover the classic
rules (round robin, max-rate, age- and service-normalized variants, oracle
SRPT, buffer-draining) plus the two completion-time-estimate indices ``T``
and ``TK``; ``linear`` and ``probabilistic`` combine atomic kinds.

Conventions: a zero denominator maps to +inf (untouched clients come first),
indices never evaluate to NaN, and argmax ties are broken toward the flow
served least recently, then toward the smallest id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CapabilityError, ParameterError

ATOMIC_KINDS = (
    "round_robin",
    "max_ci",
    "tas",
    "das",
    "pf",
    "srpt",
    "sectf",
    "T",
    "TK",
)
COMBINATOR_KINDS = ("linear", "probabilistic")
KINDS = ATOMIC_KINDS + COMBINATOR_KINDS

#: Default time constant of the T index's remaining-time estimate.
C_DEFAULT = 0.6 / math.log(13.0 / 7.0)

_PROB_TOL = 1e-9
_INF = math.inf


@dataclass(frozen=True)
class StrategySpec:
    """Declarative description of a scheduling strategy.

    Atomic kinds take no children.  ``linear`` sums child indices with
    non-negative ``weights``; ``probabilistic`` redraws which child decides
    each slot, with ``weights`` read as probabilities summing to one.
    Combinators nest one level deep: children must be atomic.
    """

    kind: str
    c_const: float = C_DEFAULT
    pareto_alpha: float = 5.5
    tk_variant: str = "inst"  # "inst": instantaneous rate; "mean": running mean rate
    mean_rate_mode: str = "empirical"  # "assigned" substitutes the true mean rate
    children: tuple["StrategySpec", ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.kind not in KINDS:
            raise ParameterError(f"unknown strategy kind {self.kind!r}")
        if self.tk_variant not in ("inst", "mean"):
            raise ParameterError(f"unknown tk_variant {self.tk_variant!r}")
        if self.mean_rate_mode not in ("empirical", "assigned"):
            raise ParameterError(f"unknown mean_rate_mode {self.mean_rate_mode!r}")
        if not self.c_const > 0.0:
            raise ParameterError(f"c_const={self.c_const} must be positive")
        if not self.pareto_alpha > 1.0:
            raise ParameterError(f"pareto_alpha={self.pareto_alpha} must exceed 1")
        if self.kind in ATOMIC_KINDS:
            if self.children or self.weights:
                raise ParameterError(f"atomic kind {self.kind!r} takes no children")
            return
        if not self.children:
            raise ParameterError(f"{self.kind} needs at least one child")
        if len(self.children) != len(self.weights):
            raise ParameterError("children and weights must have equal length")
        for child in self.children:
            if child.kind not in ATOMIC_KINDS:
                raise ParameterError("combinator children must be atomic kinds")
        if any(w < 0.0 for w in self.weights):
            raise ParameterError("weights must be non-negative")
        if self.kind == "linear":
            if not any(w > 0.0 for w in self.weights):
                raise ParameterError("linear combination needs a positive weight")
        else:  # probabilistic
            total = sum(self.weights)
            if abs(total - 1.0) > _PROB_TOL:
                raise ParameterError(f"mixture probabilities sum to {total}, expected 1")

    @property
    def anticipating(self) -> bool:
        """True when the strategy uses the true file size before completion."""
        if self.kind == "srpt":
            return True
        return any(c.anticipating for c in self.children)

    @property
    def uses_buffer(self) -> bool:
        if self.kind == "sectf":
            return True
        return any(c.uses_buffer for c in self.children)

    def label(self) -> str:
        if self.kind == "linear":
            parts = "+".join(f"{w:g}*{c.kind}" for c, w in zip(self.children, self.weights))
            return f"linear({parts})"
        if self.kind == "probabilistic":
            parts = ",".join(f"{c.kind}:{p:g}" for c, p in zip(self.children, self.weights))
            return f"prob({parts})"
        return self.kind


@dataclass(slots=True)
class FlowView:
    """What the scheduler observes about one eligible flow at slot t.

    ``served`` is the traffic delivered before this slot, ``rate`` the
    channel rate revealed for this slot, ``mean_rate_est`` the running mean
    of all rates observed so far (including this slot).  ``true_size`` is
    populated only for anticipating strategies.  ``last_served`` feeds the
    tie-breaking rule and is None for flows never served.
    """

    id: int
    t: int
    age: int
    served: float
    buffer: float
    rate: float
    mean_rate_est: float
    true_size: float | None = None
    last_served: int | None = None

    @property
    def throughput(self) -> float:
        """Lifetime throughput served/age, +inf for brand-new flows."""
        return _div(self.served, self.age)


def _div(num: float, den: float) -> float:
    """Division with the zero-denominator-to-+inf convention (never NaN)."""
    if den == 0.0:
        return _INF
    return num / den


def expected_file_size(served: float, alpha: float) -> float:
    """Posterior mean of a Pareto-distributed size given ``served`` already delivered.

    Conditioning a Pareto(shape ``alpha``) size on exceeding ``served``
    gives mean ``alpha/(alpha-1) * served``; with nothing observed yet the
    estimate is 0.
    """
    if not alpha > 1.0:
        raise ParameterError(f"alpha={alpha} must exceed 1 for a finite mean")
    if served < 0.0:
        raise ParameterError(f"served={served} must be non-negative")
    if served == 0.0:
        return 0.0
    return alpha / (alpha - 1.0) * served


def pareto_posterior_density(size: float, served: float, alpha: float) -> float:
    """Density of a Pareto(``alpha``) file size conditioned on exceeding ``served``.

    p(size) = alpha * served**alpha / size**(alpha+1) for size >= served > 0;
    its mean is ``expected_file_size(served, alpha)``.
    """
    if not alpha > 1.0:
        raise ParameterError(f"alpha={alpha} must exceed 1")
    if not served > 0.0:
        raise ParameterError(f"served={served} must be positive to condition on")
    if size < served:
        return 0.0
    return alpha * served**alpha / size ** (alpha + 1.0)


def _idx_round_robin(spec, view):
    return _div(1.0, view.age)


def _idx_max_ci(spec, view):
    return view.rate


def _idx_tas(spec, view):
    return _div(view.rate, view.age)


def _idx_das(spec, view):
    return _div(view.rate, view.served)


def _idx_pf(spec, view):
    return _div(view.rate * view.age, view.served)


def _idx_srpt(spec, view):
    if view.true_size is None:
        raise CapabilityError("srpt needs the true file size (anticipating mode)")
    return _div(view.rate, view.true_size - view.served)


def _idx_sectf(spec, view):
    return _div(view.rate, view.buffer)


def _idx_t(spec, view):
    inner = _div(view.served, spec.c_const * view.mean_rate_est)
    return _div(view.served, view.age + inner)


def _idx_tk(spec, view):
    r = view.rate if spec.tk_variant == "inst" else view.mean_rate_est
    return _div(r * view.served, view.age)


def _idx_linear(spec, view):
    return linear_combine(
        spec.weights, [compute_index(c, view) for c in spec.children]
    )


_INDEX_FUNCS = {
    "round_robin": _idx_round_robin,
    "max_ci": _idx_max_ci,
    "tas": _idx_tas,
    "das": _idx_das,
    "pf": _idx_pf,
    "srpt": _idx_srpt,
    "sectf": _idx_sectf,
    "T": _idx_t,
    "TK": _idx_tk,
    "linear": _idx_linear,
}


def compute_index(spec: StrategySpec, view: FlowView) -> float:
    """Index value of one flow under ``spec``; +inf on zero denominators, never NaN."""
    try:
        fn = _INDEX_FUNCS[spec.kind]
    except KeyError:
        raise ParameterError(
            f"{spec.kind!r} has no per-flow index; use select_client"
        ) from None
    return fn(spec, view)


def linear_combine(weights, values) -> float:
    """Weighted sum of index values; zero weights mask their value entirely."""
    if len(weights) != len(values):
        raise ParameterError("weights and values must have equal length")
    total = 0.0
    for w, v in zip(weights, values):
        if w == 0.0:
            continue
        if v == _INF:
            return _INF
        total += w * v
    return total


def _draw_child(spec: StrategySpec, rng) -> StrategySpec:
    # one uniform is consumed per call, even for a single-child mixture
    u = rng.random()
    acc = 0.0
    for child, p in zip(spec.children, spec.weights):
        acc += p
        if u < acc:
            return child
    return spec.children[-1]


def select_client(spec: StrategySpec, views, rng=None):
    """Pick the flow id to serve this slot, or None when no flow is eligible.

    A probabilistic spec first draws which child decides (consuming exactly
    one uniform from ``rng``), then the chosen rule's argmax applies.  Ties
    go to the flow served least recently, then to the smallest id.
    """
    if spec.kind == "probabilistic":
        spec = _draw_child(spec, rng)
    if not views:
        return None
    if len(views) == 1:
        return views[0].id
    index_fn = _INDEX_FUNCS[spec.kind]
    best_id = None
    best_v = -_INF
    best_rec = -_INF
    for view in views:
        v = index_fn(spec, view)
        if best_id is not None and v < best_v:
            continue
        rec = _INF if view.last_served is None else view.t - view.last_served
        if (
            best_id is None
            or v > best_v
            or rec > best_rec
            or (rec == best_rec and view.id < best_id)
        ):
            best_id = view.id
            best_v = v
            best_rec = rec
    return best_id


# convenience constructors used by the experiment harness


def atomic(kind: str, **kwargs) -> StrategySpec:
    return StrategySpec(kind=kind, **kwargs)


def linear_of(children_weights, **kwargs) -> StrategySpec:
    children = tuple(c for c, _ in children_weights)
    weights = tuple(w for _, w in children_weights)
    return StrategySpec(kind="linear", children=children, weights=weights, **kwargs)


def mixture_of(children_probs, **kwargs) -> StrategySpec:
    children = tuple(c for c, _ in children_probs)
    probs = tuple(p for _, p in children_probs)
    return StrategySpec(kind="probabilistic", children=children, weights=probs, **kwargs)
