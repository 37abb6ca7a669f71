"""A Hennessy-Milner logic fragment interleaving internal behavior.

Formulas alternate points of possible internal behavior with observations
and negated disjunctions:

* ``Truth`` holds everywhere,
* ``DelayObs(a, body)`` holds where some delay-``a`` successor satisfies
  ``body`` (read: after internal steps, observe ``a``, then ``body``),
* ``DelayNor(branches)`` holds where some internal-closure successor refutes
  every branch (read: after internal steps, none of the branches).

An empty ``DelayNor`` negates the empty disjunction and therefore holds at
every state.  This fragment is exactly expressive enough to certify failed
contrasimulation checks.
"""

from dataclasses import dataclass

from .lts import Action, Lts


class HmlFormula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Truth(HmlFormula):
    pass


@dataclass(frozen=True, slots=True)
class DelayObs(HmlFormula):
    action: Action
    body: HmlFormula

    def __post_init__(self):
        if self.action.is_tau:
            raise ValueError("observations are of visible actions")


@dataclass(frozen=True, slots=True)
class DelayNor(HmlFormula):
    branches: tuple[HmlFormula, ...]


TRUTH = Truth()


def hml_satisfies(lts: Lts, state: int, formula: HmlFormula) -> bool:
    """Decide whether ``state`` satisfies ``formula``.

    Subformulas may be shared between branches; results are memoized per
    (state, subformula) pair.
    """
    memo: dict[tuple[int, int], bool] = {}

    def sat(s: int, phi: HmlFormula) -> bool:
        key = (s, id(phi))
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(phi, Truth):
            result = True
        elif isinstance(phi, DelayObs):
            result = any(
                sat(s2, phi.body)
                for s2 in lts.delay_successors(frozenset((s,)), phi.action)
            )
        elif isinstance(phi, DelayNor):
            result = any(
                not any(sat(s2, b) for b in phi.branches)
                for s2 in lts.internal_closure(frozenset((s,)))
            )
        else:
            raise TypeError(f"unknown formula {phi!r}")
        memo[key] = result
        return result

    lts._check_state(state)
    return sat(state, formula)


def format_formula(formula: HmlFormula) -> str:
    """Serialize a formula: ``T``, ``<e><a>...`` and ``<e>~(...|...)``."""
    if isinstance(formula, Truth):
        return "T"
    if isinstance(formula, DelayObs):
        return f"<e><{formula.action}>{format_formula(formula.body)}"
    if isinstance(formula, DelayNor):
        inner = "|".join(format_formula(b) for b in formula.branches)
        return f"<e>~({inner})"
    raise TypeError(f"unknown formula {formula!r}")
