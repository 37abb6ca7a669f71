"""Finite labeled transition systems and their derived step relations.

States are dense indices ``0 .. state_count-1``; display names live in an
optional side map.  A transition carries an :class:`Action`, which is either
a visible action name or the internal action ``TAU``.  Sets of states are
plain ``frozenset[int]`` throughout.

The derived relations come in three flavours:

* internal steps: zero or more internal transitions,
* delay steps: internal steps followed by exactly one visible transition
  (no trailing internal behavior),
* weak steps: a delay step followed by further internal closure.

Words are tuples of visible actions; the word-successor function folds the
set-lifted delay step over the letters.
"""

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

StateSet = frozenset[int]
Word = tuple["Action", ...]

_BAD_NAME_CHARS = set(" \t\n\r\f\v'\"")


@dataclass(frozen=True, slots=True)
class Action:
    """A transition label: a visible action name, or internal (``name is None``)."""

    name: Optional[str]

    def __post_init__(self):
        if self.name is not None:
            if not self.name:
                raise ValueError("visible action name must be nonempty")
            if any(c in _BAD_NAME_CHARS for c in self.name):
                raise ValueError(
                    f"visible action name {self.name!r} contains whitespace or a quote"
                )

    @property
    def is_tau(self) -> bool:
        return self.name is None

    @property
    def is_visible(self) -> bool:
        return self.name is not None

    def __str__(self) -> str:
        return self.name if self.name is not None else "tau"


TAU = Action(None)


def act(name: str) -> Action:
    """Convenience constructor for a visible action."""
    return Action(name)


Transition = tuple[int, Action, int]


class Lts:
    """An immutable labeled transition system over dense state indices.

    Duplicate transitions in the input are silently dropped (the transition
    relation has set semantics).  The internal closure of every state is
    precomputed at construction, since it is the hot operation of the set
    game's move generation; all queries afterwards are pure.
    """

    __slots__ = (
        "state_count",
        "transitions",
        "state_names",
        "visible_actions",
        "_strong",
        "_closure",
    )

    def __init__(
        self,
        state_count: int,
        transitions: Iterable[Transition],
        state_names: Optional[Mapping[int, str]] = None,
    ):
        if state_count < 0:
            raise ValueError("state_count must be nonnegative")
        self.state_count = state_count

        seen: set[Transition] = set()
        kept: list[Transition] = []
        for src, action, dst in transitions:
            if not (0 <= src < state_count and 0 <= dst < state_count):
                raise IndexError(
                    f"transition ({src}, {action}, {dst}) references a state "
                    f"outside 0..{state_count - 1}"
                )
            if not isinstance(action, Action):
                raise TypeError(f"transition label {action!r} is not an Action")
            t = (src, action, dst)
            if t not in seen:
                seen.add(t)
                kept.append(t)
        self.transitions: tuple[Transition, ...] = tuple(kept)

        names = dict(state_names) if state_names else {}
        for idx in names:
            if not (0 <= idx < state_count):
                raise IndexError(f"state name for unknown state {idx}")
        self.state_names: dict[int, str] = names

        strong: list[dict[Action, set[int]]] = [{} for _ in range(state_count)]
        for src, action, dst in kept:
            strong[src].setdefault(action, set()).add(dst)
        self._strong: tuple[dict[Action, frozenset[int]], ...] = tuple(
            {a: frozenset(t) for a, t in per_state.items()} for per_state in strong
        )

        self.visible_actions: tuple[Action, ...] = tuple(
            sorted({a for _, a, _ in kept if a.is_visible}, key=lambda a: a.name)
        )

        # One BFS over tau edges per state; the set-level closure later is
        # just a union of these.
        closure: list[frozenset[int]] = []
        for start in range(state_count):
            reached = {start}
            queue = deque((start,))
            while queue:
                s = queue.popleft()
                for nxt in self._strong[s].get(TAU, ()):
                    if nxt not in reached:
                        reached.add(nxt)
                        queue.append(nxt)
            closure.append(frozenset(reached))
        self._closure: tuple[frozenset[int], ...] = tuple(closure)

    # -- naming ----------------------------------------------------------

    def name_of(self, state: int) -> str:
        self._check_state(state)
        return self.state_names.get(state, str(state))

    def _check_state(self, state: int) -> None:
        if not (0 <= state < self.state_count):
            raise IndexError(f"state {state} outside 0..{self.state_count - 1}")

    # -- step relations ----------------------------------------------------

    def strong_successors(self, state: int, action: Action) -> StateSet:
        """States reachable from ``state`` by a single ``action`` transition."""
        self._check_state(state)
        return self._strong[state].get(action, frozenset())

    def internal_closure(self, states: StateSet | Iterable[int]) -> StateSet:
        """All states reachable from ``states`` by zero or more internal steps."""
        out: set[int] = set()
        for s in states:
            self._check_state(s)
            out |= self._closure[s]
        return frozenset(out)

    def delay_successors(self, states: StateSet | Iterable[int], action: Action) -> StateSet:
        """Set-lifted delay step: internal closure, then one strong ``action`` step.

        No trailing internal closure is applied.  ``action`` must be visible;
        the internal analogue of a delay step is :meth:`internal_closure`.
        """
        if action.is_tau:
            raise ValueError("delay step requires a visible action; use internal_closure")
        out: set[int] = set()
        for s in self.internal_closure(states):
            out |= self._strong[s].get(action, frozenset())
        return frozenset(out)

    def weak_successors(self, state: int, action: Action) -> StateSet:
        """Weak step: delay step plus trailing internal closure (closure alone for tau)."""
        self._check_state(state)
        if action.is_tau:
            return self._closure[state]
        return self.internal_closure(self.delay_successors(frozenset((state,)), action))

    def word_successors(self, word: Word, states: StateSet | Iterable[int]) -> StateSet:
        """Fold the set-lifted delay step over the letters of ``word``.

        The empty word returns ``states`` unchanged; the result is empty as
        soon as no state admits the next letter.
        """
        current = frozenset(states)
        for s in current:
            self._check_state(s)
        for letter in word:
            if letter.is_tau:
                raise ValueError("words contain visible actions only")
            current = self.delay_successors(current, letter)
        return current

    def weak_word_successors(self, state: int, word: Word) -> StateSet:
        """States reachable from ``state`` by a weak word step.

        Implemented as the internal closure of the delay-word successors; the
        equivalence of that with composing weak steps is a tested invariant.
        """
        self._check_state(state)
        return self.internal_closure(self.word_successors(word, frozenset((state,))))

    def is_stable(self, state: int) -> bool:
        """True iff ``state`` has no outgoing internal transition."""
        self._check_state(state)
        return not self._strong[state].get(TAU)

    def __repr__(self) -> str:
        return f"Lts(states={self.state_count}, transitions={len(self.transitions)})"
