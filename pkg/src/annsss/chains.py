"""Generators of the filtered complex, gradings, and canonical cycles.

A generator is a cube state plus a circle-labeling bitmask: bit i set
means circle i of the resolution carries the ``-`` label, i.e. the
variable of that circle appears in the monomial.  Chains are frozensets
of generators (formal GF(2) sums).

Gradings, for a generator above state u with p plus- and m minus-labels:

* homological   h = |u| - n_minus
* quantum       q = |u| + p - m + n_plus - 2 n_minus
* annular       k = (#nontrivial with +) - (#nontrivial with -)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Sequence

from .braid import ClosureDiagram, Point, Resolution

Generator = tuple[int, int]          # (state, labels bitmask)
Chain = FrozenSet[Generator]

EMPTY_CHAIN: Chain = frozenset()


@dataclass(frozen=True)
class GradingTriple:
    h: int
    q: int
    k: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.h, self.q, self.k)


def chain(*gens: Generator) -> Chain:
    return frozenset(gens)


def chain_add(a: Chain, b: Chain) -> Chain:
    return a ^ b


def gradings(diagram: ClosureDiagram, gen: Generator) -> GradingTriple:
    state, labels = gen
    resolution = diagram.resolve(state)
    n_circ = resolution.n_circles
    if labels >> n_circ:
        raise ValueError("label bitmask longer than the circle count")
    minus = labels.bit_count()
    plus = n_circ - minus
    h = state.bit_count() - diagram.n_minus
    q = state.bit_count() + plus - minus + diagram.n_plus - 2 * diagram.n_minus
    k = 0
    for circle in resolution.circles:
        if circle.nontrivial:
            k += -1 if (labels >> circle.index) & 1 else 1
    return GradingTriple(h, q, k)


class ComplexIndex:
    """Dense indexing of all generators of a diagram's cube.

    States are ordered by integer value; the block for state u starts at
    ``offset[u]`` and enumerates label masks in increasing order, so
    generator (u, labels) has index ``offset[u] + labels``.
    """

    def __init__(self, diagram: ClosureDiagram):
        self.diagram = diagram
        self.offsets: list[int] = []
        total = 0
        for state in range(1 << diagram.n_crossings):
            self.offsets.append(total)
            total += 1 << diagram.resolve(state).n_circles
        self.total = total

    def index_of(self, gen: Generator) -> int:
        state, labels = gen
        return self.offsets[state] + labels

    def generator_at(self, index: int) -> Generator:
        if not 0 <= index < self.total:
            raise IndexError(index)
        lo, hi = 0, len(self.offsets) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offsets[mid] <= index:
                lo = mid
            else:
                hi = mid - 1
        return (lo, index - self.offsets[lo])

    def generators(self) -> Iterable[Generator]:
        for state in range(1 << self.diagram.n_crossings):
            for labels in range(1 << self.diagram.resolve(state).n_circles):
                yield (state, labels)

    def chain_to_vector(self, ch: Chain) -> int:
        vec = 0
        for gen in ch:
            vec |= 1 << self.index_of(gen)
        return vec

    def vector_to_chain(self, vec: int) -> Chain:
        gens = []
        while vec:
            low = vec & -vec
            gens.append(self.generator_at(low.bit_length() - 1))
            vec ^= low
        return frozenset(gens)


def _circle_runs_up(circle, diagram: ClosureDiagram) -> Optional[tuple[int, int, bool]]:
    """Find a braid-box node the circle passes through vertically.

    Returns (column, boundary row, traversed upward in ccw order), using
    the first vertical piece with an endpoint at an integer boundary.
    """
    levels = len(diagram.sites)
    for (x0, y0), (x1, y1) in circle.segments():
        if x0 != x1 or x0 < 1 or x0 > diagram.n:
            continue
        for node_y in (y0, y1):
            if node_y == int(node_y) and 0 <= node_y <= levels:
                # the strand flows through the node in the segment's direction
                return (int(x0), int(node_y), y1 > y0)
    return None


def circle_is_ccw(circle, diagram: ClosureDiagram,
                  directions: Sequence[int]) -> bool:
    """Whether the circle, oriented by the link orientation, runs ccw.

    Only meaningful on circles of the oriented resolution for
    ``directions``; pieces of the circle inherit the directions of the
    strands they lie on.
    """
    found = _circle_runs_up(circle, diagram)
    if found is None:
        raise AssertionError("circle misses the braid box boundary nodes")
    col, row, ccw_upward = found
    comp = diagram.component_of_position()
    if row < len(diagram.sites):
        component = comp[(col, row)]
    else:
        component = comp["top"][col - 1]
    strand_up = directions[component] == 1
    # stored points are ccw; the strand agrees with ccw iff directions match
    return ccw_upward == strand_up


def canonical_generator(diagram: ClosureDiagram,
                        directions: Optional[Sequence[int]] = None) -> Chain:
    """The distinguished cycle attached to an orientation.

    At the oriented resolution, a circle of even nesting depth
    contributes its variable (label ``-``); a circle of odd depth
    contributes the sum of both labelings.  The returned chain is the
    full expansion.
    """
    state = diagram.oriented_state(directions)
    resolution = diagram.resolve(state)
    fixed = 0
    free: list[int] = []
    for circle in resolution.circles:
        if circle.depth % 2 == 0:
            fixed |= 1 << circle.index
        else:
            free.append(circle.index)
    gens = []
    for mask in range(1 << len(free)):
        labels = fixed
        for pos, circle_index in enumerate(free):
            if (mask >> pos) & 1:
                labels |= 1 << circle_index
        gens.append((state, labels))
    return frozenset(gens)


def flip_generator_labels(ch: Chain, n_circles: int) -> Chain:
    """Swap the x / 1+x factor on every circle of a chain's resolution.

    Linear map acting per circle as + -> +, - -> (+ and -); used by the
    disjoint-union composition rule when both factors wrap the axis an
    odd number of times.
    """
    out = set(ch)
    for circle_index in range(n_circles):
        bit = 1 << circle_index
        new: set[Generator] = set()
        for state, labels in out:
            if labels & bit:
                new ^= {(state, labels), (state, labels ^ bit)}
            else:
                new ^= {(state, labels)}
        out = new
    return frozenset(out)


def plamenevskaya_cycle(diagram: ClosureDiagram) -> Generator:
    """The generator at the braid-like resolution with every circle labeled -."""
    state = diagram.oriented_state()
    n_circ = diagram.resolve(state).n_circles
    return (state, (1 << n_circ) - 1)
