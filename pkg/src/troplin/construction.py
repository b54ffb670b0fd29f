"""Join/meet construction programs over tropical projective space.

A program is a straight-line sequence of named elements: free input points
or lines, lines joining earlier points, and points meeting earlier lines.
Steps are n-ary in n-space (two parents in the plane), always computed with
the stable tropical Cramer solution, so tropical execution is total.

Each element has an undirected ancestor graph: its recursive ancestors as
vertices, child-parent links as edges.  Elements whose graph is a tree are
the well-behaved ones: a generic monomial lift of the inputs makes the
classical construction tropicalize back to the tropical one, step by step.
Elements whose graph has a cycle can fail this, and `verify_commutation`
exposes the failure concretely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .maxplus import TropPoint, trop_cramer
from .multipoly import VariableRegistry, cram_o
from .puiseux import (
    PuiseuxPoly,
    TropicalizationError,
    classical_cramer,
    tropicalize_point,
)

__all__ = [
    "POINT",
    "LINE",
    "Element",
    "ConstructionProgram",
    "ProgramBuilder",
    "ProgramError",
    "NonAdmissibleError",
    "LiftDegenerateError",
    "ConstructionGraph",
    "ancestor_graph",
    "is_tropically_admissible",
    "execute_tropical",
    "execute_classical",
    "GenericLift",
    "generic_lift",
    "ElementCheck",
    "CommutationReport",
    "verify_commutation",
    "symbolic_lift",
    "random_plane_program",
    "random_inputs",
]

POINT = "point"
LINE = "line"


class ProgramError(ValueError):
    """A malformed program: bad references, kinds or arities."""


class NonAdmissibleError(ProgramError):
    """An operation required a tree-admissible element and got a cycle."""


class LiftDegenerateError(RuntimeError):
    """Every resampling attempt left some pseudo-determinant at zero."""

    def __init__(self, element, component, attempts):
        self.element = element
        self.component = component
        self.attempts = attempts
        super().__init__(
            f"lift stayed degenerate at element {element!r} component "
            f"{component} after {attempts} attempts"
        )


@dataclass(frozen=True)
class Element:
    """One program step.  Inputs have ``op`` None and no parents."""

    name: str
    kind: str
    op: str | None = None
    parents: tuple = ()


class ConstructionProgram:
    """Validated straight-line construction with declared outputs."""

    def __init__(self, elements, outputs=()):
        seen: dict[str, Element] = {}
        for el in elements:
            if not isinstance(el, Element):
                raise ProgramError(f"not an element: {el!r}")
            if not el.name or not isinstance(el.name, str):
                raise ProgramError(f"element names must be non-empty strings: {el.name!r}")
            if el.name in seen:
                raise ProgramError(f"duplicate element name {el.name!r}")
            if el.kind not in (POINT, LINE):
                raise ProgramError(f"unknown kind {el.kind!r} for {el.name!r}")
            if el.op is None:
                if el.parents:
                    raise ProgramError(f"input {el.name!r} cannot have parents")
            else:
                if el.op not in ("join", "meet"):
                    raise ProgramError(f"unknown operation {el.op!r} for {el.name!r}")
                if len(el.parents) < 2:
                    raise ProgramError(f"{el.name!r} needs at least two parents")
                if len(set(el.parents)) != len(el.parents):
                    raise ProgramError(
                        f"{el.name!r} uses the same parent twice; "
                        "degenerate steps are rejected"
                    )
                parent_kind = POINT if el.op == "join" else LINE
                result_kind = LINE if el.op == "join" else POINT
                if el.kind != result_kind:
                    raise ProgramError(
                        f"{el.op} produces a {result_kind}, but {el.name!r} "
                        f"is declared a {el.kind}"
                    )
                for p in el.parents:
                    if p not in seen:
                        raise ProgramError(
                            f"{el.name!r} references {p!r} before its definition"
                        )
                    if seen[p].kind != parent_kind:
                        raise ProgramError(
                            f"{el.op} argument {p!r} of {el.name!r} must be a "
                            f"{parent_kind}, not a {seen[p].kind}"
                        )
            seen[el.name] = el
        outputs = tuple(outputs)
        for name in outputs:
            if name not in seen:
                raise ProgramError(f"output {name!r} is not defined")
        self.elements = tuple(seen.values())
        self.outputs = outputs
        self._index = seen

    @property
    def inputs(self):
        return tuple(el for el in self.elements if el.op is None)

    @property
    def derived(self):
        return tuple(el for el in self.elements if el.op is not None)

    def effective_outputs(self):
        """Declared outputs, or every element when none were declared."""
        if self.outputs:
            return self.outputs
        return tuple(el.name for el in self.elements)

    def element(self, name: str) -> Element:
        if name not in self._index:
            raise KeyError(f"no element named {name!r}")
        return self._index[name]

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class ProgramBuilder:
    """Small convenience for assembling programs in order."""

    def __init__(self):
        self._elements = []

    def input_point(self, name: str) -> str:
        self._elements.append(Element(name, POINT))
        return name

    def input_line(self, name: str) -> str:
        self._elements.append(Element(name, LINE))
        return name

    def join(self, name: str, *parents: str) -> str:
        self._elements.append(Element(name, LINE, "join", tuple(parents)))
        return name

    def meet(self, name: str, *parents: str) -> str:
        self._elements.append(Element(name, POINT, "meet", tuple(parents)))
        return name

    def build(self, outputs=()) -> ConstructionProgram:
        return ConstructionProgram(self._elements, outputs)


@dataclass(frozen=True)
class ConstructionGraph:
    """Undirected ancestor graph of one element.

    Vertices appear in program order; each derived ancestor contributes the
    edges to its parents, in parent order.  The graph is connected by
    construction, so it is a tree exactly when it has one edge less than it
    has vertices.
    """

    root: str
    vertices: tuple
    edges: tuple

    def adjacency(self):
        adj: dict[str, list] = {v: [] for v in self.vertices}
        for child, parent in self.edges:
            adj[child].append(parent)
            adj[parent].append(child)
        return adj

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    def find_cycle(self):
        """A closed vertex walk (first == last), or None for trees.

        Deterministic: depth-first from the root, neighbors in insertion
        order, returning the first back edge found.
        """
        adj = self.adjacency()
        visited = set()
        path = []

        def walk(vertex, came_from):
            visited.add(vertex)
            path.append(vertex)
            for neighbor in adj[vertex]:
                if neighbor == came_from:
                    continue
                if neighbor in visited:
                    start = path.index(neighbor)
                    return tuple(path[start:]) + (neighbor,)
                found = walk(neighbor, vertex)
                if found:
                    return found
            path.pop()
            return None

        return walk(self.root, None)


def ancestor_graph(program: ConstructionProgram, name: str) -> ConstructionGraph:
    """Ancestor graph of ``name``: recursive ancestors plus the element."""
    target = program.element(name)
    wanted = set()

    def collect(el):
        if el.name in wanted:
            return
        wanted.add(el.name)
        for p in el.parents:
            collect(program.element(p))

    collect(target)
    vertices = tuple(el.name for el in program.elements if el.name in wanted)
    edges = []
    for el in program.elements:
        if el.name in wanted and el.op is not None:
            for p in el.parents:
                edges.append((el.name, p))
    return ConstructionGraph(name, vertices, tuple(edges))


def is_tropically_admissible(program: ConstructionProgram, name: str):
    """Tree test for the ancestor graph.

    Returns ``(True, None)`` for trees, else ``(False, cycle)`` where cycle
    is a closed vertex walk witnessing the failure.
    """
    graph = ancestor_graph(program, name)
    if graph.is_tree():
        return True, None
    return False, graph.find_cycle()


def _as_trop_point(value) -> TropPoint:
    return value if isinstance(value, TropPoint) else TropPoint(value)


def _check_inputs(program, inputs):
    bound = {}
    width = None
    for el in program.inputs:
        if el.name not in inputs:
            raise ProgramError(f"unbound input {el.name!r}")
        point = _as_trop_point(inputs[el.name])
        if width is None:
            width = len(point)
        elif len(point) != width:
            raise ProgramError(
                f"input {el.name!r} has {len(point)} coordinates, expected {width}"
            )
        bound[el.name] = point
    return bound, width


def execute_tropical(program: ConstructionProgram, inputs) -> dict:
    """Evaluate every element tropically.  Total: never fails on values.

    ``inputs`` maps input names to coordinate tuples (n+1 rationals in
    n-space).  Every join/meet step must have exactly n parents; each is
    computed as the stable Cramer solution of the stacked parent rows.
    """
    values, width = _check_inputs(program, inputs)
    for el in program.derived:
        if width is not None and len(el.parents) != width - 1:
            raise ProgramError(
                f"{el.name!r} has {len(el.parents)} parents; steps in this "
                f"dimension need {width - 1}"
            )
        rows = [values[p].coords for p in el.parents]
        values[el.name] = trop_cramer(rows)
    return values


def execute_classical(program: ConstructionProgram, lifts) -> dict:
    """Evaluate every element over the Puiseux ring.

    ``lifts`` maps input names to tuples of `PuiseuxPoly`.  Derived steps
    are classical Cramer solutions, so each result is exact and satisfies
    its parents' linear forms identically.
    """
    values = {}
    width = None
    for el in program.inputs:
        if el.name not in lifts:
            raise ProgramError(f"unbound input {el.name!r}")
        vec = tuple(lifts[el.name])
        if width is None:
            width = len(vec)
        elif len(vec) != width:
            raise ProgramError(
                f"lift of {el.name!r} has {len(vec)} coordinates, expected {width}"
            )
        values[el.name] = vec
    for el in program.derived:
        if width is not None and len(el.parents) != width - 1:
            raise ProgramError(
                f"{el.name!r} has {len(el.parents)} parents; steps in this "
                f"dimension need {width - 1}"
            )
        rows = [values[p] for p in el.parents]
        values[el.name] = classical_cramer(rows)
    return values


@dataclass(frozen=True)
class GenericLift:
    """Monomial input lifts plus how many resamplings they took."""

    seed: int
    inputs: dict
    resamples: int


def _draw_coefficient(rng, bound):
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return Fraction(c)


def generic_lift(
    program: ConstructionProgram,
    inputs,
    seed: int,
    *,
    require_admissible: bool = True,
    max_resamples: int = 32,
    coefficient_bound: int = 10**6,
) -> GenericLift:
    """Lift every input coordinate to a monomial ``c * t^(-value)``.

    Coefficients are nonzero integers drawn from a seeded RNG.  With
    ``require_admissible`` (the default) every output must be
    tree-admissible, and the draw is accepted only when every
    pseudo-determinant along the construction is nonzero, which certifies
    that the classical chain tropicalizes step by step; offending draws are
    resampled up to ``max_resamples`` times before `LiftDegenerateError`.

    With ``require_admissible=False`` cyclic programs are allowed and only
    outright degenerate draws (a step whose classical solution would be
    identically zero in every component) are resampled; identically
    vanishing pseudo-determinants are then left for `verify_commutation`
    to report as mismatches.
    """
    values, _ = _check_inputs(program, inputs)
    if require_admissible:
        for name in program.effective_outputs():
            ok, cycle = is_tropically_admissible(program, name)
            if not ok:
                raise NonAdmissibleError(
                    f"element {name!r} is not tropically admissible; "
                    f"cycle: {'-'.join(cycle)}"
                )
    tropical = execute_tropical(program, inputs)
    rng = random.Random(seed)
    failure = (None, None)
    for attempt in range(max_resamples + 1):
        lifts = {}
        principal = {}
        for el in program.inputs:
            point = values[el.name]
            coeffs = tuple(
                _draw_coefficient(rng, coefficient_bound) for _ in point.coords
            )
            lifts[el.name] = tuple(
                PuiseuxPoly.monomial(c, -v) for c, v in zip(coeffs, point.coords)
            )
            principal[el.name] = coeffs
        ok = True
        for el in program.derived:
            trop_rows = [tropical[p].coords for p in el.parents]
            ring_rows = [principal[p] for p in el.parents]
            components = cram_o(trop_rows, ring_rows)
            if require_admissible:
                for idx, comp in enumerate(components):
                    if comp == 0:
                        failure = (el.name, idx)
                        ok = False
                        break
            else:
                if not any(components):
                    failure = (el.name, None)
                    ok = False
            if not ok:
                break
            principal[el.name] = components
        if ok:
            return GenericLift(seed, lifts, attempt)
    raise LiftDegenerateError(failure[0], failure[1], max_resamples + 1)


@dataclass(frozen=True)
class ElementCheck:
    """Comparison at one derived element.

    ``lifted`` is the tropicalized classical result, or None when some
    classical coordinate vanished and has no valuation.
    """

    name: str
    tropical: TropPoint
    lifted: TropPoint | None
    matches: bool


@dataclass(frozen=True)
class CommutationReport:
    seed: int
    resamples: int
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.matches for c in self.checks)

    @property
    def first_mismatch(self):
        for c in self.checks:
            if not c.matches:
                return c.name
        return None


def verify_commutation(
    program: ConstructionProgram,
    inputs,
    seed: int,
    *,
    require_admissible: bool = True,
    max_resamples: int = 32,
) -> CommutationReport:
    """Run both executions on a generic lift and compare element by element.

    The tropical execution and the classical execution of a seeded generic
    lift are computed independently; for each derived element the report
    records whether the valuations of the classical result reproduce the
    tropical coordinates.  For tree-admissible programs they always do;
    cyclic elements (reachable with ``require_admissible=False``) are where
    mismatches appear.
    """
    tropical = execute_tropical(program, inputs)
    lift = generic_lift(
        program,
        inputs,
        seed,
        require_admissible=require_admissible,
        max_resamples=max_resamples,
    )
    classical = execute_classical(program, lift.inputs)
    checks = []
    for el in program.derived:
        try:
            lifted = tropicalize_point(classical[el.name])
        except TropicalizationError:
            lifted = None
        checks.append(
            ElementCheck(
                el.name,
                tropical[el.name],
                lifted,
                lifted is not None and lifted == tropical[el.name],
            )
        )
    return CommutationReport(lift.seed, lift.resamples, tuple(checks))


def symbolic_lift(program: ConstructionProgram, inputs, *, max_terms: int = 100_000):
    """Track principal coefficients symbolically through the construction.

    Every input coordinate becomes a fresh variable (one family per input);
    each derived element's candidate principal coefficients are the
    `cram_o` vector of its parents.  Returns ``(registry, coefficients)``
    with coefficients mapping element names to polynomial tuples.

    For a tree-admissible element the components are nonzero, pairwise
    monomial-disjoint and share one multidegree, so they really are the
    principal coefficients of any generic lift.  A zero component pinpoints
    an element whose lifts cannot tropicalize to the tropical result.
    """
    values, _ = _check_inputs(program, inputs)
    tropical = execute_tropical(program, inputs)
    families = {}
    for el in program.inputs:
        families[el.name] = [
            f"{el.name}[{k}]" for k in range(1, len(values[el.name]) + 1)
        ]
    registry = VariableRegistry(families)
    coefficients = {}
    for el in program.inputs:
        coefficients[el.name] = tuple(registry.var(v) for v in families[el.name])
    for el in program.derived:
        trop_rows = [tropical[p].coords for p in el.parents]
        ring_rows = [coefficients[p] for p in el.parents]
        components = cram_o(trop_rows, ring_rows)
        size = sum(len(c.terms) for c in components)
        if size > max_terms:
            raise RuntimeError(
                f"symbolic lift exceeded {max_terms} terms at {el.name!r}"
            )
        coefficients[el.name] = components
    return registry, coefficients


def random_plane_program(
    rng: random.Random,
    *,
    max_steps: int = 10,
    max_depth: int = 3,
    n_inputs: int | None = None,
    tree_only: bool = True,
) -> ConstructionProgram:
    """Random plane construction program.

    With ``tree_only`` every derived element picks parents with disjoint
    ancestor sets, which makes the whole program tree-admissible by
    induction.  Without it, shared ancestors (and hence cycles) are
    allowed.  Outputs are the sink elements.
    """
    if n_inputs is None:
        n_inputs = rng.randint(3, 5)
    builder = ProgramBuilder()
    kinds = {}
    ancestors = {}
    depth = {}
    for i in range(1, n_inputs + 1):
        name = f"P{i}"
        builder.input_point(name)
        kinds[name] = POINT
        ancestors[name] = frozenset((name,))
        depth[name] = 0
    counter = 0
    steps = rng.randint(1, max_steps)
    for _ in range(steps):
        names = sorted(kinds)
        candidates = []
        for a_idx, a in enumerate(names):
            for b in names[a_idx + 1 :]:
                if kinds[a] != kinds[b]:
                    continue
                if max(depth[a], depth[b]) + 1 > max_depth:
                    continue
                if tree_only and (ancestors[a] & ancestors[b]):
                    continue
                candidates.append((a, b))
        if not candidates:
            break
        a, b = rng.choice(candidates)
        counter += 1
        if kinds[a] == POINT:
            name = f"L{counter}"
            builder.join(name, a, b)
            kinds[name] = LINE
        else:
            name = f"Q{counter}"
            builder.meet(name, a, b)
            kinds[name] = POINT
        ancestors[name] = ancestors[a] | ancestors[b] | {name}
        depth[name] = max(depth[a], depth[b]) + 1
    used = set()
    program = builder.build()
    for el in program.elements:
        used.update(el.parents)
    sinks = tuple(el.name for el in program.elements if el.name not in used)
    return ConstructionProgram(program.elements, sinks)


def random_inputs(
    program: ConstructionProgram,
    rng: random.Random,
    *,
    numerator_bound: int = 20,
    denominator_bound: int = 5,
) -> dict:
    """Random rational coordinates for every input of a plane program."""
    inputs = {}
    for el in program.inputs:
        coords = tuple(
            Fraction(
                rng.randint(-numerator_bound, numerator_bound),
                rng.randint(1, denominator_bound),
            )
            for _ in range(3)
        )
        inputs[el.name] = TropPoint(coords)
    return inputs
