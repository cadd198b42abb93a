"""Marked surfaces, marked G-bundles and the module E(X) of functions on them.

A bundle on a connected marked surface of genus g with n boundary points is a
tuple (a, b, s, m): handle holonomies a_i, b_i, transporters s_j from the first
marked point to the j-th (j >= 2) and boundary monodromies m_j. The single
surface relation

    m_1 * prod_{j>=2} s_j m_j s_j^-1 * prod_i [a_i, b_i] = e

determines m_1, so the free coordinates are (a, b, s_2..s_n, m_2..m_n).
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from services.double import invariants_dimension_from_traces
from services.errors import CapExceededError, GluingMismatchError, InvalidCutError, UsageError
from services.groups import FiniteGroup
from services.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)


class MarkedSurface(BaseModel):
    """Connected oriented surface with one marked point per boundary circle."""

    model_config = {"frozen": True}

    genus: int = Field(ge=0)
    boundary_count: int = Field(ge=1)
    boundary_names: Tuple[str, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _default_names(cls, data):
        if isinstance(data, dict) and not data.get("boundary_names"):
            count = data.get("boundary_count", 0)
            data = {**data, "boundary_names": tuple(f"p{i + 1}" for i in range(count))}
        return data

    @model_validator(mode="after")
    def _check_names(self) -> "MarkedSurface":
        if len(self.boundary_names) != self.boundary_count:
            raise ValueError("one boundary name per boundary circle is required")
        if len(set(self.boundary_names)) != self.boundary_count:
            raise ValueError("boundary names must be distinct")
        return self

    @property
    def free_coordinates(self) -> int:
        return 2 * self.genus + 2 * self.boundary_count - 2

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    def bundle_count(self, order: int) -> int:
        return order**self.free_coordinates

    def index_of(self, name: str) -> int:
        """1-based boundary index of a boundary name."""
        try:
            return self.boundary_names.index(name) + 1
        except ValueError:
            raise InvalidCutError(f"unknown boundary name: {name}", {"name": name}) from None


def surface(genus: int, points: int, names: Optional[Sequence[str]] = None) -> MarkedSurface:
    """Validated marked surface; bad shapes are usage errors."""
    try:
        return MarkedSurface(
            genus=genus, boundary_count=points, boundary_names=tuple(names or ())
        )
    except ValidationError as e:
        raise UsageError(
            "invalid surface",
            {"genus": genus, "points": points, "errors": e.errors(include_url=False)},
        ) from None


class BundleTuple(NamedTuple):
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    s: Tuple[int, ...]  # s[j - 2] is the transporter to point j
    m: Tuple[int, ...]  # m[0] is solved from the surface relation


def _check_cap(count: int, cap: int, what: str, surface_: MarkedSurface) -> None:
    if count > cap:
        raise CapExceededError(
            f"{what} needs {count} states, above the cap of {cap}",
            {
                "genus": surface_.genus,
                "points": surface_.boundary_count,
                "states": count,
                "cap": cap,
            },
        )


def _handle_product(group: FiniteGroup, a: Sequence[int], b: Sequence[int]) -> int:
    product = 0
    for x, y in zip(a, b):
        product = group.mul[product][group.commutator(x, y)]
    return product


def solve_first_monodromy(
    group: FiniteGroup, a: Sequence[int], b: Sequence[int], s: Sequence[int], m_rest: Sequence[int]
) -> int:
    """m_1 = (prod_{j>=2} s_j m_j s_j^-1 * prod_i [a_i, b_i])^-1."""
    product = 0
    for sj, mj in zip(s, m_rest):
        product = group.mul[product][group.conj(sj, mj)]
    product = group.mul[product][_handle_product(group, a, b)]
    return group.inv[product]


def satisfies_relation(group: FiniteGroup, bundle: BundleTuple) -> bool:
    return bundle.m[0] == solve_first_monodromy(group, bundle.a, bundle.b, bundle.s, bundle.m[1:])


def _from_free(group: FiniteGroup, surface_: MarkedSurface, free: Sequence[int]) -> BundleTuple:
    g, n = surface_.genus, surface_.boundary_count
    a, b = tuple(free[:g]), tuple(free[g : 2 * g])
    s, m_rest = tuple(free[2 * g : 2 * g + n - 1]), tuple(free[2 * g + n - 1 :])
    return BundleTuple(a, b, s, (solve_first_monodromy(group, a, b, s, m_rest),) + m_rest)


def iter_bundles(
    group: FiniteGroup, surface_: MarkedSurface, prefix: Sequence[int] = ()
) -> Iterator[BundleTuple]:
    """Stream bundles in lexicographic order of free coordinates, optionally under a prefix."""
    remaining = surface_.free_coordinates - len(prefix)
    for rest in itertools.product(range(group.order), repeat=remaining):
        yield _from_free(group, surface_, tuple(prefix) + rest)


def enumerate_bundles(
    group: FiniteGroup, surface_: MarkedSurface, settings: Settings = DEFAULT_SETTINGS
) -> List[BundleTuple]:
    """
    All marked G-bundles of a surface, materialized.

    Raises:
        CapExceededError: If N^(2g+2n-2) is above the materialization cap
    """
    _check_cap(
        surface_.bundle_count(group.order), settings.materialize_cap, "enumeration", surface_
    )
    return list(iter_bundles(group, surface_))


def count_bundles(
    group: FiniteGroup, surface_: MarkedSurface, settings: Settings = DEFAULT_SETTINGS
) -> Tuple[int, Dict[Tuple[int, ...], int]]:
    """
    Stream the bundles and count them per monodromy vector.

    Returns:
        The total count and the grade histogram keyed by (m_1, ..., m_n)
    """
    _check_cap(surface_.bundle_count(group.order), settings.state_cap, "counting", surface_)
    histogram: Counter = Counter()
    for part in _partitioned(group, surface_, settings.threads, _grade_counter):
        histogram.update(part)
    return sum(histogram.values()), dict(sorted(histogram.items()))


def _grade_counter(group: FiniteGroup, surface_: MarkedSurface, prefix: Tuple[int, ...]) -> Counter:
    return Counter(bundle.m for bundle in iter_bundles(group, surface_, prefix))


def _partitioned(group: FiniteGroup, surface_: MarkedSurface, workers: int, job) -> List:
    """Run job over first-coordinate prefixes; partial results come back in prefix order."""
    if surface_.free_coordinates == 0:
        return [job(group, surface_, ())]
    prefixes = [(x,) for x in range(group.order)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: job(group, surface_, p), prefixes))
    return [job(group, surface_, p) for p in prefixes]


def monodromy(bundle: BundleTuple, index: int) -> int:
    """Boundary monodromy m_i, 1-based."""
    if not 1 <= index <= len(bundle.m):
        raise UsageError(
            f"boundary index {index} out of range", {"index": index, "points": len(bundle.m)}
        )
    return bundle.m[index - 1]


def rho_action(group: FiniteGroup, bundle: BundleTuple, index: int, g: int) -> BundleTuple:
    """
    Change the lift at marked point i by g.

    For i >= 2: s_i -> s_i g^-1 and m_i -> g m_i g^-1. For i = 1 the handles
    and m_1 are conjugated by g and every s_j -> g s_j.
    """
    monodromy(bundle, index)
    mul, inv = group.mul, group.inv
    if index == 1:
        return BundleTuple(
            tuple(group.conj(g, x) for x in bundle.a),
            tuple(group.conj(g, x) for x in bundle.b),
            tuple(mul[g][x] for x in bundle.s),
            (group.conj(g, bundle.m[0]),) + bundle.m[1:],
        )
    s = list(bundle.s)
    m = list(bundle.m)
    s[index - 2] = mul[s[index - 2]][inv[g]]
    m[index - 1] = group.conj(g, m[index - 1])
    return BundleTuple(bundle.a, bundle.b, tuple(s), tuple(m))


def act(group: FiniteGroup, bundle: BundleTuple, elements: Sequence[int]) -> BundleTuple:
    """rho_1(g_1) ... rho_n(g_n) applied to a bundle."""
    for index in range(len(elements), 0, -1):
        bundle = rho_action(group, bundle, index, elements[index - 1])
    return bundle


def stabilizer_mask(group: FiniteGroup, bundle: BundleTuple) -> int:
    """
    Bitmask of g_1 with rho(g_1, ..., g_n) P = P for some (hence a unique) g_2..g_n.

    The fixed-point conditions force g_j = s_j^-1 g_1 s_j, so g_1 must
    centralize every handle holonomy and every s_j m_j s_j^-1.
    """
    masks = group.centralizer_masks
    mask = (1 << group.order) - 1
    for x in bundle.a + bundle.b:
        mask &= masks[x]
    for sj, mj in zip(bundle.s, bundle.m[1:]):
        mask &= masks[group.conj(sj, mj)]
    return mask


def transported(group: FiniteGroup, bundle: BundleTuple, g1: int) -> Tuple[int, ...]:
    """The components (g_1, s_2^-1 g_1 s_2, ...) of the stabilizer element over g_1."""
    return (g1,) + tuple(group.mul[group.mul[group.inv[s]][g1]][s] for s in bundle.s)


def e_module_character(
    group: FiniteGroup,
    surface_: MarkedSurface,
    pairs: Sequence[Tuple[int, int]],
    settings: Settings = DEFAULT_SETTINGS,
) -> int:
    """
    Trace of (x)_i g_i delta_{h_i} on E(X), by direct enumeration.

    Counts bundles with monodromy h_i at every point that are fixed by
    rho_1(g_1) ... rho_n(g_n).
    """
    if len(pairs) != surface_.boundary_count:
        raise UsageError(
            "one (g, h) pair per boundary point is required",
            {"pairs": len(pairs), "points": surface_.boundary_count},
        )
    _check_cap(surface_.bundle_count(group.order), settings.state_cap, "character", surface_)
    elements = [g for g, _ in pairs]
    grades = tuple(h for _, h in pairs)
    return sum(
        1
        for bundle in iter_bundles(group, surface_)
        if bundle.m == grades and act(group, bundle, elements) == bundle
    )


# Aggregated statistics for the character route


def handle_distribution(group: FiniteGroup, genus: int) -> Counter:
    """
    Counter over (prod_i [a_i, b_i], common centralizer mask) of all handle tuples.

    Convolved one handle at a time, so the cost is governed by the number of
    distinct keys rather than N^(2g).
    """
    masks = group.centralizer_masks
    full = (1 << group.order) - 1
    single: Counter = Counter()
    for x in range(group.order):
        for y in range(group.order):
            single[(group.commutator(x, y), masks[x] & masks[y])] += 1
    result: Counter = Counter({(0, full): 1})
    for _ in range(genus):
        step: Counter = Counter()
        for (h, mask), count in result.items():
            for (c, cmask), ccount in single.items():
                step[(group.mul[h][c], mask & cmask)] += count * ccount
        result = step
    return result


def _bits(mask: int) -> Iterator[int]:
    g = 0
    while mask:
        if mask & 1:
            yield g
        mask >>= 1
        g += 1


def fixed_point_statistics(
    group: FiniteGroup,
    surface_: MarkedSurface,
    pair_orbit: Dict[Tuple[int, int], int],
    settings: Settings = DEFAULT_SETTINGS,
) -> Dict[Tuple[int, ...], int]:
    """
    Count pairs (P, g) with g in the stabilizer of P, keyed by the orbit vector.

    The orbit vector lists the conjugation orbit of (g_i, m_i(P)) at each point.
    Since that orbit equals the orbit of (g_1, s_i m_i s_i^-1), the count only
    depends on the handle distribution and the conjugated monodromies
    c_j = s_j m_j s_j^-1, each reached by N choices of (s_j, m_j).

    Args:
        group: The gauge group
        surface_: The marked surface
        pair_orbit: Orbit index of every commuting pair
        settings: Caps and thread count

    Returns:
        Sparse table orbit vector -> count
    """
    n = surface_.boundary_count
    handles = handle_distribution(group, surface_.genus)
    work = len(handles) * group.order ** (n - 1) * group.order
    _check_cap(work, settings.grid_cap, "character route", surface_)
    masks = group.centralizer_masks
    weight = group.order ** (n - 1)

    def job(first: Optional[int]) -> Counter:
        table: Counter = Counter()
        ranges = [range(group.order)] * (n - 1)
        if first is not None:
            ranges[0] = range(first, first + 1)
        for conjugated in itertools.product(*ranges):
            boundary, cmask = 0, (1 << group.order) - 1
            for c in conjugated:
                boundary = group.mul[boundary][c]
                cmask &= masks[c]
            for (h, hmask), count in handles.items():
                m1 = group.inv[group.mul[boundary][h]]
                for g1 in _bits(cmask & hmask):
                    key = (pair_orbit[(g1, m1)],) + tuple(
                        pair_orbit[(g1, c)] for c in conjugated
                    )
                    table[key] += count * weight
        return table

    firsts: List[Optional[int]] = list(range(group.order)) if n > 1 else [None]
    if settings.threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            parts = list(pool.map(job, firsts))
    else:
        parts = [job(f) for f in firsts]
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return dict(sorted(total.items()))


# Orbits and cutting


def count_orbits(
    group: FiniteGroup,
    surface_: MarkedSurface,
    bundles: Sequence[BundleTuple],
    moves: Sequence[Tuple[int, ...]],
) -> int:
    """
    Orbit count of a bundle set under the group generated by the given moves.

    Each move is an element vector (g_1, ..., g_n) applied through act().
    """
    members = set(bundles)
    seen = set()
    orbits = 0
    for start in bundles:
        if start in seen:
            continue
        orbits += 1
        seen.add(start)
        frontier = [start]
        while frontier:
            current = frontier.pop()
            for move in moves:
                image = act(group, current, move)
                if image not in members:
                    raise GluingMismatchError(
                        "action leaves the bundle set",
                        {"bundle": list(current), "move": list(move)},
                    )
                if image not in seen:
                    seen.add(image)
                    frontier.append(image)
    return orbits


class Cut(BaseModel):
    """A simple closed curve to cut along: non-separating, or separating (g1, S)."""

    model_config = {"frozen": True}

    separating: bool = False
    genus: int = Field(0, ge=0)
    names: Tuple[str, ...] = ()


class CutResult(BaseModel):
    """Pieces of a cut surface and where the two new boundary points sit."""

    model_config = {"frozen": True}

    pieces: Tuple[MarkedSurface, ...]
    first_name: str
    second_name: str
    first_location: Tuple[int, int]  # (piece, 1-based boundary index)
    second_location: Tuple[int, int]


def _fresh(names: Sequence[str], base: str) -> str:
    name = base
    while name in names:
        name += "'"
    return name


def cut_surface(surface_: MarkedSurface, cut: Cut) -> CutResult:
    """
    Cut a surface along a curve; new boundary names c', c'' come last.

    Raises:
        InvalidCutError: On a non-separating cut of a genus-0 surface, a
            separating genus larger than the surface genus, or unknown names
    """
    names = surface_.boundary_names
    first, second = _fresh(names, "c'"), _fresh(names, "c''")
    if first == second:
        second = first + "'"
    if not cut.separating:
        if surface_.genus < 1:
            raise InvalidCutError("non-separating cut needs genus >= 1", {"genus": 0})
        piece = surface(surface_.genus - 1, surface_.boundary_count + 2, names + (first, second))
        return CutResult(
            pieces=(piece,),
            first_name=first,
            second_name=second,
            first_location=(0, piece.boundary_count - 1),
            second_location=(0, piece.boundary_count),
        )
    if cut.genus > surface_.genus:
        raise InvalidCutError(
            "separating genus exceeds the surface genus",
            {"cut_genus": cut.genus, "genus": surface_.genus},
        )
    unknown = [x for x in cut.names if x not in names]
    if unknown or len(set(cut.names)) != len(cut.names):
        raise InvalidCutError("invalid boundary subset", {"names": list(cut.names)})
    inside = tuple(x for x in names if x in cut.names)
    outside = tuple(x for x in names if x not in cut.names)
    left = surface(cut.genus, len(inside) + 1, inside + (first,))
    right = surface(surface_.genus - cut.genus, len(outside) + 1, outside + (second,))
    return CutResult(
        pieces=(left, right),
        first_name=first,
        second_name=second,
        first_location=(0, left.boundary_count),
        second_location=(1, right.boundary_count),
    )


class GluingBijectionReport(BaseModel):
    """Outcome of the restriction bijection and invariants-dimension checks."""

    bundle_count: int
    orbit_count: int
    invariants_dimension: int
    invariants_dimension_swapped: int
    passed: bool


def _cut_bundles(
    group: FiniteGroup, result: CutResult, settings: Settings
) -> List[List[BundleTuple]]:
    total = 1
    for piece in result.pieces:
        total *= piece.bundle_count(group.order)
    _check_cap(total, settings.state_cap, "gluing check", result.pieces[0])
    return [enumerate_bundles(group, piece, settings) for piece in result.pieces]


def _constrained_states(
    group: FiniteGroup,
    result: CutResult,
    per_piece: Sequence[Sequence[BundleTuple]],
    settings: Settings,
) -> List[Tuple[BundleTuple, ...]]:
    """Bundles on the cut surface with m_{c'} m_{c''} = e, one tuple entry per piece."""
    (_, i1), (_, i2) = result.first_location, result.second_location
    if len(per_piece) == 1:
        return [
            (bundle,)
            for bundle in per_piece[0]
            if group.mul[bundle.m[i1 - 1]][bundle.m[i2 - 1]] == 0
        ]
    by_grade: Dict[int, List[BundleTuple]] = {}
    for bundle in per_piece[1]:
        by_grade.setdefault(bundle.m[i2 - 1], []).append(bundle)
    selected = []
    for left in per_piece[0]:
        for right in by_grade.get(group.inv[left.m[i1 - 1]], []):
            selected.append((left, right))
    _check_cap(len(selected), settings.materialize_cap, "gluing check", result.pieces[0])
    return selected


def _diagonal(group: FiniteGroup, result: CutResult, state: Tuple[BundleTuple, ...], g: int):
    pieces = list(state)
    for piece_index, index in (result.first_location, result.second_location):
        pieces[piece_index] = rho_action(group, pieces[piece_index], index, g)
    return tuple(pieces)


def _diagonal_orbits(
    group: FiniteGroup, result: CutResult, states: Sequence[Tuple[BundleTuple, ...]]
) -> int:
    seen = set()
    orbits = 0
    for state in states:
        if state in seen:
            continue
        orbits += 1
        seen.update(_diagonal(group, result, state, g) for g in range(group.order))
    return orbits


def _diagonal_fixed_average(
    group: FiniteGroup, result: CutResult, per_piece: Sequence[Sequence[BundleTuple]]
) -> int:
    """
    (1/N) sum over g of the trace of g delta_e acting on E(X_cut) through the coproduct.

    On two pieces a state is fixed exactly when both halves are, so the trace
    is a sum over m of products of per-piece fixed counts graded by m.
    """
    (p1, i1), (p2, i2) = result.first_location, result.second_location
    traces = []
    for g in range(group.order):
        if len(per_piece) == 1:
            traces.append(
                sum(
                    1
                    for bundle in per_piece[0]
                    if group.mul[bundle.m[i1 - 1]][bundle.m[i2 - 1]] == 0
                    and _diagonal(group, result, (bundle,), g) == (bundle,)
                )
            )
            continue
        first = Counter(
            bundle.m[i1 - 1]
            for bundle in per_piece[p1]
            if rho_action(group, bundle, i1, g) == bundle
        )
        second = Counter(
            bundle.m[i2 - 1]
            for bundle in per_piece[p2]
            if rho_action(group, bundle, i2, g) == bundle
        )
        traces.append(sum(count * second[group.inv[m]] for m, count in first.items()))
    return invariants_dimension_from_traces(group.order, traces)


def gluing_bijection_check(
    group: FiniteGroup,
    surface_: MarkedSurface,
    cut: Cut,
    settings: Settings = DEFAULT_SETTINGS,
) -> GluingBijectionReport:
    """
    Check restriction along a cut against the bundles of the glued surface.

    Asserts |P(X)| = #orbits of the diagonal action on cut bundles with
    m_{c'} m_{c''} = e, and that the D(G)-invariants of E(X_cut) have
    dimension |P(X)| for both orderings of c', c''.

    Raises:
        GluingMismatchError: With the full instance when any count differs
    """
    result = cut_surface(surface_, cut)
    expected = surface_.bundle_count(group.order)
    per_piece = _cut_bundles(group, result, settings)
    states = _constrained_states(group, result, per_piece, settings)
    orbits = _diagonal_orbits(group, result, states)
    invariants = _diagonal_fixed_average(group, result, per_piece)

    swapped = result.model_copy(
        update={
            "first_location": result.second_location,
            "second_location": result.first_location,
        }
    )
    invariants_swapped = _diagonal_fixed_average(group, swapped, per_piece)

    report = GluingBijectionReport(
        bundle_count=expected,
        orbit_count=orbits,
        invariants_dimension=invariants,
        invariants_dimension_swapped=invariants_swapped,
        passed=expected == orbits == invariants == invariants_swapped,
    )
    if not report.passed:
        raise GluingMismatchError(
            "restriction along the cut is not a bijection",
            {
                "group": group.name,
                "surface": surface_.model_dump(),
                "cut": cut.model_dump(),
                **report.model_dump(),
            },
        )
    logger.info(
        "✓ gluing bijection for (g=%d, n=%d): %d bundles",
        surface_.genus,
        surface_.boundary_count,
        expected,
    )
    return report


# Closed surfaces


def closed_surface_count(group: FiniteGroup, genus: int, table=None) -> Dict[str, int]:
    """
    Homomorphisms from the closed genus-g surface group, and their conjugation classes.

    The homomorphism count is taken from the handle distribution and, when a
    character table is given, compared with N * sum over chi of
    (N / chi(1))^(2g-2).

    Returns:
        {"homomorphisms": ..., "bundle_classes": ...}
    """
    handles = handle_distribution(group, genus)
    homomorphisms = sum(count for (h, _mask), count in handles.items() if h == 0)
    fixed = sum(count * bin(mask).count("1") for (h, mask), count in handles.items() if h == 0)
    if fixed % group.order:
        raise GluingMismatchError(
            "Burnside count is not integral", {"group": group.name, "genus": genus}
        )
    if table is not None:
        n = group.order
        mednykh = n * sum(Fraction(n, d) ** (2 * genus - 2) for d in table.degrees)
        if mednykh != homomorphisms:
            raise GluingMismatchError(
                "homomorphism count disagrees with the character formula",
                {
                    "group": group.name,
                    "genus": genus,
                    "enumerated": homomorphisms,
                    "formula": str(mednykh),
                },
            )
    return {"homomorphisms": homomorphisms, "bundle_classes": fixed // group.order}


def parse_cut(text: str) -> Cut:
    """
    Parse a cut description.

    Accepts "nonseparating" or "separating:<g1>:<name,name,...>".
    """
    text = text.strip()
    if text in ("nonseparating", "non-separating"):
        return Cut()
    parts = text.split(":")
    if parts[0] == "separating" and len(parts) in (2, 3):
        try:
            genus = int(parts[1])
        except ValueError:
            raise InvalidCutError(f"bad cut genus in {text!r}", {"cut": text}) from None
        names = tuple(x for x in (parts[2].split(",") if len(parts) == 3 else []) if x)
        if genus < 0:
            raise InvalidCutError("cut genus must be non-negative", {"cut": text})
        return Cut(separating=True, genus=genus, names=names)
    raise InvalidCutError(f"unrecognized cut: {text!r}", {"cut": text})


def trivial_monodromy_bundles(
    group: FiniteGroup, surface_: MarkedSurface, settings: Settings = DEFAULT_SETTINGS
) -> List[BundleTuple]:
    """Bundles whose monodromy is the identity at every boundary point."""
    g, n = surface_.genus, surface_.boundary_count
    _check_cap(group.order ** (2 * g + n - 1), settings.materialize_cap, "enumeration", surface_)
    identity = (0,) * (n - 1)
    selected = []
    for free in itertools.product(range(group.order), repeat=2 * g + n - 1):
        bundle = _from_free(group, surface_, free + identity)
        if bundle.m[0] == 0:
            selected.append(bundle)
    return selected
