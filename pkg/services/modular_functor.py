"""Dimensions of the modular functor spaces W(X; V_1, ..., V_n).

W(X; V) = Hom over D(G)^n of (E(X), V_1 (x) ... (x) V_n). Three independent
routes compute its dimension:

  characters   the character inner product <chi_E, (x)_i chi_{V_i}>, from
               fixed-point statistics of the bundle set
  enumeration  orbit counting on bundles with trivial monodromy, for vacuum
               labels only
  verlinde     the Verlinde formula from the modular data
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, model_validator

from services.bundles import (
    Cut,
    MarkedSurface,
    closed_surface_count,
    count_orbits,
    cut_surface,
    fixed_point_statistics,
    trivial_monodromy_bundles,
)
from services.cyclotomic import CycloNumber
from services.double import DoubleLabel, DrinfeldDouble
from services.errors import (
    CapExceededError,
    CompletenessError,
    GluingMismatchError,
    IntegralityError,
    RouteDisagreementError,
    UsageError,
)
from services.groups import FiniteGroup
from services.modular_data import ModularData, modular_data, verlinde_dim
from services.settings import DEFAULT_SETTINGS, Settings
from services.table_cache import CharacterTableCache

logger = logging.getLogger(__name__)

METHODS = ("auto", "characters", "enumeration", "verlinde", "all")

Combination = Tuple[Tuple[int, int], ...]  # (label index, multiplicity) pairs


class LabelVector(BaseModel):
    """One formal non-negative combination of labels per boundary point."""

    model_config = {"frozen": True}

    surface: MarkedSurface
    labels: Tuple[Combination, ...]

    @model_validator(mode="after")
    def _check(self) -> "LabelVector":
        if len(self.labels) != self.surface.boundary_count:
            raise ValueError("one label combination per boundary point is required")
        for combination in self.labels:
            if any(count < 0 for _index, count in combination):
                raise ValueError("label multiplicities must be non-negative")
        return self

    @classmethod
    def simple(cls, surface: MarkedSurface, labels: Sequence[DoubleLabel]) -> "LabelVector":
        return cls(surface=surface, labels=tuple(((label.index, 1),) for label in labels))

    def expansions(self) -> List[Tuple[int, Tuple[int, ...]]]:
        """Multilinear expansion into (coefficient, simple label index vector)."""
        result = []
        for choice in itertools.product(*self.labels):
            coefficient = 1
            for _index, count in choice:
                coefficient *= count
            if coefficient:
                result.append((coefficient, tuple(index for index, _ in choice)))
        return result

    def is_vacuum(self) -> bool:
        return all(combination == ((0, 1),) for combination in self.labels)


class DimReport(BaseModel):
    """Per-route dimensions of one W space and whether they agree."""

    surface: MarkedSurface
    labels: List[List[Tuple[int, int]]]
    routes: Dict[str, int]
    skipped: Dict[str, str] = Field(default_factory=dict)
    dimension: int


class ClosedDimReport(BaseModel):
    """Per-route dimensions of W on a closed surface."""

    genus: int
    routes: Dict[str, int]
    skipped: Dict[str, str] = Field(default_factory=dict)
    dimension: int


class DecompositionTable(BaseModel):
    """dim W(X; lambda) for every simple label vector, with both completeness sums."""

    surface: MarkedSurface
    entries: Dict[Tuple[int, ...], int]
    weighted_total: int
    square_total: int
    self_pairing: int


class GluingRecord(BaseModel):
    labels: Tuple[int, ...]
    dimension: int
    contributions: Dict[int, int]  # mu -> dim of the cut space with (mu, mu*)


class GluingReport(BaseModel):
    surface: MarkedSurface
    cut: Cut
    pieces: List[MarkedSurface]
    records: List[GluingRecord]
    passed: bool


class ModularFunctorEngine:
    """Dimensions, decomposition tables and gluing checks for one gauge group."""

    def __init__(
        self,
        group: FiniteGroup,
        settings: Settings = DEFAULT_SETTINGS,
        cache: Optional[CharacterTableCache] = None,
    ):
        """
        Initialize the engine.

        Args:
            group: The finite gauge group
            settings: Caps and worker count
            cache: Optional on-disk character-table cache
        """
        self.group = group
        self.settings = settings
        self.cache = cache
        self._double: Optional[DrinfeldDouble] = None
        self._modular: Optional[ModularData] = None
        self._statistics: Dict[MarkedSurface, Dict[Tuple[int, ...], int]] = {}
        self._tables: Dict[MarkedSurface, Dict[Tuple[int, ...], int]] = {}
        self._conj_characters: Optional[List[List[CycloNumber]]] = None

    @property
    def double(self) -> DrinfeldDouble:
        if self._double is None:
            self._double = DrinfeldDouble(
                self.group, cache=self.cache, prime_bound=self.settings.prime_search_bound
            )
        return self._double

    @property
    def modular(self) -> ModularData:
        if self._modular is None:
            self._modular = modular_data(self.double)
        return self._modular

    @property
    def conj_characters(self) -> List[List[CycloNumber]]:
        """conj chi_lambda on every commuting-pair orbit, rows in label order."""
        if self._conj_characters is None:
            self._conj_characters = [
                [v.conj() for v in self.double.label_character(label).values]
                for label in self.double.labels
            ]
        return self._conj_characters

    # Characters route

    def statistics(self, surface: MarkedSurface) -> Dict[Tuple[int, ...], int]:
        key = self._shape(surface)
        if key not in self._statistics:
            self._statistics[key] = fixed_point_statistics(
                self.group, key, self.double.pair_orbit, self.settings
            )
        return self._statistics[key]

    @staticmethod
    def _shape(surface: MarkedSurface) -> MarkedSurface:
        # dimensions depend on (genus, points) only
        return MarkedSurface(genus=surface.genus, boundary_count=surface.boundary_count)

    def _natural(self, value: CycloNumber, surface: MarkedSurface, labels) -> int:
        scaled = value * Fraction(1, self.group.order**surface.boundary_count)
        if not scaled.is_integer() or scaled.to_integer() < 0:
            raise IntegralityError(
                "character route produced a non-natural dimension",
                {
                    "group": self.group.name,
                    "genus": surface.genus,
                    "points": surface.boundary_count,
                    "labels": list(labels),
                    "value": str(scaled),
                },
            )
        return scaled.to_integer()

    def characters_dim(self, surface: MarkedSurface, labels: Sequence[int]) -> int:
        """(1/N^n) sum over orbit vectors of count * prod_i conj chi_{lambda_i}."""
        conj = self.conj_characters
        total = self.double.zero
        for orbits, count in self.statistics(surface).items():
            term: Optional[CycloNumber] = None
            for label, orbit in zip(labels, orbits):
                factor = conj[label][orbit]
                if factor.is_zero():
                    term = None
                    break
                term = factor if term is None else term * factor
            if term is not None:
                total = total + term * count
        return self._natural(total, surface, labels)

    def table(self, surface: MarkedSurface) -> Dict[Tuple[int, ...], int]:
        """dim W for every simple label vector, by axis-wise contraction."""
        key = self._shape(surface)
        if key in self._tables:
            return self._tables[key]
        conj = self.conj_characters
        rank = len(conj)
        current: Dict[Tuple[int, ...], CycloNumber] = {
            orbits: CycloNumber.from_rational(self.double.conductor, count)
            for orbits, count in self.statistics(key).items()
        }
        for axis in range(key.boundary_count):
            contracted: Dict[Tuple[int, ...], CycloNumber] = {}
            for index, value in current.items():
                orbit = index[axis]
                for label in range(rank):
                    factor = conj[label][orbit]
                    if factor.is_zero():
                        continue
                    target = index[:axis] + (label,) + index[axis + 1 :]
                    product = value * factor
                    contracted[target] = (
                        contracted[target] + product if target in contracted else product
                    )
            current = contracted
        entries = {}
        for labels in itertools.product(range(rank), repeat=key.boundary_count):
            value = current.get(labels, self.double.zero)
            entries[labels] = self._natural(value, key, labels)
        self._tables[key] = entries
        return entries

    def self_pairing(self, surface: MarkedSurface) -> int:
        """<chi_E, chi_E> from the fixed-point counts alone."""
        sizes = self.double.orbit_sizes
        total = Fraction(0)
        for orbits, count in self.statistics(surface).items():
            weight = 1
            for orbit in orbits:
                weight *= sizes[orbit]
            total += Fraction(count * count, weight)
        total /= self.group.order**surface.boundary_count
        if total.denominator != 1:
            raise IntegralityError(
                "self-pairing of E(X) is not an integer",
                {"group": self.group.name, "genus": surface.genus, "value": str(total)},
            )
        return total.numerator

    # Enumeration route

    def enumeration_dim(self, surface: MarkedSurface) -> int:
        """Vacuum dimension: G^n-orbits of bundles with trivial monodromy."""
        bundles = trivial_monodromy_bundles(self.group, surface, self.settings)
        n = surface.boundary_count
        moves = []
        for index in range(n):
            for g in range(1, self.group.order):
                move = [0] * n
                move[index] = g
                moves.append(tuple(move))
        return count_orbits(self.group, surface, bundles, moves)

    # Verlinde route

    def verlinde(self, genus: int, labels: Sequence[int]) -> int:
        data = self.modular
        return verlinde_dim(data, genus, [data.labels[i] for i in labels])

    # Public operations

    def resolve(self, tokens: Sequence[str]) -> List[DoubleLabel]:
        return [self.double.resolve_label(token) for token in tokens]

    def dim_w(self, vector: LabelVector, method: str = "auto") -> DimReport:
        """
        Dimension of W(X; V) by the requested routes.

        Args:
            vector: Surface and label combinations
            method: auto, characters, enumeration, verlinde or all

        Returns:
            Per-route values and the agreed dimension

        Raises:
            RouteDisagreementError: If two routes differ
            CapExceededError: If a requested route is infeasible
        """
        if method not in METHODS:
            raise UsageError(f"unknown method: {method}", {"method": method})
        surface = vector.surface
        rank = len(self.double.labels)
        for combination in vector.labels:
            for index, _count in combination:
                if not 0 <= index < rank:
                    raise UsageError("label index out of range", {"index": index, "rank": rank})
        expansions = vector.expansions()
        routes: Dict[str, int] = {}
        skipped: Dict[str, str] = {}

        wanted = {
            "auto": ("characters", "verlinde"),
            "all": ("enumeration", "characters", "verlinde"),
        }.get(method, (method,))
        for route in wanted:
            if route == "enumeration":
                if not vector.is_vacuum():
                    if method == "enumeration":
                        raise UsageError(
                            "the enumeration route applies to vacuum labels only", {}
                        )
                    skipped[route] = "labels are not all vacuum"
                    continue
                routes[route] = self.enumeration_dim(surface)
            elif route == "characters":
                try:
                    routes[route] = sum(
                        c * self.characters_dim(surface, labels) for c, labels in expansions
                    )
                except CapExceededError as e:
                    if method != "auto":
                        raise
                    skipped[route] = e.message
            else:
                routes[route] = sum(
                    c * self.verlinde(surface.genus, labels) for c, labels in expansions
                )

        if len(set(routes.values())) > 1:
            raise RouteDisagreementError(
                "dimension routes disagree",
                {
                    "group": self.group.name,
                    "surface": surface.model_dump(),
                    "labels": [list(c) for c in vector.labels],
                    "routes": routes,
                },
            )
        return DimReport(
            surface=surface,
            labels=[list(c) for c in vector.labels],
            routes=routes,
            skipped=skipped,
            dimension=next(iter(routes.values())),
        )

    def closed_dim(self, genus: int, method: str = "auto") -> ClosedDimReport:
        """
        Dimension of W on the closed genus-g surface.

        Verlinde gives it directly; enumeration counts conjugation classes of
        bundles. The characters route needs a boundary point and is refused.

        Raises:
            UsageError: For a negative genus or the characters route
            RouteDisagreementError: If the two routes differ
        """
        if method not in METHODS:
            raise UsageError(f"unknown method: {method}", {"method": method})
        if genus < 0:
            raise UsageError("genus must be non-negative", {"genus": genus})
        if method == "characters":
            raise UsageError(
                "the characters route needs at least one boundary point", {"genus": genus}
            )
        routes: Dict[str, int] = {}
        skipped: Dict[str, str] = {}
        if method == "all":
            skipped["characters"] = "closed surface"
        if method in ("enumeration", "all"):
            routes["enumeration"] = closed_surface_count(self.group, genus)["bundle_classes"]
        if method in ("auto", "verlinde", "all"):
            routes["verlinde"] = self.verlinde(genus, [])
        if len(set(routes.values())) > 1:
            raise RouteDisagreementError(
                "closed-surface routes disagree",
                {"group": self.group.name, "genus": genus, "routes": routes},
            )
        return ClosedDimReport(
            genus=genus,
            routes=routes,
            skipped=skipped,
            dimension=next(iter(routes.values())),
        )

    def decomposition_table(self, surface: MarkedSurface) -> DecompositionTable:
        """
        Full table over simple label vectors with both completeness identities.

        Raises:
            CompletenessError: If sum prod(dim) W != N^(2g+2n-2) or
                sum W^2 != <chi_E, chi_E>
        """
        entries = self.table(surface)
        dims = [label.dim for label in self.double.labels]
        weighted = 0
        for labels, value in entries.items():
            if value:
                weight = value
                for index in labels:
                    weight *= dims[index]
                weighted += weight
        squares = sum(value * value for value in entries.values())
        pairing = self.self_pairing(surface)
        expected = surface.bundle_count(self.group.order)
        if weighted != expected or squares != pairing:
            raise CompletenessError(
                "decomposition of E(X) is incomplete",
                {
                    "group": self.group.name,
                    "genus": surface.genus,
                    "points": surface.boundary_count,
                    "weighted_total": weighted,
                    "bundle_count": expected,
                    "square_total": squares,
                    "self_pairing": pairing,
                },
            )
        return DecompositionTable(
            surface=surface,
            entries=entries,
            weighted_total=weighted,
            square_total=squares,
            self_pairing=pairing,
        )

    def verify_gluing(
        self,
        surface: MarkedSurface,
        cut: Cut,
        labels: Optional[Sequence[Tuple[int, ...]]] = None,
    ) -> GluingReport:
        """
        dim W(X; lambda) = sum over mu of dim W(X_cut; lambda, mu, mu*).

        Args:
            surface: The surface X
            cut: Cut description
            labels: Simple label vectors to check; all of them by default

        Raises:
            UsageError: If a label vector has the wrong length or an unknown index
            GluingMismatchError: With per-mu contributions on any mismatch
        """
        result = cut_surface(surface, cut)
        double = self.double
        rank = len(double.labels)
        for vector in labels or ():
            if len(vector) != surface.boundary_count or not all(0 <= i < rank for i in vector):
                raise UsageError(
                    "label vector does not fit the surface",
                    {"labels": list(vector), "points": surface.boundary_count, "rank": rank},
                )
        duals = [double.dual_label(label).index for label in double.labels]
        whole = self.table(surface)
        pieces = [self.table(piece) for piece in result.pieces]
        vectors = list(labels) if labels is not None else sorted(whole)
        name_of = dict(zip(surface.boundary_names, range(surface.boundary_count)))
        records = []
        for vector in vectors:
            by_name = {name: vector[i] for name, i in name_of.items()}
            contributions = {}
            for mu in range(len(double.labels)):
                first, second = mu, duals[mu]
                if len(result.pieces) == 1:
                    piece = result.pieces[0]
                    key = tuple(by_name[x] for x in piece.boundary_names[:-2]) + (first, second)
                    value = pieces[0][key]
                else:
                    left, right = result.pieces
                    left_key = tuple(by_name[x] for x in left.boundary_names[:-1]) + (first,)
                    right_key = tuple(by_name[x] for x in right.boundary_names[:-1]) + (second,)
                    value = pieces[0][left_key] * pieces[1][right_key]
                if value:
                    contributions[mu] = value
            record = GluingRecord(
                labels=tuple(vector),
                dimension=whole[tuple(vector)],
                contributions=contributions,
            )
            if record.dimension != sum(contributions.values()):
                raise GluingMismatchError(
                    "gluing identity fails",
                    {
                        "group": self.group.name,
                        "surface": surface.model_dump(),
                        "cut": cut.model_dump(),
                        **record.model_dump(),
                    },
                )
            records.append(record)
        logger.info("✓ gluing identity on %d label vectors", len(records))
        return GluingReport(
            surface=surface,
            cut=cut,
            pieces=list(result.pieces),
            records=records,
            passed=True,
        )

