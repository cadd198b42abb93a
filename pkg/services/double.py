"""The Drinfeld double D(G): product, irreducible labels, characters and fusion.

Representations are handled only through exact characters. A character of a
D(G)-module is a function on basis elements g*delta_h, vanishing unless g and h
commute, and constant on orbits of commuting pairs under simultaneous
conjugation; characters are stored as one value per orbit.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from services.characters import CharacterTable, restrict_table_to_subgroup
from services.cyclotomic import CycloNumber
from services.errors import (
    DualityError,
    IntegralityError,
    UnknownLabelError,
    UsageError,
)
from services.groups import FiniteGroup
from services.settings import DEFAULT_PRIME_SEARCH_BOUND
from services.table_cache import CharacterTableCache

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class DoubleLabel(BaseModel):
    """Isomorphism class of an irreducible D(G)-module."""

    model_config = {"frozen": True}

    index: int
    class_index: int  # conjugacy class carrying the monodromy sector
    cent_irrep_index: int  # row of the centralizer character table
    representative: int
    dim: int

    @property
    def name(self) -> str:
        return f"([{self.representative}],r{self.cent_irrep_index})"

    @property
    def display(self) -> str:
        return f"([{self.representative}], irrep#{self.cent_irrep_index}, dim {self.dim})"

    def is_vacuum(self) -> bool:
        return self.index == 0


class DoubleElement:
    """Formal combination of basis elements g*delta_h of D(G)."""

    def __init__(self, group: FiniteGroup, terms: Optional[Dict[Pair, CycloNumber]] = None):
        self.group = group
        self.terms: Dict[Pair, CycloNumber] = {
            pair: c for pair, c in (terms or {}).items() if not c.is_zero()
        }

    @classmethod
    def basis(cls, group: FiniteGroup, g: int, h: int, coeff: Union[int, Fraction] = 1):
        return cls(group, {(g, h): CycloNumber.from_rational(group.exponent, coeff)})

    @classmethod
    def unit(cls, group: FiniteGroup) -> DoubleElement:
        """Sum of delta_h over all h."""
        one = CycloNumber.one(group.exponent)
        return cls(group, {(0, h): one for h in range(group.order)})

    def _check(self, other: DoubleElement) -> None:
        if other.group != self.group:
            raise UsageError("D(G) elements of different groups", {})

    def __add__(self, other: DoubleElement) -> DoubleElement:
        self._check(other)
        terms = dict(self.terms)
        for pair, c in other.terms.items():
            terms[pair] = terms[pair] + c if pair in terms else c
        return DoubleElement(self.group, terms)

    def scale(self, factor: Union[int, Fraction, CycloNumber]) -> DoubleElement:
        return DoubleElement(self.group, {pair: c * factor for pair, c in self.terms.items()})

    def __mul__(self, other: DoubleElement) -> DoubleElement:
        return double_product(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DoubleElement)
            and other.group == self.group
            and other.terms == self.terms
        )

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{g}d{h}" for (g, h), c in sorted(self.terms.items()))
        return f"DoubleElement({body or '0'})"


def double_product(x: DoubleElement, y: DoubleElement) -> DoubleElement:
    """
    Product in D(G).

    (g, h) * (g', h') = (g g', h') when h = g' h' g'^-1, else 0; extended
    bilinearly.
    """
    x._check(y)
    group = x.group
    terms: Dict[Pair, CycloNumber] = {}
    for (g, h), a in x.terms.items():
        for (g2, h2), b in y.terms.items():
            if group.conj(g2, h2) != h:
                continue
            key = (group.mul[g][g2], h2)
            value = a * b
            terms[key] = terms[key] + value if key in terms else value
    return DoubleElement(group, terms)


def double_coproduct(x: DoubleElement) -> Dict[Tuple[Pair, Pair], CycloNumber]:
    """Delta(g delta_h) = sum over h1 h2 = h of g delta_h1 (x) g delta_h2."""
    group = x.group
    result: Dict[Tuple[Pair, Pair], CycloNumber] = {}
    for (g, h), c in x.terms.items():
        for h1 in range(group.order):
            h2 = group.mul[group.inv[h1]][h]
            result[((g, h1), (g, h2))] = c
    return result


def double_antipode(x: DoubleElement) -> DoubleElement:
    """S(g delta_h) = g^-1 delta_{g h^-1 g^-1}."""
    group = x.group
    return DoubleElement(
        group,
        {(group.inv[g], group.conj(g, group.inv[h])): c for (g, h), c in x.terms.items()},
    )


class ModuleCharacter:
    """Exact character of a finite-dimensional D(G)-module, one value per orbit."""

    def __init__(self, double: DrinfeldDouble, values: Sequence[CycloNumber]):
        self.double = double
        self.values: Tuple[CycloNumber, ...] = tuple(values)

    def __call__(self, g: int, h: int) -> CycloNumber:
        orbit = self.double.pair_orbit.get((g, h))
        if orbit is None:
            return self.double.zero
        return self.values[orbit]

    def __add__(self, other: ModuleCharacter) -> ModuleCharacter:
        return ModuleCharacter(self.double, [a + b for a, b in zip(self.values, other.values)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModuleCharacter) and self.values == other.values

    def scale(self, factor: int) -> ModuleCharacter:
        return ModuleCharacter(self.double, [v * factor for v in self.values])

    def tensor(self, other: ModuleCharacter) -> ModuleCharacter:
        """Character of V (x) W through the coproduct."""
        group = self.double.group
        values = []
        for g, h in self.double.orbit_reps:
            total = self.double.zero
            for h1 in self.double.centralizer_elements[g]:
                h2 = group.mul[group.inv[h1]][h]
                left = self(g, h1)
                if left.is_zero():
                    continue
                total = total + left * other(g, h2)
            values.append(total)
        return ModuleCharacter(self.double, values)

    def dual(self) -> ModuleCharacter:
        """Character of V*: x acts through the antipode."""
        group = self.double.group
        return ModuleCharacter(
            self.double,
            [self(group.inv[g], group.inv[h]) for g, h in self.double.orbit_reps],
        )

    def inner(self, other: ModuleCharacter) -> CycloNumber:
        """(1/N) sum over commuting pairs of chi * conj(psi)."""
        total = self.double.zero
        for size, a, b in zip(self.double.orbit_sizes, self.values, other.values):
            if not a.is_zero() and not b.is_zero():
                total = total + a * b.conj() * size
        return total * Fraction(1, self.double.group.order)

    def multiplicity(self, label: DoubleLabel) -> int:
        """Multiplicity of an irreducible in this module."""
        value = self.inner(self.double.label_character(label))
        if not value.is_integer() or value.to_integer() < 0:
            raise IntegralityError(
                "multiplicity is not a non-negative integer",
                {"label": label.name, "value": str(value)},
            )
        return value.to_integer()

    def decompose(self) -> Dict[DoubleLabel, int]:
        result = {}
        for label in self.double.labels:
            m = self.multiplicity(label)
            if m:
                result[label] = m
        return result

    def dimension(self) -> int:
        """Trace of the unit: sum over h of chi(e delta_h)."""
        total = sum((self(0, h) for h in range(self.double.group.order)), self.double.zero)
        return total.to_integer()


class DrinfeldDouble:
    """Irreducible labels and exact characters of D(G)."""

    def __init__(
        self,
        group: FiniteGroup,
        cache: Optional[CharacterTableCache] = None,
        prime_bound: int = DEFAULT_PRIME_SEARCH_BOUND,
    ):
        """
        Build labels, transporters and centralizer tables.

        Args:
            group: The finite group G
            cache: Optional on-disk character-table cache
            prime_bound: Largest prime tried for the centralizer tables
        """
        self.group = group
        self.info = group.conjugacy
        self.conductor = group.exponent
        self.zero = CycloNumber.zero(self.conductor)
        n = group.order

        self.centralizer_tables: List[CharacterTable] = [
            restrict_table_to_subgroup(group, members, cache=cache, prime_bound=prime_bound)
            for members in self.info.centralizer
        ]

        # transporter[h] = minimal s with s rep(h) s^-1 = h
        self.transporter = [-1] * n
        for c, rep in enumerate(self.info.representative):
            for s in range(n):
                h = group.conj(s, rep)
                if self.transporter[h] < 0:
                    self.transporter[h] = s

        self.labels: List[DoubleLabel] = []
        for c, table in enumerate(self.centralizer_tables):
            size = len(self.info.classes[c])
            for row, degree in enumerate(table.degrees):
                self.labels.append(
                    DoubleLabel(
                        index=len(self.labels),
                        class_index=c,
                        cent_irrep_index=row,
                        representative=self.info.representative[c],
                        dim=size * degree,
                    )
                )

        self.centralizer_elements: List[Tuple[int, ...]] = [
            tuple(g for g in range(n) if group.commutes(g, x)) for x in range(n)
        ]
        self.pair_orbit: Dict[Pair, int] = {}
        self.orbit_reps: List[Pair] = []
        self.orbit_sizes: List[int] = []
        for h in range(n):
            for g in self.centralizer_elements[h]:
                if (g, h) in self.pair_orbit:
                    continue
                orbit = {(group.conj(k, g), group.conj(k, h)) for k in range(n)}
                for pair in orbit:
                    self.pair_orbit[pair] = len(self.orbit_reps)
                self.orbit_reps.append((g, h))
                self.orbit_sizes.append(len(orbit))

        self._characters: Dict[int, ModuleCharacter] = {}
        self._duals: Dict[int, DoubleLabel] = {}
        logger.info("✓ D(%s) with %d irreducible labels", group.name, len(self.labels))

    @property
    def vacuum(self) -> DoubleLabel:
        return self.labels[0]

    def character(self, label: DoubleLabel, g: int, h: int) -> CycloNumber:
        """
        chi_lambda(g delta_h) from the induced-character formula.

        Zero unless g and h commute and h lies in the label's class; otherwise
        chi_pi(s^-1 g s) with s the transporter of h.
        """
        group = self.group
        if self.info.class_of[h] != label.class_index or not group.commutes(g, h):
            return self.zero
        s = self.transporter[h]
        x = group.mul[group.mul[group.inv[s]][g]][s]
        table = self.centralizer_tables[label.class_index]
        return table.parent_value(label.cent_irrep_index, x)

    def label_character(self, label: DoubleLabel) -> ModuleCharacter:
        if label.index not in self._characters:
            self._characters[label.index] = ModuleCharacter(
                self, [self.character(label, g, h) for g, h in self.orbit_reps]
            )
        return self._characters[label.index]

    def combination_character(self, combination: Dict[DoubleLabel, int]) -> ModuleCharacter:
        """Character of a formal non-negative integer combination of labels."""
        values = [self.zero] * len(self.orbit_reps)
        result = ModuleCharacter(self, values)
        for label, count in combination.items():
            if count < 0:
                raise UsageError("label multiplicities must be non-negative", {})
            result = result + self.label_character(label).scale(count)
        return result

    def regular_character(self) -> ModuleCharacter:
        n = self.group.order
        return ModuleCharacter(
            self,
            [CycloNumber.from_rational(self.conductor, n if g == 0 else 0)
             for g, _h in self.orbit_reps],
        )

    def dual_label(self, label: DoubleLabel) -> DoubleLabel:
        """
        The unique label whose character is chi_lambda composed with the antipode.

        Raises:
            DualityError: If no label or several labels match
        """
        if label.index in self._duals:
            return self._duals[label.index]
        target = self.label_character(label).dual()
        matches = [mu for mu in self.labels if self.label_character(mu) == target]
        if len(matches) != 1:
            raise DualityError(
                "dual label is not unique",
                {"label": label.name, "candidates": [m.name for m in matches]},
            )
        self._duals[label.index] = matches[0]
        return matches[0]

    def fusion_coefficients(self, left: DoubleLabel, right: DoubleLabel) -> Dict[DoubleLabel, int]:
        """Non-zero multiplicities N_{left,right}^nu of the tensor product."""
        product = self.label_character(left).tensor(self.label_character(right))
        result = product.decompose()
        total = sum(m * nu.dim for nu, m in result.items())
        if total != left.dim * right.dim:
            raise IntegralityError(
                "fusion does not preserve dimensions",
                {"left": left.name, "right": right.name, "total": total},
            )
        return result

    def fusion_table(self, workers: int = 1) -> List[Tuple[int, int, int, int]]:
        """All records (lambda, mu, nu, N) with N > 0, in canonical order."""
        pairs = [(a, b) for a in self.labels for b in self.labels]

        def run(pair: Tuple[DoubleLabel, DoubleLabel]) -> List[Tuple[int, int, int, int]]:
            coefficients = self.fusion_coefficients(*pair)
            return [
                (pair[0].index, pair[1].index, nu.index, m)
                for nu, m in sorted(coefficients.items(), key=lambda item: item[0].index)
            ]

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(run, pairs))
        else:
            chunks = [run(pair) for pair in pairs]
        return [record for chunk in chunks for record in chunk]

    def resolve_label(self, token: Union[str, int]) -> DoubleLabel:
        """
        Find a label by canonical index or name.

        Accepts an integer index, "vacuum", or a name like "([3],r1)".
        """
        text = str(token).strip()
        if text == "vacuum":
            return self.vacuum
        if re.fullmatch(r"\d+", text):
            index = int(text)
            if index < len(self.labels):
                return self.labels[index]
        compact = text.replace(" ", "")
        for label in self.labels:
            if compact == label.name:
                return label
        raise UnknownLabelError(
            f"unknown label: {text}", {"label": text, "count": len(self.labels)}
        )


def irr_labels(
    group: FiniteGroup,
    cache: Optional[CharacterTableCache] = None,
    prime_bound: int = DEFAULT_PRIME_SEARCH_BOUND,
) -> List[DoubleLabel]:
    """Canonical list of irreducible D(G) labels, vacuum first."""
    return DrinfeldDouble(group, cache=cache, prime_bound=prime_bound).labels


def invariants_dimension(
    double: DrinfeldDouble,
    module_character: Union[ModuleCharacter, Callable[[int, int], CycloNumber]],
) -> int:
    """
    Dimension of the D(G)-invariants of a module.

    The invariants are the G-invariants of the identity-graded part, so the
    dimension is (1/N) * sum over g of chi(g delta_e).
    """
    n = double.group.order
    return invariants_dimension_from_traces(n, [module_character(g, 0) for g in range(n)])


def invariants_dimension_from_traces(
    order: int, traces: Sequence[Union[int, CycloNumber]]
) -> int:
    """Average of the traces of g delta_e over the group, checked to be a natural number."""
    total = sum(traces, Fraction(0)) if all(isinstance(t, int) for t in traces) else None
    if total is None:
        exact = sum(traces[1:], traces[0])
        if not exact.is_integer():
            raise IntegralityError(
                "invariants dimension is not an integer", {"value": str(exact)}
            )
        total = Fraction(exact.to_integer())
    average = total / order
    if average.denominator != 1 or average < 0:
        raise IntegralityError(
            "invariants dimension is not a non-negative integer", {"value": str(average)}
        )
    return average.numerator
