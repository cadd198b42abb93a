"""Algebra checks - character tables and the structure of D(G)."""

from typing import Any, Dict, List

from services.characters import character_table, verify_character_table
from services.double import DoubleElement, DrinfeldDouble, double_antipode
from services.errors import CharacterTableError, DualityError, IntegralityError
from services.groups import FiniteGroup

HOPF_SAMPLE = 6


class AlgebraChecks:
    """Character-table orthogonality, label bookkeeping, orthonormality, fusion and duality."""

    def __init__(self, group: FiniteGroup, double: DrinfeldDouble):
        """
        Initialize algebra checks.

        Args:
            group: The gauge group
            double: Its Drinfeld double
        """
        self.group = group
        self.double = double

    def character_tables(self) -> Dict[str, Any]:
        """Both orthogonality relations for G and every centralizer; sum of degrees^2 = order."""
        tables = [character_table(self.group)] + list(self.double.centralizer_tables)
        for table in tables:
            verify_character_table(table)
            if sum(d * d for d in table.degrees) != table.group.order:
                raise CharacterTableError(
                    "degrees do not square-sum to the group order",
                    {"group": table.group.name, "degrees": list(table.degrees)},
                )
        return {"tables": len(tables)}

    def labels(self) -> Dict[str, Any]:
        """Label count = sum of k(centralizer) = commuting-pair orbits; sum dim^2 = N^2."""
        double, n = self.double, self.group.order
        count = len(double.labels)
        expected = sum(table.count for table in double.centralizer_tables)
        squares = sum(label.dim**2 for label in double.labels)
        vacuum = double.vacuum
        if count != expected or count != len(double.orbit_reps) or squares != n * n:
            raise IntegralityError(
                "label bookkeeping fails",
                {
                    "labels": count,
                    "centralizer_classes": expected,
                    "pair_orbits": len(double.orbit_reps),
                    "sum_dim_squared": squares,
                },
            )
        if vacuum.class_index != 0 or vacuum.cent_irrep_index != 0 or vacuum.dim != 1:
            raise IntegralityError("vacuum label is not first", {"vacuum": vacuum.name})
        return {"labels": count, "sum_dim_squared": squares}

    def orthonormality(self) -> Dict[str, Any]:
        """The Gram matrix of irreducible characters is exactly the identity."""
        characters = [self.double.label_character(label) for label in self.double.labels]
        for i, left in enumerate(characters):
            for j, right in enumerate(characters):
                value = left.inner(right)
                if value != (1 if i == j else 0):
                    raise IntegralityError(
                        "irreducible characters are not orthonormal",
                        {"row": i, "column": j, "value": str(value)},
                    )
        return {"pairs": len(characters) ** 2}

    def fusion_ring(self) -> Dict[str, Any]:
        """Commutative, associative, vacuum-unital, dimension-preserving fusion."""
        labels = self.double.labels
        table: List[List[Dict[int, int]]] = [
            [
                {nu.index: m for nu, m in self.double.fusion_coefficients(a, b).items()}
                for b in labels
            ]
            for a in labels
        ]
        for a in labels:
            if table[0][a.index] != {a.index: 1}:
                raise IntegralityError("vacuum is not a fusion unit", {"label": a.name})
            for b in labels:
                if table[a.index][b.index] != table[b.index][a.index]:
                    raise IntegralityError(
                        "fusion is not commutative", {"labels": [a.name, b.name]}
                    )
        size = len(labels)
        for a in range(size):
            for b in range(size):
                for c in range(size):
                    left: Dict[int, int] = {}
                    for nu, m in table[a][b].items():
                        for tau, k in table[nu][c].items():
                            left[tau] = left.get(tau, 0) + m * k
                    right: Dict[int, int] = {}
                    for nu, m in table[b][c].items():
                        for tau, k in table[a][nu].items():
                            right[tau] = right.get(tau, 0) + m * k
                    if left != right:
                        raise IntegralityError(
                            "fusion is not associative", {"labels": [a, b, c]}
                        )
        records = sum(len(entry) for row in table for entry in row)
        return {"nonzero_coefficients": records}

    def duality(self) -> Dict[str, Any]:
        """lambda** = lambda, dims preserved, vacuum self-dual, vacuum in lambda (x) lambda*."""
        double = self.double
        self_dual = 0
        for label in double.labels:
            dual = double.dual_label(label)
            if double.dual_label(dual) != label or dual.dim != label.dim:
                raise DualityError("duality is not an involution", {"label": label.name})
            if double.fusion_coefficients(label, dual).get(double.vacuum) != 1:
                raise DualityError(
                    "vacuum does not occur once in lambda (x) lambda*", {"label": label.name}
                )
            self_dual += dual == label
        if double.dual_label(double.vacuum) != double.vacuum:
            raise DualityError("vacuum is not self-dual", {})
        return {"self_dual": self_dual}

    def regular_module(self) -> Dict[str, Any]:
        """The regular module contains every label with multiplicity equal to its dimension."""
        decomposition = self.double.regular_character().decompose()
        for label in self.double.labels:
            if decomposition.get(label) != label.dim:
                raise IntegralityError(
                    "regular module has the wrong multiplicity",
                    {"label": label.name, "multiplicity": decomposition.get(label, 0)},
                )
        return {"dimension": self.group.order**2}

    def hopf_structure(self) -> Dict[str, Any]:
        """Unit, antipode anti-multiplicativity and S^2 = id on a block of basis elements."""
        group = self.group
        sample = range(min(group.order, HOPF_SAMPLE))
        basis = [DoubleElement.basis(group, g, h) for g in sample for h in sample]
        unit = DoubleElement.unit(group)
        for x in basis:
            if unit * x != x or x * unit != x:
                raise IntegralityError("unit of D(G) fails", {"element": repr(x)})
            if double_antipode(double_antipode(x)) != x:
                raise IntegralityError("antipode is not involutive", {"element": repr(x)})
            for y in basis:
                if double_antipode(x * y) != double_antipode(y) * double_antipode(x):
                    raise IntegralityError(
                        "antipode is not anti-multiplicative",
                        {"left": repr(x), "right": repr(y)},
                    )
        return {"basis_elements": len(basis)}
