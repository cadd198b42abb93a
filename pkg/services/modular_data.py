"""Exact S and T matrices of Rep D(G) and the Verlinde formula."""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from services.cyclotomic import CycloNumber
from services.double import DoubleLabel, DrinfeldDouble
from services.errors import IntegralityError, ModularDataError

logger = logging.getLogger(__name__)

Matrix = List[List[CycloNumber]]


class ModularData:
    """S and T for the canonical label order of D(G)."""

    def __init__(self, double: DrinfeldDouble, S: Matrix, T: Sequence[CycloNumber]):
        self.double = double
        self.labels: List[DoubleLabel] = list(double.labels)
        self.S = S
        self.T: List[CycloNumber] = list(T)
        self.central_charge_phase: Optional[CycloNumber] = None

    @property
    def rank(self) -> int:
        return len(self.labels)

    def verlinde_fusion(self, i: int, j: int, k: int) -> CycloNumber:
        """sum_s S_is S_js conj(S_ks) / S_0s."""
        S = self.S
        total = self.double.zero
        for s in range(self.rank):
            total = total + S[i][s] * S[j][s] * S[k][s].conj() / S[0][s]
        return total

    def to_json(self) -> Dict[str, Any]:
        return {
            "group": self.double.group.name,
            "labels": [label.name for label in self.labels],
            "S": [[v.to_json() for v in row] for row in self.S],
            "T": [v.to_json() for v in self.T],
        }


def _matmul(left: Matrix, right: Matrix, zero: CycloNumber) -> Matrix:
    size = len(left)
    result = []
    for i in range(size):
        row = []
        for j in range(size):
            total = zero
            for k in range(size):
                if not left[i][k].is_zero() and not right[k][j].is_zero():
                    total = total + left[i][k] * right[k][j]
            row.append(total)
        result.append(row)
    return result


def _s_matrix(double: DrinfeldDouble) -> Matrix:
    """
    S_{([a],chi),([b],psi)} = 1/(|Z_a| |Z_b|) sum over g with a commuting with
    g b g^-1 of conj chi(g b g^-1) * conj psi(g^-1 a g).
    """
    group = double.group
    info = double.info
    labels = double.labels
    by_class: Dict[int, List[DoubleLabel]] = {}
    for label in labels:
        by_class.setdefault(label.class_index, []).append(label)
    size = len(labels)
    S = [[double.zero] * size for _ in range(size)]
    for ca, left_labels in by_class.items():
        a = info.representative[ca]
        za = info.centralizer_order(ca)
        table_a = double.centralizer_tables[ca]
        for cb, right_labels in by_class.items():
            b = info.representative[cb]
            scale = Fraction(1, za * info.centralizer_order(cb))
            terms = []
            for g in range(group.order):
                x = group.conj(g, b)
                if group.commutes(a, x):
                    terms.append((x, group.conj(group.inv[g], a)))
            table_b = double.centralizer_tables[cb]
            for left in left_labels:
                for right in right_labels:
                    total = double.zero
                    for x, y in terms:
                        total = total + (
                            table_a.parent_value(left.cent_irrep_index, x)
                            * table_b.parent_value(right.cent_irrep_index, y)
                        ).conj()
                    S[left.index][right.index] = total * scale
    return S


def _t_matrix(double: DrinfeldDouble) -> List[CycloNumber]:
    T = []
    for label in double.labels:
        table = double.centralizer_tables[label.class_index]
        a = double.info.representative[label.class_index]
        degree = table.degrees[label.cent_irrep_index]
        T.append(table.parent_value(label.cent_irrep_index, a) * Fraction(1, degree))
    return T


def check_modular_data(data: ModularData) -> None:
    """
    Verify symmetry, unitarity, S^2 = C, (ST)^3 = c S^2 with c a root of unity, T_0 = 1.

    Raises:
        ModularDataError: With the failing entry
    """
    double, S, T = data.double, data.S, data.T
    size = data.rank
    zero, one = double.zero, CycloNumber.one(double.conductor)
    group = double.group.name

    def fail(message: str, **payload: Any) -> None:
        raise ModularDataError(message, {"group": group, **payload})

    if T[0] != one:
        fail("T of the vacuum is not 1", value=str(T[0]))
    for i in range(size):
        for j in range(size):
            if S[i][j] != S[j][i]:
                fail("S is not symmetric", row=i, column=j)
    adjoint = [[S[j][i].conj() for j in range(size)] for i in range(size)]
    unitary = _matmul(S, adjoint, zero)
    squared = _matmul(S, S, zero)
    for i in range(size):
        dual = double.dual_label(double.labels[i]).index
        for j in range(size):
            if unitary[i][j] != (one if i == j else zero):
                fail("S is not unitary", row=i, column=j, value=str(unitary[i][j]))
            if squared[i][j] != (one if j == dual else zero):
                fail("S^2 is not charge conjugation", row=i, column=j, value=str(squared[i][j]))
    for k, label in enumerate(data.labels):
        if S[0][k] != Fraction(label.dim, double.group.order):
            fail("first row of S is not dim / N", column=k, value=str(S[0][k]))

    st = [[S[i][j] * T[j] for j in range(size)] for i in range(size)]
    cubed = _matmul(_matmul(st, st, zero), st, zero)
    phase = cubed[0][0] / squared[0][0]
    for i in range(size):
        for j in range(size):
            if cubed[i][j] != phase * squared[i][j]:
                fail("(ST)^3 is not proportional to S^2", row=i, column=j)
    if phase ** (2 * double.conductor) != one:
        fail("(ST)^3 phase is not a root of unity", value=str(phase))
    data.central_charge_phase = phase


def modular_data(double: DrinfeldDouble, check: bool = True) -> ModularData:
    """
    Exact modular data of D(G).

    Args:
        double: The Drinfeld double with its labels
        check: Whether to verify every axiom before returning

    Returns:
        S and T in canonical label order
    """
    data = ModularData(double, _s_matrix(double), _t_matrix(double))
    if check:
        check_modular_data(data)
        logger.info("✓ modular data of D(%s), rank %d", double.group.name, data.rank)
    return data


def verlinde_dim(data: ModularData, genus: int, labels: Sequence[DoubleLabel]) -> int:
    """
    sum over mu of S_0mu^(2-2g-n) * prod_i S_{lambda_i mu}, checked to be a natural number.

    Raises:
        IntegralityError: If the sum is not a non-negative integer
    """
    exponent = 2 - 2 * genus - len(labels)
    total = data.double.zero
    for mu in range(data.rank):
        term = data.S[0][mu] ** exponent
        for label in labels:
            term = term * data.S[label.index][mu]
        total = total + term
    if not total.is_integer() or total.to_integer() < 0:
        raise IntegralityError(
            "Verlinde sum is not a non-negative integer",
            {
                "group": data.double.group.name,
                "genus": genus,
                "labels": [label.name for label in labels],
                "value": str(total),
            },
        )
    return total.to_integer()


def verlinde_fusion_check(data: ModularData) -> int:
    """
    Compare Verlinde fusion with coproduct fusion for every label pair.

    Returns:
        The number of (lambda, mu, nu) triples compared
    """
    double = data.double
    compared = 0
    for left in data.labels:
        for right in data.labels:
            direct = double.fusion_coefficients(left, right)
            for nu in data.labels:
                value = data.verlinde_fusion(left.index, right.index, nu.index)
                if value != direct.get(nu, 0):
                    raise ModularDataError(
                        "Verlinde fusion disagrees with coproduct fusion",
                        {
                            "group": double.group.name,
                            "labels": [left.name, right.name, nu.name],
                            "verlinde": str(value),
                            "coproduct": direct.get(nu, 0),
                        },
                    )
                compared += 1
    return compared
