"""Exact character tables by the Dixon-Schneider method.

Class-sum structure constants are diagonalized simultaneously over GF(p) for
the smallest prime p = 1 (mod e) with p > 2*sqrt(N). The resulting central
characters are normalized to mod-p character values and lifted to Q(zeta_e)
through eigenvalue multiplicities computed from the power maps.
"""

import logging
import threading
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import GF, Poly, Symbol, nextprime, primitive_root, sqrt_mod
from sympy.polys.matrices import DomainMatrix

from services.cyclotomic import CycloNumber, root_of_unity
from services.errors import CharacterTableError, SubgroupNotClosedError
from services.groups import ConjClassInfo, FiniteGroup
from services.settings import DEFAULT_PRIME_SEARCH_BOUND
from services.table_cache import CharacterTableCache

logger = logging.getLogger(__name__)

_X = Symbol("x")


class CharacterTable:
    """Irreducible characters of a group, rows = characters, columns = classes."""

    def __init__(
        self,
        group: FiniteGroup,
        degrees: Sequence[int],
        values: Sequence[Sequence[CycloNumber]],
        conductor: int,
        prime: int,
        parent_indices: Optional[Sequence[int]] = None,
    ):
        self.group = group
        self.conjugacy: ConjClassInfo = group.conjugacy
        self.degrees: Tuple[int, ...] = tuple(degrees)
        self.values: Tuple[Tuple[CycloNumber, ...], ...] = tuple(tuple(r) for r in values)
        self.conductor = conductor
        self.prime = prime
        # parent_indices[i] = index in the parent group of subgroup element i
        self.parent_indices: Optional[Tuple[int, ...]] = (
            tuple(parent_indices) if parent_indices is not None else None
        )
        self.subgroup_index: Dict[int, int] = (
            {p: i for i, p in enumerate(self.parent_indices)} if self.parent_indices else {}
        )

    @property
    def count(self) -> int:
        return len(self.degrees)

    def class_value(self, row: int, class_index: int) -> CycloNumber:
        return self.values[row][class_index]

    def value(self, row: int, element: int) -> CycloNumber:
        """Character value on an element given by its own index."""
        return self.values[row][self.conjugacy.class_of[element]]

    def parent_value(self, row: int, parent_element: int) -> CycloNumber:
        """Character value on a subgroup element given by its parent index."""
        return self.value(row, self.subgroup_index[parent_element])

    def with_embedding(self, parent_indices: Sequence[int]) -> "CharacterTable":
        return CharacterTable(
            self.group, self.degrees, self.values, self.conductor, self.prime, parent_indices
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "conductor": self.conductor,
            "degrees": list(self.degrees),
            "class_representatives": list(self.conjugacy.representative),
            "class_sizes": self.conjugacy.sizes,
            "values": [[v.to_json() for v in row] for row in self.values],
        }


# Mod-p linear algebra


def dixon_prime(order: int, exponent: int, bound: int = DEFAULT_PRIME_SEARCH_BOUND) -> int:
    """Smallest prime p with p = 1 (mod exponent) and p > 2*sqrt(order)."""
    p = 2
    while True:
        p = nextprime(p)
        if p > bound:
            raise CharacterTableError(
                "no suitable prime below the search bound",
                {"order": order, "exponent": exponent, "bound": bound},
            )
        if (p - 1) % exponent == 0 and p * p > 4 * order:
            return int(p)


def _linear_roots(coeffs: Sequence[int], p: int) -> List[int]:
    """Roots in GF(p) of a polynomial given highest coefficient first."""
    _, factors = Poly(list(coeffs), _X, modulus=p).factor_list()
    roots = set()
    for factor, _multiplicity in factors:
        if factor.degree() == 1:
            a, b = (int(c) % p for c in factor.all_coeffs())
            roots.add((-b * pow(a, -1, p)) % p)
    return sorted(roots)


def _to_ints(matrix: DomainMatrix, p: int) -> List[List[int]]:
    return [[int(v) % p for v in row] for row in matrix.to_list()]


def _rref(rows: List[List[int]], p: int) -> Tuple[List[List[int]], Tuple[int, ...]]:
    reduced, pivots = DomainMatrix.from_list(rows, GF(p)).rref()
    dense = _to_ints(reduced, p)
    return dense[: len(pivots)], tuple(pivots)


def _nullspace(rows: List[List[int]], p: int) -> List[List[int]]:
    basis = DomainMatrix.from_list(rows, GF(p)).nullspace()
    return _to_ints(basis, p)


def _split_space(
    basis: List[List[int]], pivots: Tuple[int, ...], matrix: List[List[int]], p: int
) -> List[Tuple[List[List[int]], Tuple[int, ...]]]:
    """
    Split an invariant subspace into eigenspaces of `matrix`.

    The basis rows b_i stand for column vectors; matrix * b_i^T expressed in
    the basis gives the restricted operator, whose left eigenvectors combine
    the basis rows into eigenvectors.
    """
    size = len(matrix)
    image = [
        [sum(b[s] * matrix[t][s] for s in range(size)) % p for t in range(size)] for b in basis
    ]
    restricted = [[row[j] for j in pivots] for row in image]
    d = len(basis)
    transposed = [[restricted[j][i] for j in range(d)] for i in range(d)]
    charpoly = DomainMatrix.from_list(transposed, GF(p)).charpoly()
    pieces = []
    for root in _linear_roots([int(c) % p for c in charpoly], p):
        shifted = [
            [(transposed[i][j] - (root if i == j else 0)) % p for j in range(d)] for i in range(d)
        ]
        combos = _nullspace(shifted, p)
        vectors = [
            [sum(u[i] * basis[i][t] for i in range(d)) % p for t in range(size)] for u in combos
        ]
        pieces.append(_rref(vectors, p))
    if sum(len(b) for b, _ in pieces) != d:
        raise CharacterTableError("class matrix does not split over GF(p)", {"prime": p})
    return pieces


def _class_matrices(group: FiniteGroup) -> List[List[List[int]]]:
    """M_r[s][t] = #{(x, y) in C_r x C_s : x y = rep(C_t)}."""
    info = group.conjugacy
    k = info.count
    constants = [[[0] * k for _ in range(k)] for _ in range(k)]
    class_of, mul, inv = info.class_of, group.mul, group.inv
    for t, z in enumerate(info.representative):
        for x in range(group.order):
            constants[class_of[x]][class_of[mul[inv[x]][z]]][t] += 1
    return constants


def _central_characters(group: FiniteGroup, p: int) -> List[List[int]]:
    """Common eigenvectors of all class matrices, normalized at the identity class."""
    k = group.conjugacy.count
    matrices = _class_matrices(group)
    spaces = [([[1 if i == j else 0 for j in range(k)] for i in range(k)], tuple(range(k)))]

    def refine(matrix: List[List[int]]) -> None:
        nonlocal spaces
        refined = []
        for basis, pivots in spaces:
            if len(basis) == 1:
                refined.append((basis, pivots))
            else:
                refined.extend(_split_space(basis, pivots, matrix, p))
        spaces = refined

    for r in range(1, k):
        if len(spaces) == k:
            break
        refine([[v % p for v in row] for row in matrices[r]])

    if len(spaces) < k:
        # products of two class sums, still in canonical order
        for r in range(1, k):
            for s in range(r, k):
                if len(spaces) == k:
                    break
                product = [
                    [
                        sum(matrices[r][i][j] * matrices[s][j][c] for j in range(k)) % p
                        for c in range(k)
                    ]
                    for i in range(k)
                ]
                refine(product)

    if len(spaces) != k:
        raise CharacterTableError(
            "common eigenspaces did not split into lines",
            {"group": group.name, "prime": p, "spaces": len(spaces), "classes": k},
        )

    characters = []
    for basis, _pivots in spaces:
        vector = basis[0]
        if vector[0] == 0:
            raise CharacterTableError("central character vanishes on the identity", {"prime": p})
        scale = pow(vector[0], -1, p)
        characters.append([(v * scale) % p for v in vector])
    return characters


def _lift_row(
    group: FiniteGroup, modular: List[int], degree: int, p: int, z: int, conductor: int
) -> List[CycloNumber]:
    """Lift mod-p character values to Q(zeta_conductor) via eigenvalue multiplicities."""
    info = group.conjugacy
    orders = group.element_orders
    exponent = group.exponent
    values = []
    for t, rep in enumerate(info.representative):
        o = orders[rep]
        zt = pow(z, exponent // o, p)
        o_inv = pow(o, -1, p)
        powers = [modular[info.power_map[t][j]] for j in range(o)]
        total = CycloNumber.zero(conductor)
        multiplicity_sum = 0
        for j in range(o):
            twist = pow(zt, (-j) % o, p)
            m = o_inv * sum(powers[k] * pow(twist, k, p) for k in range(o)) % p
            if m > degree:
                raise CharacterTableError(
                    "eigenvalue multiplicity exceeds the degree",
                    {"group": group.name, "class": t, "multiplicity": m, "degree": degree},
                )
            if m:
                total = total + root_of_unity(conductor, j * (conductor // o)) * m
                multiplicity_sum += m
        if multiplicity_sum != degree:
            raise CharacterTableError(
                "eigenvalue multiplicities do not sum to the degree",
                {"group": group.name, "class": t},
            )
        values.append(total)
    return values


def _dixon(
    group: FiniteGroup, conductor: int, bound: int
) -> Tuple[List[int], List[List[CycloNumber]], int]:
    info = group.conjugacy
    n = group.order
    p = dixon_prime(n, group.exponent, bound)
    sizes = info.sizes
    centrals = _central_characters(group, p)
    z = pow(int(primitive_root(p)), (p - 1) // group.exponent, p)

    degrees, rows = [], []
    for w in centrals:
        u = [(w[t] * pow(sizes[t], -1, p)) % p for t in range(info.count)]
        pairing = sum(sizes[t] * u[t] * u[info.inverse_class[t]] for t in range(info.count)) % p
        square = (n * pow(pairing, -1, p)) % p
        root = sqrt_mod(square, p)
        if root is None:
            raise CharacterTableError("degree square has no root mod p", {"prime": p})
        degree = min(int(root), p - int(root))
        if degree < 1 or degree * degree > n or n % degree:
            raise CharacterTableError(
                "recovered degree is impossible", {"group": group.name, "degree": degree}
            )
        modular = [(degree * v) % p for v in u]
        degrees.append(degree)
        rows.append(_lift_row(group, modular, degree, p, z, conductor))

    order = sorted(
        range(len(rows)),
        key=lambda i: (degrees[i], tuple(v.sort_key() for v in rows[i])),
    )
    trivial = next(i for i in order if all(v == 1 for v in rows[i]))
    order.remove(trivial)
    order.insert(0, trivial)
    return [degrees[i] for i in order], [rows[i] for i in order], p


def verify_character_table(table: CharacterTable) -> None:
    """
    Check both orthogonality relations exactly.

    Raises:
        CharacterTableError: With the failing pair in the payload
    """
    info = table.conjugacy
    n = table.group.order
    k = table.count
    sizes = info.sizes
    if sum(d * d for d in table.degrees) != n:
        raise CharacterTableError("sum of squared degrees differs from the order")
    conj = [[v.conj() for v in row] for row in table.values]
    for i in range(k):
        if table.values[i][0] != table.degrees[i]:
            raise CharacterTableError("identity column differs from degrees", {"row": i})
        for j in range(i, k):
            total = sum(
                (table.values[i][c] * conj[j][c] * sizes[c] for c in range(k)),
                CycloNumber.zero(table.conductor),
            )
            if total != (n if i == j else 0):
                raise CharacterTableError(
                    "row orthogonality fails", {"group": table.group.name, "rows": [i, j]}
                )
    for c in range(k):
        for d in range(c, k):
            total = sum(
                (table.values[i][c] * conj[i][d] for i in range(k)),
                CycloNumber.zero(table.conductor),
            )
            expected = info.centralizer_order(c) if c == d else 0
            if total != expected:
                raise CharacterTableError(
                    "column orthogonality fails", {"group": table.group.name, "classes": [c, d]}
                )


# Cached construction

_memory: Dict[Tuple[str, int], CharacterTable] = {}
_memory_lock = threading.Lock()
_key_locks: Dict[Tuple[str, int], threading.Lock] = {}


def character_table(
    group: FiniteGroup,
    conductor: Optional[int] = None,
    cache: Optional[CharacterTableCache] = None,
    prime_bound: int = DEFAULT_PRIME_SEARCH_BOUND,
) -> CharacterTable:
    """
    Exact irreducible character table of a group.

    Args:
        group: The group
        conductor: Field of values Q(zeta_conductor); defaults to the group exponent
        cache: Optional on-disk cache
        prime_bound: Largest prime tried for the Dixon reduction

    Returns:
        The verified table, rows ordered by (degree, values) with the trivial
        character first
    """
    conductor = conductor or group.exponent
    if conductor % group.exponent:
        raise CharacterTableError(
            "conductor must be a multiple of the group exponent",
            {"conductor": conductor, "exponent": group.exponent},
        )
    key = (group.digest, conductor)
    with _memory_lock:
        if key in _memory:
            return _memory[key]
        lock = _key_locks.setdefault(key, threading.Lock())

    with lock:
        with _memory_lock:
            if key in _memory:
                return _memory[key]
        table = cache.load(group, conductor) if cache else None
        if table is None:
            degrees, values, prime = _dixon(group, conductor, prime_bound)
            table = CharacterTable(group, degrees, values, conductor, prime)
            verify_character_table(table)
            logger.info("✓ character table of %s (%d classes)", group.name, table.count)
            if cache:
                cache.store(table)
        with _memory_lock:
            _memory[key] = table
    return table


def subgroup(group: FiniteGroup, elements: Sequence[int]) -> Tuple[FiniteGroup, Tuple[int, ...]]:
    """
    Re-index a subgroup as a standalone group.

    Returns:
        The subgroup and the translation map (subgroup index -> parent index)
    """
    if not group.is_subgroup(elements):
        raise SubgroupNotClosedError(
            "element list is not closed under multiplication and inverses",
            {"group": group.name, "elements": sorted(set(elements))},
        )
    members = tuple(sorted(set(elements)))
    position = {x: i for i, x in enumerate(members)}
    mul = [[position[group.mul[x][y]] for y in members] for x in members]
    return FiniteGroup(mul, name=f"{group.name}<{len(members)}>", validate=False), members


def restrict_table_to_subgroup(
    group: FiniteGroup,
    elements: Sequence[int],
    cache: Optional[CharacterTableCache] = None,
    prime_bound: int = DEFAULT_PRIME_SEARCH_BOUND,
) -> CharacterTable:
    """
    Character table of a subgroup, with values in the parent's field.

    Args:
        group: The parent group
        elements: Parent indices of the subgroup elements
        cache: Optional on-disk cache
        prime_bound: Largest prime tried for the Dixon reduction

    Returns:
        The subgroup table carrying the index translation map
    """
    sub, members = subgroup(group, elements)
    table = character_table(sub, group.exponent, cache=cache, prime_bound=prime_bound)
    return table.with_embedding(members)
