"""Finite groups as multiplication tables, with conjugacy and power-map data."""

import hashlib
import json
import logging
import math
import re
from collections import deque
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from data.preset_groups import PRESET_FAMILIES, QUATERNION_UNITS
from services.errors import (
    CapExceededError,
    GroupValidationError,
    UnknownPresetError,
)
from services.settings import DEFAULT_GROUP_CAP

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]

EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 200
SAMPLED_ASSOCIATIVITY_ROWS = 64


class ConjClassInfo(BaseModel):
    """Conjugacy classes, centralizers and power maps of a finite group."""

    model_config = {"frozen": True}

    classes: Tuple[Tuple[int, ...], ...]
    class_of: Tuple[int, ...]
    representative: Tuple[int, ...]
    centralizer: Tuple[Tuple[int, ...], ...]
    power_map: Tuple[Tuple[int, ...], ...]  # power_map[c][k] = class of rep(c)**k
    inverse_class: Tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    def centralizer_order(self, class_index: int) -> int:
        return len(self.centralizer[class_index])


class FiniteGroup:
    """
    A finite group given by its multiplication table.

    Elements are the indices 0..N-1 and the identity is pinned to index 0.
    Instances are immutable; derived data is computed lazily and cached.
    """

    def __init__(self, mul: Sequence[Sequence[int]], name: str = "", validate: bool = True):
        """
        Initialize a group from a table.

        Args:
            mul: N x N table, mul[x][y] is the index of x*y
            name: Human-readable name
            validate: Whether to verify the group axioms first
        """
        rows = tuple(tuple(int(v) for v in row) for row in mul)
        if validate:
            validate_table(rows)
        self.mul: Tuple[Tuple[int, ...], ...] = rows
        self.order = len(rows)
        self.identity = 0
        self.name = name or f"group{self.order}"
        self.inv: Tuple[int, ...] = tuple(row.index(0) for row in rows)

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, order={self.order})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.mul == other.mul

    def __hash__(self) -> int:
        return hash(self.digest)

    @cached_property
    def digest(self) -> str:
        """SHA-256 of the row-major table, the cache key for derived data."""
        flat = ",".join(str(v) for row in self.mul for v in row)
        return hashlib.sha256(f"{self.order}:{flat}".encode()).hexdigest()

    @cached_property
    def table(self) -> np.ndarray:
        array = np.array(self.mul, dtype=np.int64).reshape(self.order, self.order)
        array.setflags(write=False)
        return array

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        orders = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = self.mul[y][x]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.element_orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def centralizer_masks(self) -> Tuple[int, ...]:
        """Bitmask per element x with bit g set when g commutes with x."""
        masks = []
        for x in range(self.order):
            mask = 0
            row, col = self.mul[x], [self.mul[g][x] for g in range(self.order)]
            for g in range(self.order):
                if row[g] == col[g]:
                    mask |= 1 << g
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def conjugacy(self) -> ConjClassInfo:
        return conjugacy_data(self)

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a b a^-1 b^-1."""
        mul, inv = self.mul, self.inv
        return mul[mul[mul[a][b]][inv[a]]][inv[b]]

    def commutes(self, x: int, y: int) -> bool:
        return self.mul[x][y] == self.mul[y][x]

    def power(self, x: int, k: int) -> int:
        k %= self.element_orders[x]
        y = 0
        for _ in range(k):
            y = self.mul[y][x]
        return y

    def is_subgroup(self, elements: Sequence[int]) -> bool:
        members = set(elements)
        if 0 not in members:
            return False
        return all(self.inv[x] in members for x in members) and all(
            self.mul[x][y] in members for x in members for y in members
        )


def validate_table(rows: Sequence[Sequence[int]], seed: int = 0) -> None:
    """
    Verify the group axioms on a multiplication table.

    Associativity is checked on all triples up to 200 elements and on a
    deterministic sample of rows above.

    Raises:
        GroupValidationError: If any axiom fails
    """
    n = len(rows)
    if n == 0:
        raise GroupValidationError("empty multiplication table")
    if any(len(row) != n for row in rows):
        raise GroupValidationError("table is not square", {"order": n})
    table = np.array(rows, dtype=np.int64)
    if table.min() < 0 or table.max() >= n:
        raise GroupValidationError("table entries out of range", {"order": n})
    expected = np.arange(n)
    if not np.array_equal(table[0], expected) or not np.array_equal(table[:, 0], expected):
        raise GroupValidationError("index 0 is not the identity", {"order": n})
    if not (np.sort(table, axis=1) == expected).all():
        raise GroupValidationError("a row is not a permutation", {"order": n})
    if not (np.sort(table, axis=0) == expected[:, None]).all():
        raise GroupValidationError("a column is not a permutation", {"order": n})

    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        sample = expected
    else:
        rng = np.random.default_rng(seed)
        sample = rng.choice(n, size=SAMPLED_ASSOCIATIVITY_ROWS, replace=False)
    for a in sample:
        # (a b) c versus a (b c) for all b, c
        left = table[table[a]]
        right = table[a][table]
        if not np.array_equal(left, right):
            b, c = (int(v) for v in np.argwhere(left != right)[0])
            raise GroupValidationError(
                "multiplication is not associative", {"triple": [int(a), b, c]}
            )


def conjugacy_data(group: FiniteGroup) -> ConjClassInfo:
    """
    Compute conjugacy classes in canonical order.

    Classes are sorted by (order of representative, minimal element index),
    so class 0 is the identity class.

    Args:
        group: The group

    Returns:
        Full class, centralizer and power-map data
    """
    n = group.order
    assigned = [-1] * n
    raw: List[Tuple[int, ...]] = []
    for x in range(n):
        if assigned[x] >= 0:
            continue
        orbit = sorted({group.conj(g, x) for g in range(n)})
        for y in orbit:
            assigned[y] = len(raw)
        raw.append(tuple(orbit))

    orders = group.element_orders
    classes = sorted(raw, key=lambda c: (orders[c[0]], c[0]))
    class_of = [0] * n
    for index, members in enumerate(classes):
        for y in members:
            class_of[y] = index

    representative = tuple(c[0] for c in classes)
    centralizer = tuple(
        tuple(g for g in range(n) if group.commutes(g, r)) for r in representative
    )
    exponent = group.exponent
    power_map = []
    for r in representative:
        row, y = [], 0
        for _ in range(exponent):
            row.append(class_of[y])
            y = group.mul[y][r]
        power_map.append(tuple(row))
    inverse_class = tuple(class_of[group.inv[r]] for r in representative)

    return ConjClassInfo(
        classes=tuple(classes),
        class_of=tuple(class_of),
        representative=representative,
        centralizer=centralizer,
        power_map=tuple(power_map),
        inverse_class=inverse_class,
    )


# Construction


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> Permutation:
    """Permutation images of a product of disjoint cycles on `degree` points."""
    images = list(range(degree))
    for cycle in cycles:
        for i, point in enumerate(cycle):
            images[point] = cycle[(i + 1) % len(cycle)]
    return tuple(images)


def _compose(x: Permutation, y: Permutation) -> Permutation:
    # apply y first, then x
    return tuple(x[p] for p in y)


def build_group_from_generators(
    generators: Sequence[Sequence[int]],
    name: str = "",
    cap: int = DEFAULT_GROUP_CAP,
) -> FiniteGroup:
    """
    Close a list of permutations under composition.

    Elements are indexed breadth-first from the identity, trying generators in
    the order given, so the indexing is deterministic.

    Args:
        generators: Permutations as image lists on a common point set
        name: Name of the resulting group
        cap: Largest admissible closure size

    Returns:
        The generated group; an empty generator list yields the trivial group
    """
    perms = [tuple(int(p) for p in g) for g in generators]
    degree = len(perms[0]) if perms else 0
    for g in perms:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupValidationError("generator is not a permutation", {"generator": list(g)})

    identity = tuple(range(degree))
    elements: List[Permutation] = [identity]
    index: Dict[Permutation, int] = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in perms:
            y = _compose(x, g)
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceededError(
                        "group closure exceeds the order cap", {"cap": cap, "name": name}
                    )
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    mul = [[index[_compose(x, y)] for y in elements] for x in elements]
    group = FiniteGroup(mul, name=name or f"perm{len(elements)}", validate=False)
    logger.debug("✓ built %s of order %d", group.name, group.order)
    return group


def direct_product(first: FiniteGroup, second: FiniteGroup) -> FiniteGroup:
    """Direct product with index (g, h) -> g * |H| + h."""
    m = second.order
    mul = [
        [
            first.mul[x // m][y // m] * m + second.mul[x % m][y % m]
            for y in range(first.order * m)
        ]
        for x in range(first.order * m)
    ]
    return FiniteGroup(mul, name=f"{first.name}x{second.name}", validate=False)


def _quaternion_product(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _quaternion_generators() -> List[Permutation]:
    units = [tuple(u) for u in QUATERNION_UNITS]
    position = {u: i for i, u in enumerate(units)}
    i_unit, j_unit = (0, 1, 0, 0), (0, 0, 1, 0)
    return [
        tuple(position[_quaternion_product(g, u)] for u in units) for g in (i_unit, j_unit)
    ]


def preset_group(
    name: str,
    parameter: Optional[int] = None,
    factors: Optional[Sequence[FiniteGroup]] = None,
    cap: int = DEFAULT_GROUP_CAP,
) -> FiniteGroup:
    """
    Build a named preset group.

    Args:
        name: cyclic, dihedral, symmetric, quaternion8, trivial or direct_product
        parameter: Family parameter (n for Z_n, the n-gon, S_n)
        factors: Factors for direct_product
        cap: Group-order cap

    Returns:
        The group, with identical tables across runs
    """
    if name == "direct_product":
        if not factors:
            raise UnknownPresetError("direct_product needs at least one factor")
        group = factors[0]
        for factor in factors[1:]:
            group = direct_product(group, factor)
        if group.order > cap:
            raise CapExceededError("group order exceeds the cap", {"order": group.order})
        return group

    family = PRESET_FAMILIES.get(name)
    if family is None:
        raise UnknownPresetError(f"unknown preset family: {name}", {"name": name})
    if family["min"] is not None:
        if parameter is None or not family["min"] <= parameter <= family["max"]:
            raise UnknownPresetError(
                f"parameter out of range for {name}",
                {"name": name, "parameter": parameter, "range": [family["min"], family["max"]]},
            )

    if name == "trivial":
        return build_group_from_generators([], name="1", cap=cap)
    if name == "cyclic":
        n = int(parameter)
        return build_group_from_generators(
            [perm_from_cycles([range(n)], n)], name=f"Z{n}", cap=cap
        )
    if name == "dihedral":
        n = int(parameter)
        rotation = perm_from_cycles([range(n)], n)
        reflection = tuple((-i) % n for i in range(n))
        return build_group_from_generators([rotation, reflection], name=f"D{n}", cap=cap)
    if name == "symmetric":
        n = int(parameter)
        if n == 1:
            return build_group_from_generators([], name="S1", cap=cap)
        generators = [perm_from_cycles([[0, 1]], n)]
        if n > 2:
            generators.append(perm_from_cycles([range(n)], n))
        return build_group_from_generators(generators, name=f"S{n}", cap=cap)
    # quaternion8
    return build_group_from_generators(_quaternion_generators(), name="Q8", cap=cap)


_SHORT_NAME = re.compile(r"^(Z|D|S)(\d+)$")


def parse_preset(spec: str, cap: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    """
    Build a group from a short preset name.

    Accepts "1", "Zn", "Dn", "Sn", "Q8" and products joined by "x",
    e.g. "Z2xS3".
    """
    parts = [p for p in spec.strip().split("x") if p]
    if not parts:
        raise UnknownPresetError(f"empty preset name: {spec!r}")
    groups = []
    for part in parts:
        if part in ("1", "trivial"):
            groups.append(preset_group("trivial", cap=cap))
        elif part == "Q8":
            groups.append(preset_group("quaternion8", cap=cap))
        else:
            match = _SHORT_NAME.match(part)
            if not match:
                raise UnknownPresetError(f"unknown preset: {part}", {"name": spec})
            family = {"Z": "cyclic", "D": "dihedral", "S": "symmetric"}[match.group(1)]
            groups.append(preset_group(family, int(match.group(2)), cap=cap))
    if len(groups) == 1:
        return groups[0]
    return preset_group("direct_product", factors=groups, cap=cap)


# Group files


class GroupFile(BaseModel):
    """JSON group file: row-major Cayley table with identity at index 0."""

    order: int
    mul: List[int]
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "GroupFile":
        if self.order <= 0 or len(self.mul) != self.order * self.order:
            raise ValueError("mul must hold order*order entries")
        return self


def load_group_file(path: str, cap: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    """
    Load and verify a group file.

    Args:
        path: Path to a JSON group file
        cap: Group-order cap

    Returns:
        The verified group
    """
    try:
        spec = GroupFile.model_validate_json(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise GroupValidationError(f"cannot read group file: {e}", {"path": path})
    if spec.order > cap:
        raise CapExceededError("group order exceeds the cap", {"order": spec.order, "cap": cap})
    rows = [spec.mul[i * spec.order:(i + 1) * spec.order] for i in range(spec.order)]
    return FiniteGroup(rows, name=spec.name or Path(path).stem, validate=True)


def dump_group_file(group: FiniteGroup, path: str) -> None:
    """Write a group in the JSON group-file format."""
    payload = {
        "order": group.order,
        "mul": [v for row in group.mul for v in row],
        "name": group.name,
    }
    Path(path).write_text(json.dumps(payload))
