"""Surface checks - bundle counts, groupoid relations and the gluing bijection."""

import itertools
from collections import Counter
from typing import Any, Dict, List, Sequence

from services.bundles import (
    Cut,
    MarkedSurface,
    count_bundles,
    e_module_character,
    enumerate_bundles,
    fixed_point_statistics,
    gluing_bijection_check,
    monodromy,
    rho_action,
    satisfies_relation,
    surface,
)
from services.double import DrinfeldDouble
from services.errors import CapExceededError, GluingMismatchError, InvariantViolation
from services.settings import Settings


class SurfaceChecks:
    """Checks on the bundle sets P(X) and the module E(X)."""

    def __init__(self, double: DrinfeldDouble, settings: Settings):
        """
        Initialize surface checks.

        Args:
            double: Drinfeld double of the gauge group
            settings: Caps and worker count
        """
        self.double = double
        self.group = double.group
        self.settings = settings

    def bundle_counts(self, battery: Sequence[MarkedSurface]) -> Dict[str, Any]:
        """|P(X)| = N^(2g+2n-2) and every materialized tuple satisfies the surface relation."""
        counts = {}
        for item in battery:
            total, _histogram = count_bundles(self.group, item, self.settings)
            expected = item.bundle_count(self.group.order)
            if total != expected:
                raise InvariantViolation(
                    "bundle count law fails",
                    {"genus": item.genus, "points": item.boundary_count, "count": total},
                )
            counts[f"({item.genus},{item.boundary_count})"] = total
        return counts

    def groupoid_relations(self) -> Dict[str, Any]:
        """
        Sweep rho over the annulus and the torus with one point.

        m_i(rho_i(g) P) = g m_i(P) g^-1, other monodromies fixed, the relation
        preserved, rho_i(g) rho_i(h) = rho_i(gh), rho_i(e) = id, and actions at
        different points commute.
        """
        group = self.group
        items = (surface(0, 2), surface(1, 1))
        # every bundle, point and pair (g, h), with one extra sweep over points
        self._check_sweep(
            "groupoid sweep",
            sum(
                item.bundle_count(group.order) * item.boundary_count**2 * group.order**2
                for item in items
            ),
        )
        cases = 0
        for item in items:
            bundles = enumerate_bundles(group, item, self.settings)
            points = range(1, item.boundary_count + 1)
            for bundle in bundles:
                for i in points:
                    if rho_action(group, bundle, i, 0) != bundle:
                        self._fail("identity does not act trivially", item, bundle, i)
                    for g in range(group.order):
                        moved = rho_action(group, bundle, i, g)
                        if not satisfies_relation(group, moved):
                            self._fail("rho breaks the surface relation", item, bundle, i, g)
                        for j in points:
                            expected = (
                                group.conj(g, monodromy(bundle, j))
                                if j == i
                                else monodromy(bundle, j)
                            )
                            if monodromy(moved, j) != expected:
                                self._fail("monodromy transforms wrongly", item, bundle, i, g)
                        for h in range(group.order):
                            composed = rho_action(group, moved, i, h)
                            if composed != rho_action(group, bundle, i, group.mul[h][g]):
                                self._fail("rho is not an action", item, bundle, i, g, h)
                            for j in points:
                                if j != i and rho_action(
                                    group, rho_action(group, bundle, j, h), i, g
                                ) != rho_action(group, moved, j, h):
                                    self._fail("rho actions do not commute", item, bundle, i, g, h)
                        cases += 1
        return {"cases": cases}

    def _check_sweep(self, what: str, visits: int) -> None:
        if visits > self.settings.state_cap:
            raise CapExceededError(
                f"{what} needs {visits} bundle visits, above the cap of {self.settings.state_cap}",
                {"group": self.group.name, "visits": visits, "cap": self.settings.state_cap},
            )

    def _fail(self, message: str, item: MarkedSurface, bundle, *args: int) -> None:
        raise InvariantViolation(
            message,
            {
                "group": self.group.name,
                "genus": item.genus,
                "points": item.boundary_count,
                "bundle": [list(part) for part in bundle],
                "arguments": list(args),
            },
        )

    def grade_dimensions(self) -> Dict[str, Any]:
        """Traces of identity elements recover the grade histogram of the annulus."""
        item = surface(0, 2)
        self._check_sweep("grade sweep", self.group.order**2 * item.bundle_count(self.group.order))
        _total, histogram = count_bundles(self.group, item, self.settings)
        for grades in itertools.product(range(self.group.order), repeat=2):
            pairs = [(0, h) for h in grades]
            value = e_module_character(self.group, item, pairs, self.settings)
            if value != histogram.get(grades, 0):
                raise InvariantViolation(
                    "grade dimension differs from the histogram", {"grades": list(grades)}
                )
        return {"grades": self.group.order**2}

    def fixed_point_counts(self, item: MarkedSurface) -> Dict[str, Any]:
        """Aggregated fixed-point statistics equal brute-force traces on E(X), orbit by orbit."""
        double = self.double
        self._check_sweep(
            "direct trace sweep",
            len(double.pair_orbit) ** item.boundary_count * item.bundle_count(self.group.order),
        )
        statistics = fixed_point_statistics(self.group, item, double.pair_orbit, self.settings)
        pairs_by_orbit: List[List] = [[] for _ in double.orbit_reps]
        for pair, orbit in double.pair_orbit.items():
            pairs_by_orbit[orbit].append(pair)
        brute: Counter = Counter()
        for pairs in itertools.product(sorted(double.pair_orbit), repeat=item.boundary_count):
            value = e_module_character(self.group, item, pairs, self.settings)
            if value:
                brute[tuple(double.pair_orbit[p] for p in pairs)] += value
        if dict(brute) != statistics:
            raise InvariantViolation(
                "fixed-point statistics disagree with direct traces",
                {"genus": item.genus, "points": item.boundary_count},
            )
        return {"orbit_vectors": len(statistics)}

    def gluing_bijections(self, cases: Sequence) -> Dict[str, Any]:
        """Restriction bijection and invariants dimension for each (surface, cut)."""
        results = {}
        for item, cut in cases:
            report = gluing_bijection_check(self.group, item, cut, self.settings)
            if not report.passed:
                raise GluingMismatchError("gluing bijection fails", report.model_dump())
            results[_case_name(item, cut)] = report.orbit_count
        return results


def _case_name(item: MarkedSurface, cut: Cut) -> str:
    kind = f"sep{cut.genus}{list(cut.names)}" if cut.separating else "nonsep"
    return f"({item.genus},{item.boundary_count}) {kind}"
