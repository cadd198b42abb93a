"""Self-test harness collecting the checks of every suite for one group."""

import logging
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from checks.algebra_checks import AlgebraChecks
from checks.functor_checks import FunctorChecks, standard_gluing_cases
from checks.surface_checks import SurfaceChecks
from services.bundles import Cut, MarkedSurface, surface
from services.errors import EngineError
from services.groups import FiniteGroup
from services.modular_functor import ModularFunctorEngine
from services.settings import DEFAULT_SETTINGS, Settings
from services.table_cache import CharacterTableCache

logger = logging.getLogger(__name__)

BASE_BATTERY = ((0, 1), (0, 2), (0, 3), (1, 1))
EXTENDED_BATTERY = ((0, 4), (1, 2))
# largest number of label vectors on a battery surface
TABLE_BUDGET = 20_000
# largest group order for the separating-cut bundle bijection
SEPARATING_BIJECTION_ORDER = 6


class CheckResult(BaseModel):
    name: str
    passed: bool
    seconds: float
    details: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None


class SelftestReport(BaseModel):
    group: str
    order: int
    labels: int
    checks: List[CheckResult]
    passed: bool

    def first_failure(self) -> Optional[CheckResult]:
        return next((check for check in self.checks if not check.passed), None)


class SelftestHarness:
    """
    Runs the invariant suites of every module for one group:
    1. Algebra checks - character tables and D(G)
    2. Surface checks - bundles, groupoid actions, gluing bijection
    3. Functor checks - decompositions, routes, gluing, modular data
    """

    def __init__(
        self,
        group: FiniteGroup,
        settings: Settings = DEFAULT_SETTINGS,
        cache: Optional[CharacterTableCache] = None,
    ):
        """
        Initialize the harness.

        Args:
            group: The gauge group
            settings: Caps and worker count
            cache: Optional character-table cache
        """
        self.group = group
        self.engine = ModularFunctorEngine(group, settings, cache)
        double = self.engine.double

        self.algebra = AlgebraChecks(group, double)
        self.surfaces = SurfaceChecks(double, settings)
        self.functor = FunctorChecks(self.engine)

        rank = len(double.labels)
        self.battery: List[MarkedSurface] = [surface(g, n) for g, n in BASE_BATTERY] + [
            surface(g, n) for g, n in EXTENDED_BATTERY if rank**n <= TABLE_BUDGET
        ]
        self.bijection_cases: List[Tuple[MarkedSurface, Cut]] = [
            (surface(1, 1), Cut()),
            (surface(0, 2), Cut(separating=True, genus=0, names=("p1",))),
        ]
        if group.order <= SEPARATING_BIJECTION_ORDER:
            self.bijection_cases.append(standard_gluing_cases()[1])
        self.gluing_cases = [
            case for case in standard_gluing_cases() if case[0] in self.battery
        ]

    def checks(self) -> List[Tuple[str, Callable[[], Dict[str, Any]]]]:
        """Ordered (name, check) pairs."""
        return [
            ("character_tables", self.algebra.character_tables),
            ("double_labels", self.algebra.labels),
            ("orthonormality", self.algebra.orthonormality),
            ("hopf_structure", self.algebra.hopf_structure),
            ("regular_module", self.algebra.regular_module),
            ("fusion_ring", self.algebra.fusion_ring),
            ("duality", self.algebra.duality),
            ("bundle_counts", lambda: self.surfaces.bundle_counts(self.battery)),
            ("groupoid_relations", self.surfaces.groupoid_relations),
            ("grade_dimensions", self.surfaces.grade_dimensions),
            ("fixed_point_counts", lambda: self.surfaces.fixed_point_counts(surface(0, 2))),
            ("gluing_bijection", lambda: self.surfaces.gluing_bijections(self.bijection_cases)),
            ("decompositions", lambda: self.functor.decompositions(self.battery)),
            ("spot_values", self.functor.spot_values),
            ("modular_data", self.functor.modular_data),
            ("route_agreement", lambda: self.functor.route_agreement(self.battery)),
            ("gluing_identity", lambda: self.functor.gluing(self.gluing_cases)),
            ("closed_surfaces", self.functor.closed_surfaces),
        ]

    def run(self) -> SelftestReport:
        """Run every check, timing each; failures are recorded, not raised."""
        results = []
        for name, check in self.checks():
            start = time.perf_counter()
            try:
                details = check()
                passed, error = True, None
                logger.info("✓ %s", name)
            except EngineError as e:
                details, passed, error = {}, False, e.to_diagnostic()
                logger.error("✗ %s: %s", name, e.message)
            results.append(
                CheckResult(
                    name=name,
                    passed=passed,
                    seconds=round(time.perf_counter() - start, 3),
                    details=details,
                    error=error,
                )
            )
        return SelftestReport(
            group=self.group.name,
            order=self.group.order,
            labels=len(self.engine.double.labels),
            checks=results,
            passed=all(r.passed for r in results),
        )
