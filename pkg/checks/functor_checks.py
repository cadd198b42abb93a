"""Functor checks - decompositions, spot values, route agreement, gluing and modular data."""

from typing import Any, Dict, Sequence

from services.bundles import Cut, MarkedSurface, closed_surface_count, surface
from services.characters import character_table
from services.errors import GluingMismatchError, InvariantViolation, RouteDisagreementError
from services.modular_data import verlinde_fusion_check
from services.modular_functor import LabelVector, ModularFunctorEngine

CLOSED_GENERA = (0, 1, 2)


class FunctorChecks:
    """Checks on the W spaces and the modular data."""

    def __init__(self, engine: ModularFunctorEngine):
        """
        Initialize functor checks.

        Args:
            engine: Engine for the gauge group
        """
        self.engine = engine
        self.double = engine.double

    def decompositions(self, battery: Sequence[MarkedSurface]) -> Dict[str, Any]:
        """Both completeness identities of the decomposition of E(X)."""
        totals = {}
        for item in battery:
            table = self.engine.decomposition_table(item)
            totals[f"({item.genus},{item.boundary_count})"] = table.self_pairing
        return totals

    def spot_values(self) -> Dict[str, Any]:
        """Disk selects the vacuum, the annulus pairs lambda with lambda*, torus vacuum = rank."""
        double, engine = self.double, self.engine
        disk = engine.table(surface(0, 1))
        for (label,), value in disk.items():
            if value != (1 if label == 0 else 0):
                raise InvariantViolation("disk table is not the vacuum", {"label": label})
        annulus = engine.table(surface(0, 2))
        duals = [double.dual_label(label).index for label in double.labels]
        for (first, second), value in annulus.items():
            if value != (1 if second == duals[first] else 0):
                raise InvariantViolation(
                    "annulus table is not the duality pairing", {"labels": [first, second]}
                )
        torus = engine.table(surface(1, 1))[(0,)]
        if torus != len(double.labels):
            raise InvariantViolation(
                "torus vacuum dimension differs from the label count",
                {"dimension": torus, "labels": len(double.labels)},
            )
        return {"torus_vacuum": torus}

    def route_agreement(self, battery: Sequence[MarkedSurface]) -> Dict[str, Any]:
        """Characters and Verlinde agree on every label vector; enumeration on the vacuum."""
        engine = self.engine
        compared = 0
        for item in battery:
            for labels, value in engine.table(item).items():
                verlinde = engine.verlinde(item.genus, labels)
                if verlinde != value:
                    raise RouteDisagreementError(
                        "character and Verlinde routes disagree",
                        {
                            "genus": item.genus,
                            "points": item.boundary_count,
                            "labels": list(labels),
                            "characters": value,
                            "verlinde": verlinde,
                        },
                    )
                compared += 1
            vacuum = LabelVector.simple(item, [self.double.vacuum] * item.boundary_count)
            engine.dim_w(vacuum, method="all")
        return {"compared": compared}

    def gluing(self, cases: Sequence) -> Dict[str, Any]:
        """dim W(X; lambda) = sum over mu of dim W(X_cut; lambda, mu, mu*) for every lambda."""
        results = {}
        for item, cut in cases:
            report = self.engine.verify_gluing(item, cut)
            if not report.passed:
                raise GluingMismatchError("gluing identity fails", {})
            results[f"({item.genus},{item.boundary_count})"] = len(report.records)
        return results

    def modular_data(self) -> Dict[str, Any]:
        """Axioms of S and T, Verlinde fusion = coproduct fusion, genus-1 count = rank."""
        data = self.engine.modular
        compared = verlinde_fusion_check(data)
        torus = self.engine.verlinde(1, [])
        if torus != data.rank:
            raise InvariantViolation(
                "genus-1 Verlinde dimension differs from the rank",
                {"verlinde": torus, "rank": data.rank},
            )
        return {
            "rank": data.rank,
            "fusion_triples": compared,
            "phase": str(data.central_charge_phase),
        }

    def closed_surfaces(self) -> Dict[str, Any]:
        """Homomorphism counts by the character formula; bundle classes = Verlinde dimension."""
        engine = self.engine
        table = character_table(
            engine.group, cache=engine.cache, prime_bound=engine.settings.prime_search_bound
        )
        results = {}
        for genus in CLOSED_GENERA:
            counts = closed_surface_count(self.engine.group, genus, table)
            verlinde = self.engine.verlinde(genus, [])
            if counts["bundle_classes"] != verlinde:
                raise InvariantViolation(
                    "closed-surface bundle classes differ from the Verlinde dimension",
                    {"genus": genus, **counts, "verlinde": verlinde},
                )
            results[f"genus{genus}"] = counts
        return results


def standard_gluing_cases() -> Sequence:
    """Torus with one point cut open, and the four-holed sphere split in two."""
    return [
        (surface(1, 1), Cut()),
        (surface(0, 4), Cut(separating=True, genus=0, names=("p1", "p2"))),
    ]
