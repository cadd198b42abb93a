"""On-disk cache of character tables keyed by the Cayley-table digest."""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Tuple

from services.cyclotomic import CycloNumber
from services.errors import CharacterTableError
from services.groups import FiniteGroup

logger = logging.getLogger(__name__)

CACHE_VERSION = 1


class CharacterTableCache:
    """Versioned JSON files, one per (group digest, conductor)."""

    def __init__(self, directory: str):
        """
        Initialize the cache.

        Args:
            directory: Cache directory, created on first store
        """
        self.directory = Path(directory)

    def _path(self, group: FiniteGroup, conductor: int) -> Path:
        return self.directory / f"chartable-v{CACHE_VERSION}-{group.digest}-c{conductor}.json"

    def load(self, group: FiniteGroup, conductor: int) -> Optional[Any]:
        """
        Load a cached table.

        Returns:
            A CharacterTable, or None on a miss or an unreadable entry
        """
        path = self._path(group, conductor)
        if not path.exists():
            return None
        from services.characters import CharacterTable, verify_character_table

        try:
            payload = json.loads(path.read_text())
            degrees, values, prime = self._decode(payload, group, conductor)
            table = CharacterTable(group, degrees, values, conductor, prime)
            verify_character_table(table)
        except (OSError, ValueError, KeyError, IndexError, TypeError, CharacterTableError) as e:
            logger.warning("ignoring unusable cache entry %s: %s", path.name, e)
            return None
        logger.debug("✓ loaded character table of %s from cache", group.name)
        return table

    def store(self, table: Any) -> None:
        """Write a table; failures are logged, never raised."""
        path = self._path(table.group, table.conductor)
        payload = {
            "version": CACHE_VERSION,
            "digest": table.group.digest,
            "conductor": table.conductor,
            "prime": table.prime,
            "degrees": list(table.degrees),
            "values": [[v.to_json() for v in row] for row in table.values],
        }
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(payload))
        except OSError as e:
            logger.warning("could not write cache entry %s: %s", path.name, e)

    @staticmethod
    def _decode(
        payload: Any, group: FiniteGroup, conductor: int
    ) -> Tuple[List[int], List[List[CycloNumber]], int]:
        if payload["version"] != CACHE_VERSION or payload["digest"] != group.digest:
            raise ValueError("stale cache entry")
        if payload["conductor"] != conductor:
            raise ValueError("conductor mismatch")
        values = [[CycloNumber.from_json(v) for v in row] for row in payload["values"]]
        return list(payload["degrees"]), values, int(payload["prime"])
