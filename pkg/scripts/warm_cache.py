"""Script to warm the on-disk character-table cache for the standard presets."""

import sys
from typing import List, Optional

from data.preset_groups import STANDARD_PRESETS
from services.characters import character_table
from services.double import DrinfeldDouble
from services.errors import EngineError
from services.groups import parse_preset
from services.settings import Settings
from services.table_cache import CharacterTableCache


def main(presets: Optional[List[str]] = None) -> int:
    """Compute and store the tables of each preset and of all its centralizers."""
    settings = Settings.from_env()
    if not settings.cache_dir:
        print("FGMF_CACHE_DIR is not set, nothing to warm")
        return 1
    cache = CharacterTableCache(settings.cache_dir)
    names = presets or STANDARD_PRESETS
    print(f"Warming character tables in {settings.cache_dir}...\n")

    try:
        for name in names:
            group = parse_preset(name, cap=settings.group_cap)
            table = character_table(group, cache=cache, prime_bound=settings.prime_search_bound)
            double = DrinfeldDouble(
                group, cache=cache, prime_bound=settings.prime_search_bound
            )
            print(
                f"✓ {group.name}: {table.count} classes, "
                f"{len(double.centralizer_tables)} centralizer tables, "
                f"{len(double.labels)} labels"
            )
    except EngineError as e:
        print(f"Error warming cache: {e.message}")
        return e.exit_code

    print(f"\n✓ Cache warmed for {len(names)} groups")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:] or None))
