"""Environment-driven settings for the engine."""

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from services.errors import UsageError

DEFAULT_GROUP_CAP = 2000
DEFAULT_STATE_CAP = 10**8
DEFAULT_MATERIALIZE_CAP = 10**6
DEFAULT_GRID_CAP = 10**7
DEFAULT_PRIME_SEARCH_BOUND = 10**6


class Settings(BaseModel):
    """Caps and locations shared by all services."""

    group_cap: int = Field(DEFAULT_GROUP_CAP, gt=0)
    state_cap: int = Field(DEFAULT_STATE_CAP, gt=0)  # counting-only enumeration
    materialize_cap: int = Field(DEFAULT_MATERIALIZE_CAP, gt=0)  # stored tuple sets
    grid_cap: int = Field(DEFAULT_GRID_CAP, gt=0)  # character-route grid terms
    prime_search_bound: int = Field(DEFAULT_PRIME_SEARCH_BOUND, gt=0)
    cache_dir: Optional[str] = None
    threads: int = Field(1, gt=0)

    @classmethod
    def from_env(cls, load: bool = True) -> "Settings":
        """
        Build settings from environment variables.

        Args:
            load: Whether to read a .env file first

        Returns:
            Validated settings

        Raises:
            UsageError: If a variable is not an integer or breaks a bound
        """
        if load:
            load_dotenv(override=True)
        values = {"cache_dir": os.getenv("FGMF_CACHE_DIR") or None}
        for field, default in ENV_INTEGERS.items():
            raw = os.getenv(f"FGMF_{field.upper()}", default)
            try:
                values[field] = int(raw)
            except ValueError:
                raise UsageError(
                    f"FGMF_{field.upper()} must be an integer", {"value": raw}
                ) from None
        try:
            return cls(**values)
        except ValidationError as e:
            raise UsageError(
                "invalid configuration", {"errors": e.errors(include_url=False)}
            ) from None


ENV_INTEGERS = {
    "group_cap": DEFAULT_GROUP_CAP,
    "state_cap": DEFAULT_STATE_CAP,
    "materialize_cap": DEFAULT_MATERIALIZE_CAP,
    "grid_cap": DEFAULT_GRID_CAP,
    "prime_search_bound": DEFAULT_PRIME_SEARCH_BOUND,
    "threads": 1,
}

DEFAULT_SETTINGS = Settings()
