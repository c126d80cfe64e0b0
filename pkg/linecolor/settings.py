"""
Manages loading and storing run settings (seeds and search budgets).
"""

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from linecolor.constructive import DEFAULT_ROUND_CAP
from linecolor.lib import SETTINGS_PATH, logger
from linecolor.solver import DEFAULT_NODE_BUDGET


@dataclass
class Settings:
    seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    round_cap: int = DEFAULT_ROUND_CAP
    radius: int = 10
    p_max: int = 30
    entry_max: int = 4
    jobs: int = 1
    journal: bool = True

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> "Settings":
        """Reads a YAML mapping of settings.

        Without an explicit path, a missing default settings file just means
        the built-in defaults.
        """
        if path is None:
            if not SETTINGS_PATH.is_file():
                return cls()
            path = SETTINGS_PATH
        with open(path) as f:
            data = yaml.safe_load(f)
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise TypeError(f"{path}: settings must be a mapping")
        logger.debug("loaded settings from %s", path)
        return cls(**data)

    def check(self) -> Optional[str]:
        """Checks if these settings are valid.

        Returns None if they are, or an error message if not.
        """
        for name in ("node_budget", "round_cap", "radius", "p_max", "entry_max", "jobs"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int) or val < 1:
                return f"{name} must be a positive integer, got {val!r}"
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            return f"seed must be a non-negative integer, got {self.seed!r}"
        return None

    def asdict(self) -> Dict[str, Any]:
        """Returns a dict representing these settings, excluding default values."""
        d: Dict[str, Any] = {}
        for fld in dataclasses.fields(self):
            val = getattr(self, fld.name)
            if val == fld.default:
                continue
            d[fld.name] = val
        return d

    def save(self, path: Union[str, Path] = SETTINGS_PATH) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.dump(
                self.asdict(),
                f,
                default_flow_style=False,
                allow_unicode=True,
                sort_keys=False,
            )

    def copy(self) -> "Settings":
        return dataclasses.replace(self)

    def pretty(self) -> str:
        """Pretty-formats this Settings object."""
        width = max(len(fld.name) for fld in dataclasses.fields(self)) + 1
        return "\n".join(
            "{:<{width}s} {}".format(fld.name + ":", getattr(self, fld.name), width=width)
            for fld in dataclasses.fields(self)
        )
