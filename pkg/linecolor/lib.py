"""
Common functions and variables used in multiple modules.
"""

import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar, Union

import numpy as np
from tqdm import tqdm

logger = logging.getLogger("linecolor")

# Paths
CONFIG_DIR = Path.home() / ".config/linecolor"
SETTINGS_PATH = Path(os.environ.get("LINECOLOR_SETTINGS", CONFIG_DIR / "settings.yaml"))

# version of every JSON artifact we read or write
FORMAT_VERSION = 1


def parse_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Parses an int or a "p/q" string into an exact Fraction.

    Floats are rejected: a float in an instance file has already lost the
    exact distance it was meant to describe.
    """
    if isinstance(value, bool):
        raise TypeError(f"expected an integer or a 'p/q' string, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"expected an integer or a 'p/q' string, got {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    return math.lcm(*(v.denominator for v in values))


def derive_seed(seed: int, *path: int) -> int:
    """Derives a child seed from a master seed and a tuple of indices.

    Uses numpy's SeedSequence spawn keys, so the child seed depends only on
    (seed, path) and never on the order in which children are requested.
    """
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def atomic_write(path: Union[str, Path], text: str) -> None:
    """Writes `text` to `path` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        # mkstemp makes the file 0600; use what open() would have given
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def is_strictly_increasing(values: Sequence[Fraction]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


_T = TypeVar("_T")
_R = TypeVar("_R")


def map_ordered(
    func: Callable[[_T], _R],
    items: Iterable[_T],
    jobs: int = 1,
    desc: Optional[str] = None,
    progress: bool = False,
) -> List[_R]:
    """Maps `func` over `items` and returns the results in input order.

    With jobs > 1 the calls run in worker processes, so `func` and the items
    must be picklable. The result never depends on scheduling.
    """
    items = list(items)
    results: List[_R] = []
    with tqdm(total=len(items), desc=desc, disable=not progress, leave=False) as bar:
        if jobs <= 1:
            for item in items:
                results.append(func(item))
                bar.update()
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for result in pool.map(func, items):
                    results.append(result)
                    bar.update()
    return results
