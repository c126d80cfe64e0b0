import argparse
import enum
import importlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Type

import arrow

from linecolor.settings import Settings

logger = logging.getLogger(__name__)


class Event(enum.Enum):
    START = enum.auto()
    STOP = enum.auto()
    FAIL = enum.auto()


@dataclass
class ExperimentResult:
    report: Dict[str, Any]
    # False when the experiment found what it was looking for to be missing
    ok: bool = True


class ColoringExperiment:
    """Base class for experiment plugins.

    Each module in this package exposes a subclass named `Experiment`; the
    module name is the subcommand name.
    """

    help = ""

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Adds experiment-specific flags to the subcommand parser."""

    def run(self, args: argparse.Namespace, settings: Settings) -> ExperimentResult:
        raise NotImplementedError


def log_event(
    journal: Optional[Path], name: str, event: Event, dt: Optional[arrow.Arrow] = None
) -> None:
    """Appends a timestamped line to the experiment journal, if there is one."""
    if journal is None:
        return
    if dt is None:
        dt = arrow.now()
    message = {
        Event.START: "experiment started",
        Event.STOP: "experiment finished",
        Event.FAIL: "experiment failed",
    }[event]
    timestamp = dt.format("YYYY-MM-DDTHH:mm:ss.SSSZZ")
    journal.parent.mkdir(parents=True, exist_ok=True)
    with open(journal, "a") as f:
        f.write(f"{timestamp}: {message} ({name})\n")


_REGISTERED_EXPERIMENTS: Dict[str, Type[ColoringExperiment]] = {}


def get_all_experiments() -> Dict[str, Type[ColoringExperiment]]:
    return _REGISTERED_EXPERIMENTS


def register_experiments() -> None:
    basedir = Path(__file__).resolve().parent

    for path in sorted(basedir.glob("*.py")):
        module = path.stem
        if module.startswith("_"):
            continue
        try:
            _REGISTERED_EXPERIMENTS[module] = importlib.import_module(
                f"{__name__}.{module}"
            ).Experiment
        except ImportError as ex:
            logger.debug("Failed to load %r experiment:", module, exc_info=ex)
            logger.warning("Ignoring exception while loading the %r experiment.", module)
