import argparse

from linecolor.experiments import ColoringExperiment, ExperimentResult
from linecolor.formats import array_to_json
from linecolor.model import enumerate_arrays
from linecolor.periodic import sweep_periodic
from linecolor.settings import Settings


class Experiment(ColoringExperiment):
    """Every one-row array with three columns should color the integers"""

    help = "find a periodic coloring for every 1x3 array with small entries"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--columns", type=int, default=3, help="columns per array")

    def run(self, args: argparse.Namespace, settings: Settings) -> ExperimentResult:
        family = enumerate_arrays(1, args.columns, settings.entry_max)
        records = sweep_periodic(
            family,
            settings.p_max,
            budget=settings.node_budget,
            jobs=settings.jobs,
            progress=args.progress,
        )
        failures = [rec for rec in records if rec.periodic is None]
        report = {
            "format": 1,
            "entry_max": settings.entry_max,
            "p_max": settings.p_max,
            "arrays": len(records),
            "max_period": max(
                (rec.periodic.period for rec in records if rec.periodic is not None),
                default=None,
            ),
            "failures": [
                {"array": array_to_json(rec.array), "errors": rec.errors} for rec in failures
            ],
        }
        return ExperimentResult(report, ok=not failures)
