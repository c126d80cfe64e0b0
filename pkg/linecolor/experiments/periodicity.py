import argparse

from linecolor.experiments import ColoringExperiment, ExperimentResult
from linecolor.model import enumerate_arrays
from linecolor.periodic import periodicity_experiment
from linecolor.settings import Settings


class Experiment(ColoringExperiment):
    """Compare obstruction windows with periodic colorings on all small arrays"""

    help = "look for arrays colorable on every window but without a short period"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, default=1, help="rows per array")
        parser.add_argument("--m", type=int, default=2, help="columns per array")

    def run(self, args: argparse.Namespace, settings: Settings) -> ExperimentResult:
        family = enumerate_arrays(args.k, args.m, settings.entry_max)
        report = periodicity_experiment(
            family,
            radius=settings.radius,
            p_max=settings.p_max,
            budget=settings.node_budget,
            jobs=settings.jobs,
            progress=args.progress,
        )
        return ExperimentResult(report.to_json())
