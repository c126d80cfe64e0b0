import argparse

from linecolor.bounds import upper_chromatic_lower_bound
from linecolor.experiments import ColoringExperiment, ExperimentResult
from linecolor.settings import Settings


class Experiment(ColoringExperiment):
    """Empirical lower bound on the number of colors needed for the integers"""

    help = "find the most columns for which some small k-row array has an obstruction"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, default=2, help="rows per array")
        parser.add_argument("--m-max", type=int, default=6, help="largest column count tried")

    def run(self, args: argparse.Namespace, settings: Settings) -> ExperimentResult:
        report = upper_chromatic_lower_bound(
            args.k,
            settings.entry_max,
            settings.radius,
            m_max=args.m_max,
            budget=settings.node_budget,
        )
        return ExperimentResult(report.to_json())
