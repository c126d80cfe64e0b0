import argparse

from linecolor.bounds import chi2z_search
from linecolor.experiments import ColoringExperiment, ExperimentResult
from linecolor.settings import Settings


class Experiment(ColoringExperiment):
    """Classify all 2-row arrays with small entries"""

    help = "search 2x3 (or 2x4) integer arrays for obstruction windows"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--columns",
            type=int,
            choices=(3, 4),
            default=3,
            help="3 looks for arrays needing a 4th color, 4 for arrays needing a 5th",
        )
        parser.add_argument(
            "--cross-check",
            action="store_true",
            help="also run the period search on arrays with an obstruction window",
        )

    def run(self, args: argparse.Namespace, settings: Settings) -> ExperimentResult:
        report = chi2z_search(
            settings.entry_max,
            settings.radius,
            settings.p_max,
            columns=args.columns,
            budget=settings.node_budget,
            cross_check=args.cross_check,
            jobs=settings.jobs,
            progress=args.progress,
        )
        return ExperimentResult(report.to_json())
