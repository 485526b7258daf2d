import logging
from pathlib import Path
from typing import Optional
import typer
from .common import console, load_corpus, report_table, run_manifest
from ..services.evaluator import BREAKDOWNS, evaluate, measure_throughput
from ..storage.checkpoint_store import load_checkpoint
from ..utils.config import DEVICE

# Configure logging
logger = logging.getLogger(__name__)


def register_commands(app: typer.Typer) -> typer.Typer:
    """
    Add the scoring and timing commands to the application.

    Returns:
        typer.Typer: The application.
    """
    app.command('eval', help="Score predictions against gold triplets.")(evaluate_predictions)
    app.command('bench', help="Measure inference throughput in batches per second.")(bench)
    return app


def evaluate_predictions(
    gold: Path = typer.Option(..., '--gold', help="Gold corpus"),
    pred: Path = typer.Option(..., '--pred', help="Predictions written by extract"),
    by: Optional[str] = typer.Option(None, '--by', help=f"Breakdown: {' or '.join(BREAKDOWNS)}"),
) -> None:
    ''' Print the flat key=value report followed by an aligned table '''
    if by is not None and by not in BREAKDOWNS:
        raise typer.BadParameter(f"expected one of {', '.join(BREAKDOWNS)}", param_hint="'--by'")

    with run_manifest('eval', {'gold': gold, 'pred': pred}) as manifest:
        gold_data, _ = load_corpus(gold)
        pred_data, _ = load_corpus(pred)
        report = evaluate(gold_data, pred_data, by)
        manifest.config = {'by': by}

        typer.echo("dedup_predictions=true")
        for line in report.as_flat():
            typer.echo(line)
        console.print(report_table(report, f"Exact-match scores of {pred}"))


def bench(
    model: Path = typer.Option(..., '--model', help="Checkpoint directory"),
    input: Path = typer.Option(..., '--input', help="Corpus to extract from"),
    batch_size: int = typer.Option(64, '--batch-size', min=1, help="Sentences per batch"),
    epochs: int = typer.Option(3, '--epochs', min=3, help="Timed passes over the corpus"),
    device: str = typer.Option(DEVICE, '--device', help="Torch device"),
) -> None:
    ''' Print the mean batches per second of inference '''
    with run_manifest('bench', {'input': input}) as manifest:
        checkpoint = load_checkpoint(model, device)
        data, _ = load_corpus(input)
        rate = measure_throughput(checkpoint.model, data, batch_size, epochs)
        manifest.config = {'batch_size': batch_size, 'epochs': epochs, 'device': device}
        typer.echo(f"batches_per_second={rate:.2f}")
