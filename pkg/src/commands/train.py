import json
import logging
from pathlib import Path
from typing import Optional
import typer
from rich.table import Table
from .common import console, load_corpus, load_train_config, run_manifest
from ..services.trainer import fit, sweep_seeds
from ..utils.config import DEVICE
from ..utils.file_utils import ensure_dir

# Configure logging
logger = logging.getLogger(__name__)


def register_commands(app: typer.Typer) -> typer.Typer:
    """
    Add the training command to the application.

    Returns:
        typer.Typer: The application.
    """
    app.command('train', help="Train a model and write the checkpoint with the best dev F1.")(train)
    return app


def train(
    train_path: Path = typer.Option(..., '--train', help="Training corpus file or prepared directory"),
    dev_path: Path = typer.Option(..., '--dev', help="Dev corpus file or prepared directory"),
    out: Path = typer.Option(..., '--out', help="Checkpoint directory"),
    config_path: Optional[Path] = typer.Option(None, '--config', help="Flat KEY=value file of TrainConfig fields"),
    seed: Optional[int] = typer.Option(None, '--seed', help="Seed; overrides the config"),
    seeds: int = typer.Option(1, '--seeds', min=1, help="Number of consecutive seeds to train"),
    max_epochs: Optional[int] = typer.Option(None, '--max-epochs', help="Overrides the config"),
    device: str = typer.Option(DEVICE, '--device', help="Torch device"),
) -> None:
    ''' Train one model, or one per seed with a summary of the dev F1 '''
    inputs = {'train': train_path, 'dev': dev_path}
    if config_path is not None:
        inputs['config'] = config_path

    with run_manifest('train', inputs) as manifest:
        config = load_train_config(config_path, seed=seed, max_epochs=max_epochs)
        manifest.config = config.as_flat()
        manifest.seed = config.seed

        train_data, vocabularies = load_corpus(train_path)
        dev_data, _ = load_corpus(dev_path)

        if seeds == 1:
            checkpoint = fit(train_data, dev_data, config, vocabularies, out, device)
            manifest.artifacts = {'checkpoint': str(out)}
            console.print(f"Best dev F1 [bold]{checkpoint.dev_f1:.4f}[/bold] at epoch {checkpoint.epoch}, "
                          f"checkpoint written to {out}")
            return

        summary = sweep_seeds(train_data, dev_data, config, range(config.seed, config.seed + seeds),
                              vocabularies, out, device)
        summary_path = ensure_dir(out) / 'summary.json'
        summary_path.write_text(json.dumps(summary, indent=2), encoding='utf-8')
        manifest.artifacts = {'checkpoints': str(out), 'summary': str(summary_path)}

        table = Table(title=f"Dev F1 over {seeds} seeds")
        table.add_column('seed', justify='right')
        table.add_column('dev F1', justify='right')
        for run_seed, f1 in summary['dev_f1'].items():
            table.add_row(str(run_seed), f"{f1:.4f}")
        table.add_row('mean ± stdev', f"{summary['mean']:.4f} ± {summary['stdev']:.4f}", style='bold')
        console.print(table)
