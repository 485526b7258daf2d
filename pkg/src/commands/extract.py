import logging
from pathlib import Path
import typer
from .common import console, load_corpus, run_manifest
from ..services.corpus import save_dataset
from ..services.extraction import predict_corpus
from ..storage.checkpoint_store import load_checkpoint
from ..utils.config import DEVICE

# Configure logging
logger = logging.getLogger(__name__)


def register_commands(app: typer.Typer) -> typer.Typer:
    """
    Add the extraction command to the application.

    Returns:
        typer.Typer: The application.
    """
    app.command('extract', help="Write the triplets a trained model extracts from a corpus.")(extract)
    return app


def extract(
    model: Path = typer.Option(..., '--model', help="Checkpoint directory"),
    input: Path = typer.Option(..., '--input', help="Corpus file or prepared directory"),
    out: Path = typer.Option(..., '--out', help="Predictions file"),
    batch_size: int = typer.Option(64, '--batch-size', min=1, help="Sentences per batch"),
    device: str = typer.Option(DEVICE, '--device', help="Torch device"),
) -> None:
    ''' One prediction record per sentence, in the native schema without entity types '''
    with run_manifest('extract', {'model': model, 'input': input}) as manifest:
        checkpoint = load_checkpoint(model, device)
        data, _ = load_corpus(input)
        predictions = predict_corpus(checkpoint.model, data, batch_size, progress=True)
        save_dataset(out, predictions)

        manifest.config = checkpoint.config.as_flat()
        manifest.seed = checkpoint.config.seed
        manifest.artifacts = {'predictions': str(out)}
        console.print(f"Wrote {len(predictions)} predictions with "
                      f"{sum(len(p.triplets) for p in predictions)} triplets to {out}")
