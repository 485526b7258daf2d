import logging
import sys
from typing import List, Optional
import click
import typer
from rich.console import Console
from src.utils.exceptions import ExtractionToolkitError
from src.commands.corpus import register_commands as corpus_commands
from src.commands.evaluate import register_commands as evaluate_commands
from src.commands.extract import register_commands as extract_commands
from src.commands.train import register_commands as train_commands
from app_metadata import metadata

# Set up the logging
logger = logging.getLogger(__name__)

# Typer application
app = typer.Typer(
    name=metadata['name'],
    help=f"{metadata['description']} (v{metadata['version']})\n{metadata['documentation']}",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)

# Add the command groups
corpus_commands(app)
train_commands(app)
extract_commands(app)
evaluate_commands(app)

_stderr = Console(stderr=True)


def dispatch(argv: Optional[List[str]] = None) -> int:
    '''
    Run one subcommand.

    Args:
        argv (Optional[List[str]]): Arguments without the program name; sys.argv[1:] when omitted.

    Returns:
        int: 0 on success, 1 for a toolkit error, 2 for a usage error.
    '''
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name=metadata['name'], standalone_mode=False)
        return result if isinstance(result, int) else 0

    except click.ClickException as e:
        e.show()
        return e.exit_code

    except click.exceptions.Abort:
        _stderr.print("Aborted")
        return 1

    except ExtractionToolkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        _stderr.print(f"[{e.category}] {e}", markup=False, soft_wrap=True)
        return 1


if __name__ == "__main__":
    sys.exit(dispatch())
