#!python

import os
import sys
import argparse

try:
    import pydantic
except ImportError:
    print('Missing packages. Please run:')
    print('     pip install -r requirements.txt')
    sys.exit(1)

from src.services.corpus import corpus_statistics, save_dataset
from src.services.synthetic import figure_sentence, generate_corpus

# Description
DESCRIPTION = '''
This script writes the templated synthetic corpus used to check the extraction pipeline end to end.
It produces a train and a dev split in the native line-delimited format, plus the one-sentence
figure fixture.

Default values:
    - Output directory: ./data/synthetic
    - Train size: 500
    - Dev size: 100
    - Seed: 0 (dev uses seed + 1)
'''

# Constants
OUT_DIR    = 'data/synthetic'
TRAIN_SIZE = 500
DEV_SIZE   = 100
SEED       = 0

# Lambdas for colored output
def red(text: str) -> str: return f'\033[91m{text}\033[0m'
def boldgreen(text: str) -> str: return f'\033[1m\033[92m{text}\033[0m'


# Create the argument parser object
def create_parser():
    parser = argparse.ArgumentParser(
        description=DESCRIPTION,
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    parser.add_argument('--out',   help='Output directory')
    parser.add_argument('--train', help='Number of training sentences', type=int)
    parser.add_argument('--dev',   help='Number of dev sentences', type=int)
    parser.add_argument('--seed',  help='Seed of the training split', type=int)
    parser.add_argument('--force', help='Overwrite existing files', action='store_true')

    return parser


# Exit with a message
def exit_with_msg(msg: str, code: int):
    msg = f'\n{msg}\n'
    print(code and red(msg) or boldgreen(msg))
    sys.exit(code)


# Print the statistics of a split
def print_statistics(name: str, sentences) -> None:
    stats = corpus_statistics(sentences)
    print(f'    {name}: ' + ', '.join(f'{key}={value}' for key, value in stats.items()))


def main(out_dir: str, train_size: int, dev_size: int, seed: int, force: bool):
    try:
        targets = {
            'train': os.path.join(out_dir, 'train.jsonl'),
            'dev': os.path.join(out_dir, 'dev.jsonl'),
            'figure': os.path.join(out_dir, 'figure.jsonl'),
        }
        existing = [path for path in targets.values() if os.path.exists(path)]
        if existing and not force:
            exit_with_msg(f'Files already exist: {existing}. Please use the --force flag to overwrite them.', 1)

        print(boldgreen('\nGenerating the synthetic corpus...'))
        splits = {
            'train': generate_corpus(train_size, seed=seed, prefix='train'),
            'dev': generate_corpus(dev_size, seed=seed + 1, prefix='dev'),
            'figure': [figure_sentence()],
        }

        print(boldgreen('\nWriting the splits...'))
        for name, sentences in splits.items():
            save_dataset(targets[name], sentences)
            print_statistics(name, sentences)

        exit_with_msg(f'Synthetic corpus written to {out_dir}', 0)

    except (OSError, ValueError) as e:
        exit_with_msg(f'An error occurred: {e}', 1)


# Run the script
if __name__ == '__main__':
    print(boldgreen('\n--- Synthetic Corpus Script ---'))

    # Parse the command-line arguments
    parser = create_parser()
    args = parser.parse_args()

    # Run
    main(
        out_dir    = args.out   or OUT_DIR,
        train_size = args.train or TRAIN_SIZE,
        dev_size   = args.dev   or DEV_SIZE,
        seed       = args.seed if args.seed is not None else SEED,
        force      = args.force,
    )
