from dotenv import load_dotenv, find_dotenv
import os, sys
import logging

if __debug__:
    if not load_dotenv(find_dotenv(usecwd=True)):
        print("No .env file found, using environment defaults", file=sys.stderr)

# Logging settings
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
logging.basicConfig(
    level = getattr(logging, LOG_LEVEL, logging.INFO),
    format="[%(levelname)s] %(asctime)s - [%(name)s] %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    handlers=[logging.StreamHandler(sys.stdout)]
)

# Run settings
RUNS_DIR = os.getenv('RUNS_DIR', 'runs')
DEVICE = os.getenv('DEVICE', 'cpu').lower()

# Training defaults
DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', 13))
MAX_SENTENCE_LENGTH = int(os.getenv('MAX_SENTENCE_LENGTH', 100))
TRAIN_MAX_EPOCHS = int(os.getenv('TRAIN_MAX_EPOCHS', 100))
TRAIN_PATIENCE = int(os.getenv('TRAIN_PATIENCE', 10))


def get_train_settings() -> dict:
    '''
    Get the environment-driven training defaults. Values given in a config file
    or on the command line take precedence over these.

    Returns:
        dict: The seed, maximum sentence length, maximum epochs, patience and device.
    '''
    return {
        'seed': DEFAULT_SEED,
        'max_sentence_length': MAX_SENTENCE_LENGTH,
        'max_epochs': TRAIN_MAX_EPOCHS,
        'patience': TRAIN_PATIENCE,
        'device': DEVICE,
    }
