import logging
import os

from gsorlab.config.settings import get_settings

_configured = False


# Function to set up logging
def setup_logging(log_dir=None, log_file=None, level=None):
    global _configured
    if _configured:
        return

    settings = get_settings()
    log_dir = log_dir or settings.log_dir
    log_file = log_file or settings.log_file
    level = level or settings.log_level

    # Ensure the logs directory exists
    os.makedirs(log_dir, exist_ok=True)

    log_path = os.path.join(log_dir, log_file)

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(
                log_path, mode="w"
            ),  # Overwrite log file on each run
            logging.StreamHandler(),  # stderr, keeps stdout free for JSON
        ],
    )
    _configured = True
