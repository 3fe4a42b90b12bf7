# Environment access for gsorlab settings.

import os
from dotenv import load_dotenv, find_dotenv

ENV_PREFIX = "GSORLAB_"


# A .env file anywhere above the working directory is picked up; its format is
# plain KEY=value lines, e.g. GSORLAB_DENSE_THRESHOLD=1500
def load_env():
    _ = load_dotenv(find_dotenv(usecwd=True))


def get_env_str(name, default=None):
    load_env()
    return os.getenv(f"{ENV_PREFIX}{name}", default)


def get_env_float(name, default):
    value = get_env_str(name)
    return float(value) if value not in (None, "") else default


def get_env_int(name, default):
    value = get_env_str(name)
    return int(value) if value not in (None, "") else default
