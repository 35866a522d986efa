import os
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger

from .environment import AppEnvironment

# src/ directory
BASE_DIR = Path(__file__).resolve().parent.parent
logger.debug(f"BASE_DIR resolved to: {BASE_DIR}")


# Load base .env
# ----------------------------------------------------------------
ENVS_DIR = BASE_DIR.parent / ".envs"
ENV_BASE_FILE_PATH = ENVS_DIR / ".env.base"
if ENV_BASE_FILE_PATH.exists():
    load_dotenv(ENV_BASE_FILE_PATH)
    logger.debug(f"Loaded base environment file: {ENV_BASE_FILE_PATH}")
else:
    logger.debug(f".env.base not found at: {ENV_BASE_FILE_PATH}")


# Resolve environment; a CLI run without one behaves as local
# ----------------------------------------------------------------
APP_ENVIRONMENT: str = os.environ.get("ENVIRONMENT", "")
if not APP_ENVIRONMENT:
    APP_ENVIRONMENT = AppEnvironment.LOCAL.value
    logger.warning("ENVIRONMENT is not set, falling back to 'local'")

try:
    ENVIRONMENT_ENUM = AppEnvironment.parse(APP_ENVIRONMENT)
except ValueError as e:
    logger.critical(f"Invalid ENVIRONMENT value: {e}")
    raise
APP_ENVIRONMENT = ENVIRONMENT_ENUM.value


# Load specific env file
# ----------------------------------------------------------------
ENV_FILE_PATH = ENVS_DIR / ENVIRONMENT_ENUM.env_file_name
if ENV_FILE_PATH.exists():
    load_dotenv(ENV_FILE_PATH)
    logger.debug(f"Loaded environment file for {APP_ENVIRONMENT}: {ENV_FILE_PATH}")
else:
    logger.debug(f"Environment file not found: {ENV_FILE_PATH}")
