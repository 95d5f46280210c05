# hermclust/core/config.py
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file at the project root
load_dotenv()

LOG_LEVEL = os.getenv("HERMCLUST_LOG_LEVEL", "INFO").upper()

# Cap on benchmark workers; defaults to every core
MAX_WORKERS = int(os.getenv("HERMCLUST_MAX_WORKERS", "0")) or (os.cpu_count() or 1)

BENCHMARK_BACKEND = os.getenv("HERMCLUST_BENCHMARK_BACKEND", "local").lower()  # local | celery
REDIS_URL = os.getenv("REDIS_URL", "redis://localhost:6379/0")

OUTPUT_DIR = Path(os.getenv("HERMCLUST_OUTPUT_DIR", "./data/runs")).resolve()

OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

# Parameter clamping shared by mle-core, lesc and theory
ETA_MIN = float(os.getenv("HERMCLUST_ETA_MIN", "1e-4"))
P_FLOOR = 1e-12  # used when no vertex count is known

EXHAUSTIVE_MAX_N = 20
DENSE_MAX_N = 2000
