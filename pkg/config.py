"""
Moral Frames Configuration
Environment variables and settings for the moral framing toolkit
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Project metadata
PROJECT_NAME = "Moral Frames"
VERSION = "1.0.0"
DESCRIPTION = """
Moral Frames - moral foundation framing toolkit

Features:
- Word-embedding semantic axes for moral foundation micro-frames
- Document framing Bias and Intensity scores
- Logistic regression classifiers for moral foundations and partisanship
- Evaluation harness (repeated splits, weighted metrics, correlation reports)
"""

# Version stamped into every persisted axis set / model document.
# Bump when the JSON layout changes.
SCHEMA_VERSION = 1

# Bundled data (default lexicon, source leanings, topic keywords, label groups)
REPO_ROOT = Path(__file__).resolve().parent
DATA_DIR = Path(os.getenv("MORAL_FRAMES_DATA_DIR", str(REPO_ROOT / "data")))
DEFAULT_LEXICON_PATH = DATA_DIR / "default_lexicon.json"
DEFAULT_LEANINGS_PATH = DATA_DIR / "leanings.json"
DEFAULT_TOPICS_PATH = DATA_DIR / "topics.json"
DEFAULT_LABEL_GROUPS_PATH = DATA_DIR / "label_groups.json"

# Experiment defaults
DEFAULT_SEED = int(os.getenv("MORAL_FRAMES_SEED", "42"))
DEFAULT_TRAIN_FRACTION = 0.75
DEFAULT_SPLITS = 10
DEFAULT_MIN_VOTES = 2
DEFAULT_MIN_ANNOTATORS = 3
DEFAULT_CI_LEVEL = 0.95
DECISION_THRESHOLD = 0.5

# Classifier defaults (full-batch gradient descent)
DEFAULT_L2_STRENGTH = 1.0
DEFAULT_LEARNING_RATE = 0.1
DEFAULT_MAX_ITERATIONS = 5000
DEFAULT_TOLERANCE = 1e-6

# Numerical tolerances
AXIS_NORM_TOLERANCE = 1e-12

# Thread pool size for per-dimension training and repeated splits
WORKERS = int(os.getenv("MORAL_FRAMES_WORKERS", "4"))

# Logging
LOG_LEVEL = os.getenv("MORAL_FRAMES_LOG_LEVEL", "WARNING").upper()
