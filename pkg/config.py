"""
config.py — Constants and configuration for arboru.
Degree bounds, search radii, sample budgets and the group catalog live here.
"""

import os
from dotenv import load_dotenv

load_dotenv()

# ─── Reproducibility ─────────────────────────────────────────────────────────
# ARBORU_SEED (read at run time) overrides any --seed flag.
DEFAULT_SEED: int = 20140909

# ─── Tree & Group Bounds ─────────────────────────────────────────────────────
MIN_DEGREE: int = 2
MAX_DEGREE: int = 12                     # full element enumeration stays tiny up to here
MIN_TREE_DEGREE: int = 3                 # hyp_ends_ray needs colors 1, 2, 3

# ─── Exact Search Radii ──────────────────────────────────────────────────────
WITNESS_RADIUS: int = 6                  # a^-n g a^n checked trivial on B(x0, 6)
LAW_BALL_RADIUS: int = int(os.getenv("ARBORU_LAW_RADIUS", "6"))
TITS_BALL_RADIUS: int = 8
BIPARTITION_RADIUS: int = 4
DENSITY_BALL_RADIUS: int = 4
APERIODIC_PROBE_LENGTH: int = 120        # hyp_ends_ray prefix; its second half is checked for periods
APERIODIC_MAX_PERIOD: int = 20
OBSTRUCTION_BLOCK: int = 2               # N in the (ab)^N (ac) (ab)^N block

# ─── Sample Budgets (default preset) ─────────────────────────────────────────
LAW_SAMPLES: int = int(os.getenv("ARBORU_LAW_SAMPLES", "120"))
CLASSIFY_SAMPLES: int = int(os.getenv("ARBORU_CLASSIFY_SAMPLES", "120"))
TITS_SAMPLES: int = int(os.getenv("ARBORU_TITS_SAMPLES", "120"))
CONTRACTION_SAMPLES: int = int(os.getenv("ARBORU_CONTRACTION_SAMPLES", "120"))
GENERATION_SAMPLES: int = int(os.getenv("ARBORU_GENERATION_SAMPLES", "40"))
MAUTNER_SAMPLES: int = int(os.getenv("ARBORU_MAUTNER_SAMPLES", "20"))
MAUTNER_MAX_INDEX: int = 8
SAMPLE_DEPTH: int = int(os.getenv("ARBORU_DEPTH", "4"))
ORBIT_DEPTH: int = int(os.getenv("ARBORU_ORBIT_DEPTH", "5"))
ORACLE_DEPTH: int = 4                    # union-find cross-check depth

# ─── Group Catalog ───────────────────────────────────────────────────────────
# Format: name -> (degree, generators in cycle notation, ';'-separated)
GROUP_CATALOG: dict[str, tuple[int, str]] = {
    "Sym3": (3, "(1 2);(1 2 3)"),
    "Sym4": (4, "(1 2);(1 2 3 4)"),
    "Sym5": (5, "(1 2);(1 2 3 4 5)"),
    "Sym6": (6, "(1 2);(1 2 3 4 5 6)"),
    "A4": (4, "(1 2 3);(2 3 4)"),
    "A5": (5, "(1 2 3);(1 2 3 4 5)"),
    "D5": (5, "(2 5)(3 4);(1 2 3 4 5)"),
    "C4": (4, "(1 2 3 4)"),
    "C5": (5, "(1 2 3 4 5)"),
}
DEFAULT_SUITE_GROUPS: list[str] = ["Sym3", "Sym5", "A5", "D5", "C4", "C5"]

# ─── State File ──────────────────────────────────────────────────────────────
# Empty path disables the verify-run ledger.
STATE_FILE_PATH: str = os.getenv("STATE_FILE_PATH", "")

# ─── Parallelism ─────────────────────────────────────────────────────────────
SUITE_WORKERS: int = int(os.getenv("ARBORU_WORKERS", "1"))

# ─── Logging ─────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT: str = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
