import logging
import os

_log = logging.getLogger(__name__)

APP_NAME = "emcong"
VERSION = "1.0.0"
APP_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        _log.warning("Ignoring non-integer %s=%r, using %d", name, raw, default)
        return default
    if value < 1:
        _log.warning("Ignoring non-positive %s=%r, using %d", name, raw, default)
        return default
    return value


# Oracles iterate at most this many terms before refusing
BRUTE_FORCE_CAP = _env_int("EMCONG_BRUTE_FORCE_CAP", 10**8)

TRIAL_DIVISION_LIMIT = 10**7

SIEVE_DEFAULT_BOUND = 10**6
SIEVE_MAX_BOUND = 10**8
SIEVE_SEGMENT_SIZE = 10**6

WILSON_MAX_PRIME = 10**5

ZAGIER_BRUTE_FORCE_MAX = 10**4

# Strong-probable-prime bases 2..41 are a proof of primality below this bound
PRIMALITY_DETERMINISTIC_BOUND = 3317044064679887385961981
PRIMALITY_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

WORKERS = _env_int("EMCONG_WORKERS", 1)

RECORDS_PATH = os.environ.get("EMCONG_RECORDS") or os.path.join(APP_DIR, "app", "data", "records.json")

# User-writable location for the optional findings log
DATA_DIR = os.environ.get("EMCONG_DATA_DIR") or os.path.join(os.path.expanduser("~"), "." + APP_NAME)
FINDINGS_DB_PATH = os.environ.get("EMCONG_FINDINGS_DB") or None
MAX_FINDINGS = 5000
