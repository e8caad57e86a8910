import os
import zlib
from dataclasses import dataclass

import numpy as np

SEED_ENV = 'PSEUDOSCHED_SEED'
LOG_LEVEL_ENV = 'PSEUDOSCHED_LOG_LEVEL'
JOBS_ENV = 'PSEUDOSCHED_JOBS'

# Budget envelope: deliveries allowed per vertex per unit of (max degree + 1)
BUDGET_FACTOR = 64

# Exhaustive oracles
ORACLE_MAX_VERTICES = 10
EXACT_MAX_VERTICES = 8

GNP_MAX_ATTEMPTS = 200


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    log_level: str = 'INFO'
    jobs: int = 1

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        return cls(
            seed=int(environ.get(SEED_ENV, 0)),
            log_level=environ.get(LOG_LEVEL_ENV, 'INFO').upper(),
            jobs=int(environ.get(JOBS_ENV, 1)),
        )


def derive_seed(seed, *keys):
    """Split one user seed into an independent, stable per-component seed."""
    spawn_key = tuple(
        key if isinstance(key, int) else zlib.crc32(str(key).encode('utf-8'))
        for key in keys
    )
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key)
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def default_budget(n, max_degree):
    return BUDGET_FACTOR * max(n, 1) * (max_degree + 1)


def default_palette_cap(max_degree):
    return 2 * (max_degree + 1)
