from anystore.settings import BaseSettings
from pydantic_settings import SettingsConfigDict

__version__ = "0.1.0"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="spdelab_",
        env_nested_delimiter="__",
        env_file=".env",
        nested_model_default_partial_update=True,
        extra="ignore",
    )

    seed: int = 0
    """Master seed for the counter-based noise streams (``SPDELAB_SEED``)."""

    threads: int = 1
    """Worker threads for the ensemble fan-out (``SPDELAB_THREADS``). Paths
    are always reduced in path-index order, so the thread count never changes
    the numbers."""

    chunk_paths: int = 500
    """Paths per vectorised batch inside a worker."""

    rng_block_steps: int = 256
    """Time steps covered by one counter block of a path's noise stream.
    Changing it changes every sampled path – keep it fixed across runs that
    are compared with each other."""

    c1_cap: float = 2.0
    """Upper end of the bisection interval for the coercivity constant c1."""

    embedding_constant: float = 10.0
    """Conservative bound for the embedding D(A^alpha) -> C_0 used in the
    Picard contraction budget."""
