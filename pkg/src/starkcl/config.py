"""Run configuration shared by the CLI and the experiment scripts."""

import os
from dataclasses import asdict, dataclass, fields

ENV_PREFIX = "STARKCL_"


@dataclass(frozen=True)
class RunConfig:
    precision: int = 32
    degree: int = None  # L-fit degree; None means "equal to precision"
    norm_bound: int = None  # Cayley generators; None means ceil(log^3 Delta)
    epsilon: float = 0.1
    hash: str = "sha256"
    seed: int = 0
    format: str = "json"
    cache_dir: str = os.path.join("~", ".cache", "starkcl")
    no_cache: bool = False

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_sources(cls, cli=None, env=None):
        """Defaults < STARKCL_* environment < explicit command-line values."""
        env = os.environ if env is None else env
        cli = cli or {}
        vals = {}
        for f in fields(cls):
            raw = env.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                vals[f.name] = _parse(f.name, raw)
            if cli.get(f.name) is not None:
                vals[f.name] = cli[f.name]
        return cls(**vals)


def _parse(name, raw):
    if name in ("precision", "degree", "norm_bound", "seed"):
        return int(raw)
    if name == "epsilon":
        return float(raw)
    if name == "no_cache":
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return raw
