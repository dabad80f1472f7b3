"""Bounds, seeds and defaults, read from an INI file.

The file is looked up at ``$KRONECKER_CONFIG`` if set, else ``./kronecker.ini``;
a missing file means built-in defaults.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from .errors import DomainError

ENV_VAR = "KRONECKER_CONFIG"
DEFAULT_PATH = "kronecker.ini"

_SECTIONS = {
    "bounds": ("subspace_bound", "idempotent_bound", "iso_bound", "tree_bound", "full_census_bound"),
    "defaults": ("p", "k", "seed", "samples", "jobs"),
}


@dataclass
class Config:
    subspace_bound: int = 2**24
    idempotent_bound: int = 2**20
    iso_bound: int = 2**20
    tree_bound: int = 10**7
    full_census_bound: int = 2**28
    p: int = 2
    k: int = 1
    seed: int = 42
    samples: int = 100_000
    jobs: int = 1

    def validate(self) -> "Config":
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or v <= 0:
                raise DomainError(f"config value {f.name} must be a positive integer, got {v!r}")
        return self

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        values = asdict(self)
        for section, keys in _SECTIONS.items():
            cp[section] = {k: str(values[k]) for k in keys}
        lines = []
        for section in cp.sections():
            lines.append(f"[{section}]")
            lines += [f"{k} = {v}" for k, v in cp[section].items()]
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def from_ini(cls, text: str) -> "Config":
        cp = configparser.ConfigParser()
        cp.read_string(text)
        kwargs = {}
        for section, keys in _SECTIONS.items():
            if not cp.has_section(section):
                continue
            for k in keys:
                if cp.has_option(section, k):
                    try:
                        kwargs[k] = cp.getint(section, k)
                    except ValueError as exc:
                        raise DomainError(f"config value {section}.{k} is not an integer") from exc
        return cls(**kwargs).validate()


def config_path() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_PATH))


def load(path: Optional[os.PathLike] = None) -> Config:
    p = Path(path) if path is not None else config_path()
    if not p.exists():
        if path is not None or ENV_VAR in os.environ:
            raise DomainError(f"config file {p} not found")
        return Config()
    return Config.from_ini(p.read_text())
