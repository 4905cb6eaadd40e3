"""Solver configuration."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SolveConfig:
    """Truncation orders and tolerances.

    ``section_blocks`` and ``output_degree`` may be left as ``None``; they are
    filled in from the symbol by :meth:`resolve` (``N = max(64, 8 deg G)`` and
    ``deg = N // 2``).  When both are ``None`` the solver keeps doubling ``N``
    (up to ``max_section_blocks``) until the tail mass of ``Y`` is below
    ``tail_tol``.
    """

    section_blocks: Optional[int] = None
    output_degree: Optional[int] = None
    positivity_tol: float = 1e-8
    rank_tol: float = 1e-8
    factor_tol: float = 1e-8
    solution_tol: float = 1e-6
    cross_check: bool = False
    seed: int = 0
    max_factor_blocks: int = 4096
    max_section_blocks: int = 1024
    tail_tol: float = 1e-12
    boundary_points: int = 128

    def __post_init__(self):
        for name in ("positivity_tol", "rank_tol", "factor_tol", "solution_tol", "tail_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.section_blocks is not None and self.section_blocks < 1:
            raise ValueError("section_blocks must be >= 1")
        if (
            self.section_blocks is not None
            and self.output_degree is not None
            and not self.output_degree < self.section_blocks
        ):
            raise ValueError("output_degree must be smaller than section_blocks")

    def resolve(self, g_degree: int) -> "SolveConfig":
        """Return a copy with section size and output degree made concrete."""
        n = self.section_blocks or max(64, 8 * int(g_degree))
        deg = self.output_degree if self.output_degree is not None else n // 2
        return dataclasses.replace(self, section_blocks=n, output_degree=deg)

    @property
    def adaptive(self) -> bool:
        return self.section_blocks is None and self.output_degree is None

    def replace(self, **changes) -> "SolveConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolveConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path) -> "SolveConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
