"""Run configuration shared by the CLI and the verification suites."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace


DEFAULT_EPS_SCHEDULE = (0.1, 0.05, 0.025, 0.0125)


@dataclass(frozen=True)
class Config:
    """Global knobs.

    prec_digits  working decimal precision W for float-domain coefficients
    trunc_order  default series truncation order M
    cache_dir    content-addressed cache directory ('' disables caching)
    epsilon_schedule  strictly decreasing excision radii for regularized pairings
    algdep_degree / algdep_height  default integer-relation search bounds
    residue_sign  +1 keeps residue +1 at the cusp i-infinity for Q_inf - Q_tau
                  divisors; -1 flips every third-kind residue coherently
    """

    prec_digits: int = 60
    trunc_order: int = 60
    cache_dir: str = field(
        default_factory=lambda: os.environ.get(
            "HOL_CACHE_DIR", os.path.join(os.path.expanduser("~"), ".cache", "hecke-orbit-lab")
        )
    )
    epsilon_schedule: tuple = DEFAULT_EPS_SCHEDULE
    algdep_degree: int = 8
    algdep_height: float = 1e20
    residue_sign: int = 1

    def __post_init__(self):
        if self.prec_digits < 30:
            raise ValueError("prec_digits must be >= 30")
        if self.trunc_order < 10:
            raise ValueError("trunc_order must be >= 10")
        sched = tuple(self.epsilon_schedule)
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ValueError("epsilon_schedule must be strictly decreasing")
        if self.residue_sign not in (1, -1):
            raise ValueError("residue_sign must be +1 or -1")

    def with_overrides(self, **kw) -> "Config":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


DEFAULT = Config()
