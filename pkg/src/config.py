import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from errors import ConfigError, TauTooLarge

# Resolve data directory relative to this file (in src/)
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(PROJECT_ROOT, "data")
INDEX_DIR = os.path.join(DATA_DIR, "indexes")

DEFAULT_MU = Fraction(1, 8)


@dataclass(frozen=True)
class IndexConfig:
    """
    Build parameters for an index.

    mu controls the window length tau = floor(mu * log_sigma n). An explicit tau
    overrides the formula and always selects the succinct path.
    """
    mu: Fraction = DEFAULT_MU
    eps: float = 0.5
    tau: Optional[int] = None
    naive_min_n: int = 256
    oracle_max_n: int = 10_000

    def __post_init__(self):
        mu = Fraction(self.mu)
        if not (0 < mu < Fraction(1, 6)):
            raise ConfigError(f"mu must lie in (0, 1/6), got {mu}")
        object.__setattr__(self, "mu", mu)
        if not (0 < self.eps < 1):
            raise ConfigError(f"eps must lie in (0, 1), got {self.eps}")
        if self.tau is not None and self.tau < 1:
            raise ConfigError(f"tau must be >= 1, got {self.tau}")


def tau_from_formula(n: int, sigma: int, mu: Fraction) -> int:
    """Largest t with sigma^(t/mu) <= n, evaluated exactly (no floating point)."""
    mu = Fraction(mu)
    bound = n ** mu.numerator
    t = 0
    while sigma ** ((t + 1) * mu.denominator) <= bound:
        t += 1
    return t


def choose_tau(n: int, sigma: int, config: IndexConfig):
    """
    Returns (tau, fallback). The fallback flag selects plain SA/ISA arrays.
    """
    if config.tau is not None:
        if 2 * config.tau > n:
            raise TauTooLarge(f"tau={config.tau} exceeds n/2 for n={n}")
        return config.tau, False

    raw_tau = tau_from_formula(n, sigma, config.mu)
    fallback = sigma ** 7 >= n or n < config.naive_min_n or raw_tau == 0
    tau = max(1, raw_tau)
    if 2 * tau > n:
        # Only reachable for tiny texts, which are in fallback mode anyway.
        tau = max(1, n // 2)
    return tau, fallback
