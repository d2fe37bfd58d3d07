"""Derived parameters (theta, epsilon, Delta_1, q), degree classes and good tuples.

All logarithms are natural. Degree cutoffs alpha*Delta are applied as
``d(v) >= ceil(alpha*Delta)``, which is equivalent for integer degrees.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

LOG_BASE = "e"
MIN_FORMULA_N = 17  # n > ceil(e^e) so that log log log n > 0
_TOL = 1e-9


def _ceil(x):
    # absorbs float noise such as 3*1.2 = 3.5999999999999996 or 9*(2/3)
    return math.ceil(x - _TOL * max(1.0, abs(x)))


def compute_theta(n):
    """theta(n) = 4 ln ln ln n / ln ln n."""
    if n < MIN_FORMULA_N:
        raise ValueError(
            f"theta(n) needs n >= {MIN_FORMULA_N} (got n={n}); pass an explicit theta override"
        )
    lln = math.log(math.log(n))
    return 4.0 * math.log(lln) / lln


@dataclass(frozen=True)
class AsymptoticParams:
    n: int
    c: float
    delta_obs: int
    theta: float
    epsilon: float
    delta1: int
    q: int
    mode: str
    epsilon_clamped: bool
    eps_cap: float
    log_base: str = LOG_BASE

    @property
    def k0(self):
        return _ceil(2.0 / self.epsilon**2)

    @property
    def s0(self):
        if self.c == 0:
            return self.n
        return math.floor(self.n * self.epsilon**2 / (20.0 * self.c))

    @property
    def eps_delta(self):
        """Integer degree cutoff ceil(epsilon * Delta)."""
        return _ceil(self.epsilon * self.delta_obs)

    def to_dict(self):
        d = asdict(self)
        d.update(k0=self.k0, s0=self.s0, eps_delta=self.eps_delta)
        return d


def compute_params(g1, c, overrides=None):
    """Derive the coloring parameters from the sampled graph's observed max degree.

    ``overrides`` may set any of theta, epsilon, q, delta1, eps_cap. Without
    an epsilon override, epsilon = min(sqrt(theta), eps_cap) and the clamp is
    flagged in ``mode``.
    """
    ov = {k: v for k, v in (overrides or {}).items() if v is not None}
    unknown = set(ov) - {"theta", "epsilon", "q", "delta1", "eps_cap"}
    if unknown:
        raise ValueError(f"unknown overrides {sorted(unknown)}")
    for k, v in ov.items():
        if v <= 0:
            raise ValueError(f"override {k} must be positive")
    if g1.n == 0:
        raise ValueError("graph has no vertices")
    if ov.get("epsilon", 0) > 1:
        raise ValueError("epsilon must lie in (0, 1]")

    delta = g1.max_degree
    theta = ov["theta"] if "theta" in ov else compute_theta(g1.n)
    eps_cap = ov.get("eps_cap", 0.5)
    clamped = False
    if "epsilon" in ov:
        epsilon = ov["epsilon"]
    else:
        epsilon = math.sqrt(theta)
        if epsilon > eps_cap:
            epsilon, clamped = eps_cap, True
        epsilon = min(epsilon, 1.0)
    root = theta ** (1.0 / 3.0)
    delta1 = int(ov["delta1"]) if "delta1" in ov else _ceil((1 + 2 * root) * delta)
    q = int(ov["q"]) if "q" in ov else _ceil((1 + 3 * root) * delta)
    if ov.keys() & {"theta", "epsilon", "q", "delta1"}:
        mode = "override"
    else:
        mode = "paper-formula-with-clamp" if clamped else "paper-formula"
    return AsymptoticParams(
        n=g1.n, c=float(c), delta_obs=delta, theta=theta, epsilon=epsilon,
        delta1=delta1, q=q, mode=mode, epsilon_clamped=clamped, eps_cap=eps_cap,
    )


def degree_window(n, delta):
    """Report the window n^(1-theta) <= Delta^Delta <= n^(1+theta) in log form."""
    theta = compute_theta(n)
    log_dd = delta * math.log(delta) if delta > 0 else 0.0
    lo, hi = (1 - theta) * math.log(n), (1 + theta) * math.log(n)
    return {"theta": theta, "log_delta_pow_delta": log_dd, "log_lower": lo, "log_upper": hi,
            "inside": lo <= log_dd <= hi}


def high_degree_set(g1, alpha):
    """V_alpha: vertices with degree >= ceil(alpha * max degree), sorted."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if g1.n == 0:
        raise ValueError("graph has no vertices")
    return np.flatnonzero(g1.degrees() >= _ceil(alpha * g1.max_degree))


def closed_neighborhood(g1, s):
    s = np.asarray(s, dtype=np.int64)
    mask = np.zeros(g1.n, dtype=bool)
    mask[s] = True
    rows = np.repeat(np.arange(g1.n, dtype=np.int64), g1.degrees())
    nbrs = g1.indices[mask[rows]]
    mask[nbrs] = True
    return np.flatnonzero(mask)


@dataclass(frozen=True)
class Partition:
    """V_eps, W_eps and the rest [n] minus W_eps, each a sorted vertex array."""

    v_eps: np.ndarray
    w_eps: np.ndarray
    rest: np.ndarray

    @property
    def stage_sets(self):
        return self.v_eps, np.setdiff1d(self.w_eps, self.v_eps), self.rest

    def check(self, g1):
        """Raise AssertionError if a partition invariant fails."""
        assert np.all(np.isin(self.v_eps, self.w_eps))
        assert np.intersect1d(self.w_eps, self.rest).size == 0
        assert self.w_eps.size + self.rest.size == g1.n
        in_v = np.zeros(g1.n, dtype=bool)
        in_v[self.v_eps] = True
        for v in np.setdiff1d(self.w_eps, self.v_eps).tolist():
            assert in_v[g1.neighbors(v)].any(), v


def partition(g1, epsilon):
    v_eps = high_degree_set(g1, epsilon)
    w_eps = closed_neighborhood(g1, v_eps)
    rest = np.setdiff1d(np.arange(g1.n, dtype=np.int64), w_eps)
    return Partition(v_eps, w_eps, rest)


def is_good_tuple(degrees, delta_obs, epsilon, theta):
    """Membership in L_m: entries in [ceil(eps*Delta), Delta], sum >= (1+theta^(1/3))*Delta."""
    if len(degrees) == 0:
        raise ValueError("empty degree tuple")
    lo = _ceil(epsilon * delta_obs)
    if any(not lo <= d <= delta_obs for d in degrees):
        return False
    return sum(degrees) >= (1 + theta ** (1.0 / 3.0)) * delta_obs
