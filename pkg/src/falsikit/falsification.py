"""Likelihood-bound model falsification with FDR-derived error bounds.

A model's residual vector is scored with a diagonal Gaussian log-likelihood
and compared against a lower bound built from Benjamini-Hochberg rank-wise
significance levels: rank i of the p-value-sorted residuals gets level
alpha_i = (i / N_o) * alpha, the two-sided Gaussian quantile at alpha_i / 2
gives symmetric error bounds, and the bound is the product of the minimum
Gaussian densities over those intervals (attained at the interval endpoints).

Because the rank-wise endpoints depend only on (noise model, alpha, N_o) and
not on any particular model's residuals, the log bound is computed once and
cached; every model in an ensemble shares it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erfc, erfcinv

__all__ = [
    "MeasurementSet",
    "ResidualNoiseModel",
    "FdrConfig",
    "FalsificationVerdict",
    "FalsificationReport",
    "residuals",
    "log_likelihood",
    "p_values",
    "bh_levels",
    "bh_quantiles",
    "bh_error_bounds",
    "likelihood_bound",
    "measurement_rejections",
    "falsify",
    "falsify_classes",
]

_LOG_2PI = np.log(2.0 * np.pi)
_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class MeasurementSet:
    """Stacked observed outputs d (channels interleaved time-major)."""

    d: np.ndarray
    dt: float
    channel_names: tuple[str, ...] = ("output",)

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("measurement vector must be 1-d and non-empty")
        if not np.all(np.isfinite(d)):
            raise ValueError("measurement vector contains non-finite entries")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def n_obs(self) -> int:
        return self.d.size

    @property
    def n_channels(self) -> int:
        return len(self.channel_names)

    def by_channel(self) -> np.ndarray:
        return self.d.reshape(self.d.size // self.n_channels, self.n_channels)


@dataclass(frozen=True)
class ResidualNoiseModel:
    """Diagonal Gaussian residual model: either one shared sigma or one per channel.

    Per-channel sigmas are expanded over the interleaved stacking order, so
    entry j of a residual vector uses sigma[j mod n_channels].
    """

    std_devs: tuple[float, ...]

    def __post_init__(self):
        stds = tuple(float(s) for s in np.atleast_1d(np.asarray(self.std_devs, dtype=float)))
        if any(not np.isfinite(s) or s <= 0.0 for s in stds):
            raise ValueError("all residual std devs must be finite and > 0")
        object.__setattr__(self, "std_devs", stds)

    @classmethod
    def iid(cls, sigma: float) -> "ResidualNoiseModel":
        return cls((sigma,))

    @classmethod
    def per_channel(cls, sigmas) -> "ResidualNoiseModel":
        return cls(tuple(sigmas))

    @property
    def kind(self) -> str:
        return "diagonal_iid" if len(self.std_devs) == 1 else "diagonal_per_channel"

    def sigma_vector(self, n_obs: int) -> np.ndarray:
        """Per-entry sigma for a stacked residual of length n_obs."""
        stds = np.asarray(self.std_devs)
        if stds.size == 1:
            return np.full(n_obs, stds[0])
        if n_obs % stds.size != 0:
            raise ValueError(
                f"residual length {n_obs} is not a multiple of the channel count {stds.size}")
        return np.tile(stds, n_obs // stds.size)


@dataclass(frozen=True)
class FdrConfig:
    """Target identification probability phi = 1 - alpha."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @classmethod
    def from_phi(cls, phi: float) -> "FdrConfig":
        return cls(alpha=1.0 - phi)

    @property
    def phi(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class FalsificationVerdict:
    class_id: str
    sample_index: int
    log_likelihood: float
    log_bound: float
    rejected_count: int = 0

    @property
    def unfalsified(self) -> bool:
        # strict inequality: a tie with the bound falsifies
        return self.log_likelihood > self.log_bound


@dataclass
class FalsificationReport:
    """Per-class verdicts and unfalsified fractions."""

    verdicts: dict[str, list[FalsificationVerdict]]
    noise: ResidualNoiseModel
    config: FdrConfig

    def unfalsified_fraction(self, class_id: str) -> float:
        v = self.verdicts[class_id]
        return sum(x.unfalsified for x in v) / len(v)

    def unfalsified(self, class_id: str) -> list[FalsificationVerdict]:
        return [x for x in self.verdicts[class_id] if x.unfalsified]

    def counts(self, class_id: str) -> tuple[int, int, int]:
        """(N_s, N_u, N_f) for one class."""
        v = self.verdicts[class_id]
        n_u = sum(x.unfalsified for x in v)
        return len(v), n_u, len(v) - n_u

    @property
    def class_ids(self) -> list[str]:
        return list(self.verdicts)


# ---------------------------------------------------------------------------
# core statistics

def residuals(h, d) -> np.ndarray:
    """Elementwise model-minus-measurement residual vector(s).

    ``h`` may be a single stacked output (1-d) or a batch (n_models, N_o).
    """
    h_arr = h.values if hasattr(h, "values") else np.asarray(h, dtype=float)
    d_arr = d.d if isinstance(d, MeasurementSet) else np.asarray(d, dtype=float)
    if h_arr.shape[-1] != d_arr.shape[-1]:
        raise ValueError(
            f"output length {h_arr.shape[-1]} does not match measurement length {d_arr.shape[-1]}")
    if hasattr(h, "channel_names") and isinstance(d, MeasurementSet) \
            and tuple(h.channel_names) != tuple(d.channel_names):
        raise ValueError("output and measurement channel descriptors differ")
    return h_arr - d_arr


def log_likelihood(eps, noise: ResidualNoiseModel):
    """Diagonal-Gaussian log-likelihood, computed entirely in log space.

    ln L = -(N_o/2) ln(2 pi) - sum ln sigma_j - (1/2) sum (eps_j / sigma_j)^2

    Accepts a single residual vector or a batch (n_models, N_o); returns a
    scalar or a vector of log-likelihoods accordingly.
    """
    eps = np.asarray(eps, dtype=float)
    if not np.all(np.isfinite(eps)):
        raise ValueError("residuals contain non-finite entries")
    n_obs = eps.shape[-1]
    sigma = noise.sigma_vector(n_obs)
    quad = np.sum((eps / sigma) ** 2, axis=-1)
    out = -0.5 * n_obs * _LOG_2PI - np.sum(np.log(sigma)) - 0.5 * quad
    return float(out) if eps.ndim == 1 else out


def p_values(eps, noise: ResidualNoiseModel) -> np.ndarray:
    """Two-sided Gaussian p-values: p_j = 2 min(Phi(x_j), 1 - Phi(x_j)).

    Computed as erfc(|eps_j| / (sigma_j sqrt(2))), which is exactly symmetric
    in the sign of the residual.
    """
    eps = np.asarray(eps, dtype=float)
    sigma = noise.sigma_vector(eps.shape[-1])
    return erfc(np.abs(eps) / (sigma * _SQRT2))


def bh_levels(config: FdrConfig, n_obs: int) -> np.ndarray:
    """Rank-wise significance levels alpha_i = (i / N_o) alpha, i = 1..N_o."""
    return np.arange(1, n_obs + 1) / n_obs * config.alpha


def bh_quantiles(config: FdrConfig, n_obs: int) -> np.ndarray:
    """Standard-normal upper bounds q_i with P(|E| >= q_i) = alpha_i.

    q_i = Phi^{-1}(1 - alpha_i / 2) = sqrt(2) erfcinv(alpha_i); strictly
    decreasing in rank i.
    """
    return _SQRT2 * erfcinv(bh_levels(config, n_obs))


def bh_error_bounds(noise: ResidualNoiseModel, config: FdrConfig,
                    n_obs: int) -> np.ndarray:
    """Symmetric residual error bounds [lower_i, upper_i] in BH rank order.

    Defined for the shared-sigma noise model, where the bounds are the same
    whichever entry lands at rank i.  Shape (N_o, 2).
    """
    if noise.kind != "diagonal_iid":
        raise ValueError("rank-ordered error bounds require a shared residual sigma; "
                         "per-channel bounds depend on the rank assignment")
    upper = noise.std_devs[0] * bh_quantiles(config, n_obs)
    return np.column_stack([-upper, upper])


@lru_cache(maxsize=256)
def _cached_log_bound(std_devs: tuple, alpha: float, n_obs: int) -> float:
    noise = ResidualNoiseModel(std_devs)
    q = bh_quantiles(FdrConfig(alpha), n_obs)
    sigma = noise.sigma_vector(n_obs)
    # min density over [-upper_i, upper_i] is attained at the endpoints:
    # sigma_j^{-1} phi(q_i).  The 1/sigma_j factors run over all entries and
    # the phi(q_i) factors over all ranks, so the product is independent of
    # which entry receives which rank.
    return float(-0.5 * n_obs * _LOG_2PI - np.sum(np.log(sigma)) - 0.5 * np.sum(q**2))


def likelihood_bound(noise: ResidualNoiseModel, config: FdrConfig, n_obs: int,
                     eps=None) -> float:
    """Log of the likelihood lower bound for ensembles of ``n_obs`` residuals.

    Sorting residuals by ascending p-value assigns rank-i bounds from the BH
    levels; each factor is the minimum Gaussian density over its interval,
    attained at the endpoint.  The result does not depend on the particular
    residual vector (``eps`` is accepted for signature symmetry but only its
    length is used), so the value is cached per (noise, alpha, N_o).
    """
    if eps is not None:
        eps = np.asarray(eps, dtype=float)
        n_obs = eps.shape[-1]
    return _cached_log_bound(noise.std_devs, config.alpha, int(n_obs))


def measurement_rejections(eps, noise: ResidualNoiseModel, config: FdrConfig) -> int:
    """Number of residual entries outside their rank-assigned BH bounds.

    Diagnostic count N_r: entry at p-value rank i is rejected when its
    p-value is at most alpha_i = (i / N_o) alpha.
    """
    eps = np.asarray(eps, dtype=float)
    p_sorted = np.sort(p_values(eps, noise))
    return int(np.sum(p_sorted <= bh_levels(config, eps.size)))


def falsify(class_id: str, eps_matrix, noise: ResidualNoiseModel,
            config: FdrConfig, count_rejections: bool = False) -> list[FalsificationVerdict]:
    """Score one class's residual matrix (n_models, N_o) into verdicts."""
    eps_matrix = np.asarray(eps_matrix, dtype=float)
    if eps_matrix.ndim != 2:
        raise ValueError("expected a residual matrix of shape (n_models, N_o)")
    n_obs = eps_matrix.shape[1]
    log_l = log_likelihood(eps_matrix, noise)
    log_b = likelihood_bound(noise, config, n_obs)
    verdicts = []
    for i in range(eps_matrix.shape[0]):
        n_r = measurement_rejections(eps_matrix[i], noise, config) if count_rejections else 0
        verdicts.append(FalsificationVerdict(
            class_id=class_id, sample_index=i,
            log_likelihood=float(log_l[i]), log_bound=log_b, rejected_count=n_r))
    return verdicts


def falsify_classes(eps_by_class: dict[str, np.ndarray], noise: ResidualNoiseModel,
                    config: FdrConfig, count_rejections: bool = False) -> FalsificationReport:
    """Falsify every class against one measurement set."""
    verdicts = {cid: falsify(cid, eps, noise, config, count_rejections)
                for cid, eps in eps_by_class.items()}
    return FalsificationReport(verdicts=verdicts, noise=noise, config=config)
