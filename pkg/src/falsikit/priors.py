"""Prior distributions and deterministic candidate-model ensembles.

A model class is a family of governing equations with a fixed set of
uncertain parameters; a candidate model is one draw of the parameter
vector from the class priors.  Ensembles are generated with per-sample
seeds derived from (master_seed, class_id, sample_index), so the same
spec always yields bit-identical samples no matter how the generation
is parallelized or ordered.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PriorSpec",
    "ModelClassSpec",
    "ModelSample",
    "EnsembleSpec",
    "SamplingError",
    "sample_prior",
    "sample_rng",
    "generate_ensemble",
]

PRIOR_KINDS = ("normal", "lognormal", "uniform")

_SQRT3 = np.sqrt(3.0)

# cap on redraws for positivity-constrained normal priors
_MAX_REDRAWS = 1000


class SamplingError(RuntimeError):
    """Raised when a prior draw cannot be produced (overflow, exhausted redraws)."""


@dataclass(frozen=True)
class PriorSpec:
    """One marginal prior, parameterized by the variate's mean and standard deviation.

    ``lognormal`` is moment-matched: the requested mean/std are those of the
    positive variate itself, not of its logarithm.  The log-space parameters
    are ``sigma_log**2 = ln(1 + (std/mean)**2)`` and
    ``mu_log = ln(mean) - sigma_log**2 / 2``.

    ``uniform`` with mean m and std s spans ``[m - s*sqrt(3), m + s*sqrt(3)]``.

    ``positive_only`` applies to ``normal`` priors whose parameter must stay
    positive (e.g. a yield force): non-positive draws are rejected and redrawn.
    """

    kind: str
    mean: float
    std_dev: float
    positive_only: bool = False

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise ValueError(f"unknown prior kind {self.kind!r}; expected one of {PRIOR_KINDS}")
        if not np.isfinite(self.mean):
            raise ValueError("prior mean must be finite")
        if not (np.isfinite(self.std_dev) and self.std_dev > 0.0):
            raise ValueError(f"prior std_dev must be > 0, got {self.std_dev}")
        if self.kind == "lognormal" and self.mean <= 0.0:
            raise ValueError("lognormal prior requires mean > 0")
        if self.positive_only and self.kind != "normal":
            raise ValueError("positive_only only applies to normal priors")

    @property
    def support(self) -> tuple[float, float]:
        """Closed support interval of the prior (infinite endpoints for normal)."""
        if self.kind == "uniform":
            half = self.std_dev * _SQRT3
            return (self.mean - half, self.mean + half)
        if self.kind == "lognormal" or self.positive_only:
            return (0.0, np.inf)
        return (-np.inf, np.inf)

    def contains(self, value: float) -> bool:
        lo, hi = self.support
        open_left = self.kind == "lognormal" or self.positive_only
        return (value > lo if open_left else value >= lo) and value <= hi

    def log_pdf(self, value):
        """Log prior density, elementwise over ``value``."""
        value = np.asarray(value, dtype=float)
        if self.kind == "normal":
            out = -0.5 * np.log(2.0 * np.pi) - np.log(self.std_dev) \
                - 0.5 * ((value - self.mean) / self.std_dev) ** 2
            if self.positive_only:
                # renormalization over the positive half-line is a constant
                # factor shared by all samples; omitted since weights are
                # normalized downstream anyway
                out = np.where(value > 0.0, out, -np.inf)
            return out
        if self.kind == "lognormal":
            sig2 = np.log1p((self.std_dev / self.mean) ** 2)
            mu = np.log(self.mean) - 0.5 * sig2
            with np.errstate(divide="ignore", invalid="ignore"):
                lv = np.where(value > 0.0, np.log(np.where(value > 0.0, value, 1.0)), np.nan)
                out = -0.5 * np.log(2.0 * np.pi * sig2) - lv - 0.5 * (lv - mu) ** 2 / sig2
            return np.where(value > 0.0, out, -np.inf)
        lo, hi = self.support
        inside = (value >= lo) & (value <= hi)
        return np.where(inside, -np.log(hi - lo), -np.inf)


def sample_prior(spec: PriorSpec, rng: np.random.Generator, name: str = "parameter") -> float:
    """Draw one value from ``spec`` using ``rng``.

    Each call consumes a deterministic number of generator outputs, except
    for rejection-redraws of positivity-constrained normal priors.
    """
    if spec.kind == "uniform":
        half = spec.std_dev * _SQRT3
        value = rng.uniform(spec.mean - half, spec.mean + half)
    elif spec.kind == "lognormal":
        sig2 = np.log1p((spec.std_dev / spec.mean) ** 2)
        mu = np.log(spec.mean) - 0.5 * sig2
        value = float(np.exp(rng.normal(mu, np.sqrt(sig2))))
    else:
        value = float(rng.normal(spec.mean, spec.std_dev))
        if spec.positive_only:
            n = 0
            while value <= 0.0:
                n += 1
                if n > _MAX_REDRAWS:
                    raise SamplingError(
                        f"could not draw a positive value for {name!r} "
                        f"(normal mean={spec.mean}, std={spec.std_dev})")
                value = float(rng.normal(spec.mean, spec.std_dev))
    if not np.isfinite(value):
        raise SamplingError(f"non-finite draw for {name!r} from {spec.kind} prior")
    return value


@dataclass(frozen=True)
class ModelClassSpec:
    """A named model class: ordered parameters, their priors, and the physics they feed."""

    class_id: str
    parameter_names: tuple[str, ...]
    priors: tuple[PriorSpec, ...]
    physics_binding: str
    fixed_constants: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "parameter_names", tuple(self.parameter_names))
        object.__setattr__(self, "priors", tuple(self.priors))
        if len(set(self.parameter_names)) != len(self.parameter_names):
            raise ValueError(f"duplicate parameter names in class {self.class_id!r}")
        if len(self.priors) != len(self.parameter_names):
            raise ValueError(
                f"class {self.class_id!r}: {len(self.parameter_names)} parameter names "
                f"but {len(self.priors)} priors")

    @property
    def n_parameters(self) -> int:
        return len(self.parameter_names)

    def log_prior(self, theta) -> float:
        """Joint log prior density of one parameter vector (independent marginals)."""
        theta = np.asarray(theta, dtype=float)
        return float(sum(p.log_pdf(t) for p, t in zip(self.priors, theta)))


@dataclass(frozen=True)
class ModelSample:
    """One candidate model: a parameter draw from its class's priors."""

    class_id: str
    theta: tuple[float, ...]
    sample_index: int

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        if self.sample_index < 0:
            raise ValueError("sample_index must be >= 0")


@dataclass(frozen=True)
class EnsembleSpec:
    """Recipe for a reproducible ensemble: classes, size per class, master seed."""

    class_specs: tuple[ModelClassSpec, ...]
    samples_per_class: int
    master_seed: int

    def __post_init__(self):
        object.__setattr__(self, "class_specs", tuple(self.class_specs))
        if self.samples_per_class < 1:
            raise ValueError("samples_per_class must be >= 1")
        ids = [c.class_id for c in self.class_specs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate class_id in ensemble spec")


def _class_key(class_id: str) -> int:
    # stable 64-bit key, independent of PYTHONHASHSEED
    digest = hashlib.sha256(class_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def sample_rng(master_seed: int, class_id: str, sample_index: int) -> np.random.Generator:
    """Generator for one (class, sample) slot, a pure function of its arguments."""
    seq = np.random.SeedSequence([master_seed, _class_key(class_id), sample_index])
    return np.random.default_rng(seq)


def draw_sample(class_spec: ModelClassSpec, master_seed: int, sample_index: int) -> ModelSample:
    """Draw a single ModelSample; independent of any other sample's draws."""
    rng = sample_rng(master_seed, class_spec.class_id, sample_index)
    theta = []
    for name, prior in zip(class_spec.parameter_names, class_spec.priors):
        try:
            theta.append(sample_prior(prior, rng, name=name))
        except SamplingError as err:
            raise SamplingError(
                f"class {class_spec.class_id!r}, sample {sample_index}: {err}") from err
    return ModelSample(class_spec.class_id, tuple(theta), sample_index)


def generate_ensemble(spec: EnsembleSpec) -> dict[str, list[ModelSample]]:
    """Generate ``samples_per_class`` models for every class in ``spec``.

    Returns a mapping class_id -> list of ModelSample ordered by sample_index.
    Deterministic: the same spec yields bit-identical ensembles.
    """
    out: dict[str, list[ModelSample]] = {}
    for class_spec in spec.class_specs:
        out[class_spec.class_id] = [
            draw_sample(class_spec, spec.master_seed, i)
            for i in range(spec.samples_per_class)
        ]
    return out


def theta_matrix(samples: list[ModelSample]) -> np.ndarray:
    """Stack sample parameter vectors into an (n_samples, n_parameters) array."""
    return np.array([s.theta for s in samples], dtype=float)
