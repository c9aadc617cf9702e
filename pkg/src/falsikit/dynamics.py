"""Lumped-mass structural models with nonlinear isolation and damping devices.

Everything here works in SI internally (kg, N, m, s); the public parameter
objects accept the conventional engineering units noted on their fields
(Mg, MN/m, kN.s/m, yield force as a percentage of structure weight).

Simulation is fixed-step explicit RK4 for bit-reproducibility, vectorized
over a batch of candidate models: the state array has shape
(n_models, n_states) and all parameter arrays broadcast over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.signal
from scipy.constants import g as GRAVITY

from .falsification import MeasurementSet

__all__ = [
    "ExcitationRecord",
    "SimulationOutput",
    "ShearBuildingModel",
    "IsolatorParams",
    "IsolatedSystem",
    "TmdParams",
    "TmdFrameModel",
    "TmdFrameSystem",
    "BiaxialDeviceParams",
    "SimulationDivergedError",
    "boucwen_rate",
    "equivalent_linear_params",
    "tmd_force",
    "biaxial_hysteresis_rates",
    "biaxial_device_force",
    "assemble_isolated_system",
    "integrate_rk4",
    "simulate",
    "simulate_batch",
    "add_measurement_noise",
    "band_limited_record",
]

MG = 1.0e3          # Mg -> kg
MN_PER_M = 1.0e6    # MN/m -> N/m
KN = 1.0e3          # kN -> N

NONLINEAR_VARIANTS = ("boucwen", "bilinear")
LINEAR_VARIANTS = ("aashto", "jpwri", "modified_aashto", "caltrans")

_STATE_GUARD = 1.0e6  # any |state| beyond this is treated as divergence


class SimulationDivergedError(RuntimeError):
    def __init__(self, t, indices=None):
        self.time = t
        self.indices = indices
        msg = f"simulation diverged at t = {t:.4f} s"
        if indices is not None and len(indices):
            msg += f" (models {list(indices)})"
        super().__init__(msg)


# ---------------------------------------------------------------------------
# excitation and output containers

@dataclass(frozen=True)
class ExcitationRecord:
    """Sampled excitation: ground acceleration [m/s^2] or force [N].

    ``samples`` has shape (n,) for one channel or (n, 2) for biaxial records.
    """

    dt: float
    samples: np.ndarray
    label: str = ""
    channel_count: int = 1

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if self.dt <= 0.0:
            raise ValueError("excitation dt must be > 0")
        if not np.all(np.isfinite(samples)):
            raise ValueError(f"excitation {self.label!r} contains non-finite samples")
        if self.channel_count not in (1, 2):
            raise ValueError("channel_count must be 1 or 2")
        if self.channel_count == 1 and samples.ndim != 1:
            raise ValueError("single-channel excitation must be a 1-d sample array")
        if self.channel_count == 2 and (samples.ndim != 2 or samples.shape[1] != 2):
            raise ValueError("biaxial excitation must have shape (n, 2)")
        object.__setattr__(self, "samples", samples)

    @property
    def n_steps(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt

    def truncated(self, duration: float) -> "ExcitationRecord":
        n = int(round(duration / self.dt))
        if n > self.n_steps:
            raise ValueError("requested duration exceeds record length")
        return ExcitationRecord(self.dt, self.samples[:n], self.label, self.channel_count)


@dataclass(frozen=True)
class SimulationOutput:
    """Model outputs stacked time-major: [y(0), y(dt), ...] with channels interleaved."""

    dt: float
    values: np.ndarray
    channel_names: tuple[str, ...] = ("output",)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("SimulationOutput values must be a stacked 1-d vector")
        if values.size % len(self.channel_names) != 0:
            raise ValueError("stacked length must be a multiple of the channel count")
        if not np.all(np.isfinite(values)):
            raise ValueError("simulation output contains non-finite values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def n_channels(self) -> int:
        return len(self.channel_names)

    @property
    def n_samples(self) -> int:
        return self.values.size // self.n_channels

    def by_channel(self) -> np.ndarray:
        """De-interleave into shape (n_samples, n_channels)."""
        return self.values.reshape(self.n_samples, self.n_channels)


# ---------------------------------------------------------------------------
# superstructure

@dataclass(frozen=True)
class ShearBuildingModel:
    """Planar shear building: lumped story masses over a rigid base mass.

    Masses in Mg, stiffnesses in MN/m.  Rayleigh damping is calibrated so
    the two ``damping_modes`` (1-based, of the fixed-base superstructure)
    have the given damping ratio.
    """

    story_masses: tuple[float, ...]
    story_stiffnesses: tuple[float, ...]
    base_mass: float
    damping_ratio: float = 0.03
    damping_modes: tuple[int, int] = (1, 2)

    def __post_init__(self):
        object.__setattr__(self, "story_masses", tuple(float(m) for m in self.story_masses))
        object.__setattr__(self, "story_stiffnesses", tuple(float(k) for k in self.story_stiffnesses))
        if len(self.story_masses) != len(self.story_stiffnesses):
            raise ValueError("need one stiffness per story")
        if any(m <= 0 for m in self.story_masses) or any(k <= 0 for k in self.story_stiffnesses):
            raise ValueError("story masses and stiffnesses must be > 0")
        if self.base_mass <= 0:
            raise ValueError("base mass must be > 0")
        i, j = self.damping_modes
        if not (1 <= i < j <= len(self.story_masses)):
            raise ValueError("damping_modes must be two distinct 1-based mode numbers")

    @property
    def n_stories(self) -> int:
        return len(self.story_masses)

    @property
    def weight(self) -> float:
        """Total isolated weight W [N] = g * (base + stories)."""
        return GRAVITY * MG * (self.base_mass + sum(self.story_masses))

    @property
    def total_mass(self) -> float:
        """Total isolated mass [kg]."""
        return MG * (self.base_mass + sum(self.story_masses))

    def mass_matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.story_masses) * MG)

    def stiffness_matrix(self) -> np.ndarray:
        k = np.asarray(self.story_stiffnesses) * MN_PER_M
        n = self.n_stories
        K = np.zeros((n, n))
        for i in range(n):
            K[i, i] += k[i]
            if i + 1 < n:
                K[i, i] += k[i + 1]
                K[i, i + 1] -= k[i + 1]
                K[i + 1, i] -= k[i + 1]
        return K

    def fixed_base_frequencies(self) -> np.ndarray:
        """Fixed-base natural circular frequencies [rad/s], ascending."""
        lam = scipy.linalg.eigh(self.stiffness_matrix(), self.mass_matrix(),
                                eigvals_only=True)
        return np.sqrt(np.clip(lam, 0.0, None))

    def rayleigh_coefficients(self) -> tuple[float, float]:
        """Mass- and stiffness-proportional coefficients (a0, a1) for C = a0 M + a1 K."""
        omega = self.fixed_base_frequencies()
        wi = omega[self.damping_modes[0] - 1]
        wj = omega[self.damping_modes[1] - 1]
        # zeta = (a0 / w + a1 * w) / 2 at both target modes
        A = 0.5 * np.array([[1.0 / wi, wi], [1.0 / wj, wj]])
        a0, a1 = np.linalg.solve(A, [self.damping_ratio, self.damping_ratio])
        return float(a0), float(a1)

    def damping_matrix(self) -> np.ndarray:
        a0, a1 = self.rayleigh_coefficients()
        return a0 * self.mass_matrix() + a1 * self.stiffness_matrix()


# ---------------------------------------------------------------------------
# isolator force laws

@dataclass(frozen=True)
class IsolatorParams:
    """Isolation-layer parameters for one model class variant.

    k_post in MN/m, c_b in kN.s/m, Q_y as a percentage of the structure
    weight W (nonlinear variants), r_d the shear ductility ratio (linear
    variants).  k_pre = k_post / r_k; yield displacement x_y = Q_y / k_pre.
    """

    variant: str
    k_post: float
    c_b: float
    r_k: float
    Q_y: float | None = None
    r_d: float | None = None
    n_pow: float | None = None

    def __post_init__(self):
        if self.variant not in NONLINEAR_VARIANTS + LINEAR_VARIANTS:
            raise ValueError(f"unknown isolator variant {self.variant!r}")
        if not (0.0 < self.r_k < 1.0):
            raise ValueError("r_k must lie in (0, 1)")
        if self.k_post <= 0.0 or self.c_b < 0.0:
            raise ValueError("k_post must be > 0 and c_b >= 0")
        if self.is_nonlinear:
            if self.Q_y is None or self.Q_y <= 0.0:
                raise ValueError(f"{self.variant} isolator requires Q_y > 0")
            if self.n_pow is None:
                object.__setattr__(self, "n_pow", 1.0 if self.variant == "boucwen" else 100.0)
        else:
            if self.r_d is None or self.r_d <= 1.0:
                raise ValueError(f"{self.variant} isolator requires r_d > 1")

    @property
    def is_nonlinear(self) -> bool:
        return self.variant in NONLINEAR_VARIANTS

    @property
    def k_pre(self) -> float:
        return self.k_post / self.r_k


def boucwen_rate(z, v, a, beta, gamma, n_pow):
    """Rate of the hysteretic evolutionary variable.

    dz/dt = a*v - beta*v*|z|**n - gamma*z*|v|*|z|**(n-1)

    With a = 2*beta = 2*gamma the loading and unloading stiffnesses match and
    |z| saturates at 1.  For numerical robustness |z| is clipped at the
    saturation amplitude (a / (beta + gamma))**(1/n) before exponentiation,
    which prevents overflow of |z|**n for large exponents (bilinear limit,
    n = 100) without altering the in-range dynamics.
    """
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(v))):
        raise ValueError("non-finite hysteretic state or velocity")
    n = np.asarray(n_pow, dtype=float)
    if np.any(n < 1.0):
        raise ValueError("n_pow must be >= 1")
    denom = np.asarray(beta, dtype=float) + np.asarray(gamma, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        z_max = np.where(denom > 0.0, np.power(np.where(denom > 0.0, a / np.maximum(denom, 1e-300), 1.0), 1.0 / n), np.inf)
    az = np.minimum(np.abs(z), z_max)
    pow_n = np.power(az, n)
    pow_nm1 = np.power(az, n - 1.0)
    return a * v - beta * v * pow_n - gamma * z * np.abs(v) * pow_nm1


def equivalent_linear_params(variant: str, r_k: float, r_d, k_pre):
    """Code-specified equivalent damping ratio and stiffness.

    AASHTO and JPWRI share one family with effective ductility rho = r_d and
    rho = 0.7 r_d respectively; modified AASHTO applies correction factors
    r_d**0.58 / (6 - 10 r_k) to zeta_eq and [1 - 0.737 (r_d-1)/r_d**2]**(-2)
    to k_eq; Caltrans has its own closed forms.  Returns (zeta_eq, k_eq)
    with k_eq in the units of ``k_pre``.  Broadcasts over r_d / k_pre.
    """
    if variant not in LINEAR_VARIANTS:
        raise ValueError(f"{variant!r} is not a linear isolator variant")
    if not (0.0 < r_k < 1.0):
        raise ValueError("r_k must lie in (0, 1)")
    r_d = np.asarray(r_d, dtype=float)
    k_pre = np.asarray(k_pre, dtype=float)
    if np.any(r_d <= 1.0):
        raise ValueError(f"{variant}: shear ductility ratio r_d must be > 1")

    if variant == "caltrans":
        zeta = 0.0587 * np.power(r_d - 1.0, 0.371)
        k_eq = k_pre / (1.0 + np.log(1.0 + 0.13 * np.power(r_d - 1.0, 1.137))) ** 2
        return zeta, k_eq

    rho = r_d if variant in ("aashto", "modified_aashto") else 0.7 * r_d
    if np.any(rho <= 1.0):
        raise ValueError(f"{variant}: effective ductility rho = {np.min(rho):.4g} <= 1")
    zeta = 2.0 * (1.0 - r_k) * (1.0 - 1.0 / rho) / (np.pi * (1.0 + r_k * (rho - 1.0)))
    k_eq = k_pre / rho * (1.0 + r_k * (rho - 1.0))
    if variant == "modified_aashto":
        zeta = zeta * np.power(r_d, 0.58) / (6.0 - 10.0 * r_k)
        k_eq = k_eq * (1.0 - 0.737 * (r_d - 1.0) / r_d**2) ** (-2.0)
    return zeta, k_eq


# ---------------------------------------------------------------------------
# coupled isolated system (batched over candidate models)

class IsolatedSystem:
    """Shear building on an isolation layer, batched over candidate models.

    State layout per model: [X_s (ns), x_b, V_s (ns), v_b] plus a trailing
    z for hysteretic variants.  All isolator parameter arrays broadcast over
    the batch.  Output is the base absolute acceleration [m/s^2].
    """

    channel_names = ("base_abs_accel",)

    def __init__(self, building: ShearBuildingModel, variant: str, *,
                 k_post, c_b, r_k, Q_y=None, r_d=None, n_pow=None):
        if variant not in NONLINEAR_VARIANTS + LINEAR_VARIANTS:
            raise ValueError(f"unknown isolator variant {variant!r}")
        self.building = building
        self.variant = variant
        self.nonlinear = variant in NONLINEAR_VARIANTS

        self.Ms_diag = np.asarray(building.story_masses) * MG
        self.Ks = building.stiffness_matrix()
        self.Cs = building.damping_matrix()
        self.mb = building.base_mass * MG
        self.colK = self.Ks.sum(axis=0)     # K_s 1 (= 1^T K_s by symmetry)
        self.colC = self.Cs.sum(axis=0)
        self.oKo = float(self.colK.sum())   # 1^T K_s 1
        self.oCo = float(self.colC.sum())

        k_post = np.atleast_1d(np.asarray(k_post, dtype=float))
        c_b = np.atleast_1d(np.asarray(c_b, dtype=float))
        r_k = np.atleast_1d(np.asarray(r_k, dtype=float))
        if np.any((r_k <= 0.0) | (r_k >= 1.0)):
            raise ValueError("r_k must lie in (0, 1)")
        self.n_models = int(np.broadcast_shapes(k_post.shape, c_b.shape, r_k.shape)[0])
        self.cb = c_b * KN                       # N.s/m
        k_post_si = k_post * MN_PER_M
        k_pre_si = k_post_si / r_k

        if self.nonlinear:
            if Q_y is None:
                raise ValueError("nonlinear variant requires Q_y [%W]")
            Q_y = np.atleast_1d(np.asarray(Q_y, dtype=float))
            if np.any(Q_y <= 0.0):
                raise ValueError("Q_y must be > 0")
            Qy_si = Q_y / 100.0 * building.weight    # N
            self.k_post_si = k_post_si
            self.qy = Qy_si * (1.0 - r_k)            # N
            self.bw_a = k_pre_si / Qy_si             # 1/m
            self.bw_beta = 0.5 * self.bw_a
            self.bw_gamma = 0.5 * self.bw_a
            if n_pow is None:
                n_pow = 1.0 if variant == "boucwen" else 100.0
            self.n_pow = np.atleast_1d(np.asarray(n_pow, dtype=float))
            self.x_y = Qy_si / k_pre_si              # m (diagnostic)
        else:
            if r_d is None:
                raise ValueError("linear variant requires r_d")
            r_d = np.atleast_1d(np.asarray(r_d, dtype=float))
            zeta_eq, k_eq_si = _equivalent_linear_batch(variant, r_k, r_d, k_pre_si)
            # c_eq = 2 zeta_eq sqrt(k_eq m) with m the total isolated mass
            self.k_eq = k_eq_si
            self.c_eq = 2.0 * zeta_eq * np.sqrt(k_eq_si * building.total_mass)

        self.ns = building.n_stories
        self.n_states = 2 * (self.ns + 1) + (1 if self.nonlinear else 0)

    def initial_state(self) -> np.ndarray:
        return np.zeros((self.n_models, self.n_states))

    def rhs(self, state: np.ndarray, ag: float) -> np.ndarray:
        ns = self.ns
        Xs = state[:, :ns]
        xb = state[:, ns]
        Vs = state[:, ns + 1:2 * ns + 1]
        vb = state[:, 2 * ns + 1]

        acc_s = (-Vs @ self.Cs.T - Xs @ self.Ks.T
                 - self.Ms_diag * ag
                 + np.outer(vb, self.colC) + np.outer(xb, self.colK)) / self.Ms_diag

        if self.nonlinear:
            z = state[:, -1]
            f_b = self.cb * vb + self.k_post_si * xb + self.qy * z
        else:
            f_b = (self.cb + self.c_eq) * vb + self.k_eq * xb

        acc_b = (-f_b - self.oCo * vb - self.oKo * xb
                 + Vs @ self.colC + Xs @ self.colK) / self.mb - ag

        deriv = np.empty_like(state)
        deriv[:, :ns] = Vs
        deriv[:, ns] = vb
        deriv[:, ns + 1:2 * ns + 1] = acc_s
        deriv[:, 2 * ns + 1] = acc_b
        if self.nonlinear:
            deriv[:, -1] = boucwen_rate(z, vb, self.bw_a, self.bw_beta,
                                        self.bw_gamma, self.n_pow)
        return deriv

    def output(self, state: np.ndarray, ag: float) -> np.ndarray:
        """Base absolute acceleration, shape (n_models, 1)."""
        deriv = self.rhs(state, ag)
        return (deriv[:, 2 * self.ns + 1] + ag)[:, None]


def _equivalent_linear_batch(variant, r_k, r_d, k_pre):
    """Per-model equivalent-linear parameters when r_k varies over the batch."""
    r_k = np.asarray(r_k, dtype=float)
    r_d = np.asarray(r_d, dtype=float)
    k_pre = np.asarray(k_pre, dtype=float)
    if np.any(r_d <= 1.0):
        raise ValueError(f"{variant}: shear ductility ratio r_d must be > 1")
    if variant == "caltrans":
        zeta = 0.0587 * np.power(r_d - 1.0, 0.371)
        k_eq = k_pre / (1.0 + np.log(1.0 + 0.13 * np.power(r_d - 1.0, 1.137))) ** 2
        return zeta, k_eq
    rho = r_d if variant in ("aashto", "modified_aashto") else 0.7 * r_d
    if np.any(rho <= 1.0):
        raise ValueError(f"{variant}: effective ductility rho <= 1")
    zeta = 2.0 * (1.0 - r_k) * (1.0 - 1.0 / rho) / (np.pi * (1.0 + r_k * (rho - 1.0)))
    k_eq = k_pre / rho * (1.0 + r_k * (rho - 1.0))
    if variant == "modified_aashto":
        zeta = zeta * np.power(r_d, 0.58) / (6.0 - 10.0 * r_k)
        k_eq = k_eq * (1.0 - 0.737 * (r_d - 1.0) / r_d**2) ** (-2.0)
    return zeta, k_eq


def assemble_isolated_system(building: ShearBuildingModel,
                             isolator: IsolatorParams) -> IsolatedSystem:
    """Couple the superstructure with one isolator model (batch of one)."""
    return IsolatedSystem(
        building, isolator.variant,
        k_post=isolator.k_post, c_b=isolator.c_b, r_k=isolator.r_k,
        Q_y=isolator.Q_y, r_d=isolator.r_d, n_pow=isolator.n_pow)


# ---------------------------------------------------------------------------
# fixed-step RK4 with zero-order-hold excitation

def integrate_rk4(system, excitation: ExcitationRecord, dt_int: float | None = None,
                  duration: float | None = None) -> np.ndarray:
    """Integrate ``system`` under ``excitation`` and collect its outputs.

    The excitation is held constant over integrator substeps within each
    record interval (zero-order hold).  Outputs are sampled at the record
    dt, at times 0, dt, ..., (n-1) dt.  Returns an array of shape
    (n_models, n_samples * n_channels) with channels interleaved time-major.
    """
    record = excitation if duration is None else excitation.truncated(duration)
    dt = record.dt
    if dt_int is None:
        dt_int = dt / 10.0
    if dt_int <= 0.0:
        raise ValueError("dt_int must be > 0")
    n_sub = max(1, int(round(dt / dt_int)))
    h = dt / n_sub

    state = system.initial_state()
    n_steps = record.n_steps
    outputs = []
    for k in range(n_steps):
        ag = record.samples[k]
        outputs.append(system.output(state, ag))
        for _ in range(n_sub):
            k1 = system.rhs(state, ag)
            k2 = system.rhs(state + 0.5 * h * k1, ag)
            k3 = system.rhs(state + 0.5 * h * k2, ag)
            k4 = system.rhs(state + h * k3, ag)
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        bad = ~np.all(np.isfinite(state), axis=1) | (np.abs(state).max(axis=1) > _STATE_GUARD)
        if np.any(bad):
            raise SimulationDivergedError((k + 1) * dt, np.nonzero(bad)[0])
    # (n_steps, n_models, n_channels) -> (n_models, n_steps * n_channels)
    stacked = np.stack(outputs, axis=1)
    return stacked.reshape(stacked.shape[0], -1)


def simulate_batch(system, excitation: ExcitationRecord, dt_int: float | None = None,
                   duration: float | None = None) -> np.ndarray:
    """Stacked output vectors for every model in the batch, shape (n_models, N_o)."""
    return integrate_rk4(system, excitation, dt_int=dt_int, duration=duration)


def simulate(system, excitation: ExcitationRecord, dt_int: float | None = None,
             duration: float | None = None) -> SimulationOutput:
    """Simulate a single-model system and return its stacked output vector."""
    h = integrate_rk4(system, excitation, dt_int=dt_int, duration=duration)
    if h.shape[0] != 1:
        raise ValueError("simulate() expects a batch of one model; use simulate_batch")
    return SimulationOutput(excitation.dt, h[0], tuple(system.channel_names))


def add_measurement_noise(clean: SimulationOutput, noise_fraction: float,
                          rng: np.random.Generator) -> MeasurementSet:
    """Add i.i.d. zero-mean Gaussian noise, per channel, scaled to the channel std."""
    if noise_fraction < 0.0:
        raise ValueError("noise_fraction must be >= 0")
    per_channel = clean.by_channel()
    stds = per_channel.std(axis=0)
    noise = rng.standard_normal(per_channel.shape) * (noise_fraction * stds)
    noisy = (per_channel + noise).reshape(-1)
    return MeasurementSet(d=noisy, dt=clean.dt, channel_names=clean.channel_names)


# ---------------------------------------------------------------------------
# TMD-equipped frame (reduced-scale wind example)

TMD_LAWS = ("linear", "cubic", "boucwen", "power_law_truth")


@dataclass(frozen=True)
class TmdParams:
    """Damping-device law for one TMD direction.

    linear:          f = c1 * du            (c1 in kN.s/m)
    cubic:           f = c3 * du^3 + c1 * du
    boucwen:         f = q_y z + k_post u,  k_pre fixed, n_pow = 1,
                     Q_y as a percentage of the TMD weight
    power_law_truth: f = coef |du|^0.8 sgn(du) + c_lin du
    """

    law: str
    c1: float = 0.0
    c3: float = 0.0
    r_k: float = 0.0
    Q_y: float = 0.0
    k_pre: float = 0.0
    power_coef: float = 0.0
    power_lin: float = 0.0

    def __post_init__(self):
        if self.law not in TMD_LAWS:
            raise ValueError(f"unknown TMD damping law {self.law!r}")
        if self.law == "boucwen":
            if not (0.0 < self.r_k < 1.0):
                raise ValueError("boucwen TMD requires r_k in (0, 1)")
            if self.Q_y <= 0.0 or self.k_pre <= 0.0:
                raise ValueError("boucwen TMD requires Q_y > 0 and fixed k_pre > 0")


def tmd_force(law: str, du, u=0.0, *, c1=0.0, c3=0.0, q_y=0.0, k_post=0.0,
              z=0.0, power_coef=0.0, power_lin=0.0):
    """Damping-device force [N] for SI inputs; broadcasts over the batch.

    ``q_y``, ``k_post``, ``z`` only apply to the hysteretic law, whose state
    z must be integrated alongside the structural state.
    """
    du = np.asarray(du, dtype=float)
    if law == "linear":
        return c1 * du
    if law == "cubic":
        return c3 * du**3 + c1 * du
    if law == "boucwen":
        return q_y * np.asarray(z, dtype=float) + k_post * np.asarray(u, dtype=float)
    if law == "power_law_truth":
        return power_coef * np.abs(du) ** 0.8 * np.sign(du) + power_lin * du
    raise ValueError(f"unknown TMD damping law {law!r}")


@dataclass(frozen=True)
class TmdFrameModel:
    """Reduced planar-pair frame: one shear chain per horizontal direction.

    Each chain has ``n_stories`` equal lumped masses; story stiffness is
    chosen so the fixed-base fundamental frequency matches the target.
    One TMD rides the x roof, two the y roof, spring-tuned to the chain's
    fundamental mode.  Wind is a single scalar force record shaped over
    height as (h_i / h_roof)**0.3 and split between directions by the
    attack angle.
    """

    n_stories: int = 20
    story_mass: float = 1000.0          # Mg
    f1_x: float = 0.5893                # Hz
    f1_y: float = 0.5718                # Hz
    tmd_mass_fraction_x: float = 0.011
    tmd_mass_fraction_y: float = 0.0055
    damping_ratio: float = 0.02
    wind_angle_deg: float = 30.0

    def chain_stiffness(self, f1: float) -> float:
        """Uniform story stiffness [MN/m] putting the chain's first mode at f1 [Hz]."""
        n = self.n_stories
        # first eigenvalue of the uniform chain: 4 sin^2(pi / (2 (2n+1))) * k/m
        factor = 4.0 * np.sin(np.pi / (2.0 * (2 * n + 1))) ** 2
        omega1 = 2.0 * np.pi * f1
        k_si = omega1**2 * (self.story_mass * MG) / factor
        return k_si / MN_PER_M

    def chain(self, direction: str) -> ShearBuildingModel:
        f1 = self.f1_x if direction == "x" else self.f1_y
        k = self.chain_stiffness(f1)
        return ShearBuildingModel(
            story_masses=(self.story_mass,) * self.n_stories,
            story_stiffnesses=(k,) * self.n_stories,
            base_mass=1.0,  # unused: chains are fixed-base here
            damping_ratio=self.damping_ratio,
        )


class TmdFrameSystem:
    """Wind-excited planar-pair frame with three TMDs, batched over models.

    The excitation record carries the scalar wind force [N]; each chain
    receives its directional component distributed over height.  Outputs are
    the x and y roof absolute accelerations, interleaved.
    """

    channel_names = ("roof_accel_x", "roof_accel_y")

    def __init__(self, frame: TmdFrameModel, law_x: str, law_y: str, *,
                 params_x: dict, params_y: dict, n_models: int = 1):
        self.frame = frame
        self.laws = (law_x, law_y)
        self.n_models = n_models
        self.chains = {}
        for direction, law, raw in (("x", law_x, params_x), ("y", law_y, params_y)):
            chain = frame.chain(direction)
            n_tmd = 1 if direction == "x" else 2
            frac = frame.tmd_mass_fraction_x if direction == "x" else frame.tmd_mass_fraction_y
            m_tmd = frac * chain.n_stories * frame.story_mass * MG
            omega1 = chain.fixed_base_frequencies()[0]
            mu = m_tmd / (MG * sum(chain.story_masses))
            omega_t = omega1 / (1.0 + mu)        # classic frequency tuning
            params = self._si_params(law, raw, m_tmd)
            self.chains[direction] = {
                "M": np.asarray(chain.story_masses) * MG,
                "Ks": chain.stiffness_matrix(),
                "Cs": chain.damping_matrix(),
                "n_tmd": n_tmd,
                "m_tmd": m_tmd,
                "k_tmd": m_tmd * omega_t**2,
                "law": law,
                "params": params,
                "shape": (np.arange(1, chain.n_stories + 1) / chain.n_stories) ** 0.3,
            }
        theta = np.deg2rad(frame.wind_angle_deg)
        self.wind_components = {"x": np.cos(theta), "y": np.sin(theta)}
        ns = frame.n_stories
        # per chain: stories + TMDs (disp, vel) and one z per hysteretic TMD
        self.layout = {}
        offset = 0
        for direction in ("x", "y"):
            c = self.chains[direction]
            n_dof = ns + c["n_tmd"]
            n_z = c["n_tmd"] if c["law"] == "boucwen" else 0
            self.layout[direction] = (offset, n_dof, n_z)
            offset += 2 * n_dof + n_z
        self.n_states = offset

    @staticmethod
    def _si_params(law: str, raw: dict, m_tmd: float) -> dict:
        """Convert kN-based law parameters to SI; batch arrays pass through."""
        a = lambda key, default=0.0: np.asarray(raw.get(key, default), dtype=float)
        if law == "linear":
            return {"c1": a("c1") * KN}
        if law == "cubic":
            return {"c1": a("c1") * KN, "c3": a("c3") * KN}
        if law == "power_law_truth":
            return {"power_coef": a("power_coef") * KN, "power_lin": a("power_lin") * KN}
        if law == "boucwen":
            r_k = a("r_k")
            Q_y = a("Q_y")  # % of TMD weight
            k_pre = a("k_pre") * KN  # kN/m -> N/m
            Qy_si = Q_y / 100.0 * m_tmd * GRAVITY
            return {
                "k_post": r_k * k_pre,
                "q_y": Qy_si * (1.0 - r_k),
                "bw_a": k_pre / Qy_si,
            }
        raise ValueError(law)

    def initial_state(self) -> np.ndarray:
        return np.zeros((self.n_models, self.n_states))

    def _chain_rhs(self, direction: str, state, wind_force):
        c = self.chains[direction]
        offset, n_dof, n_z = self.layout[direction]
        ns = self.frame.n_stories
        n_tmd = c["n_tmd"]
        X = state[:, offset:offset + n_dof]
        V = state[:, offset + n_dof:offset + 2 * n_dof]
        Xs, Ut = X[:, :ns], X[:, ns:]
        Vs, dUt = V[:, :ns], V[:, ns:]

        # device force per TMD (relative coordinate u = tmd motion - roof motion)
        p = c["params"]
        if c["law"] == "boucwen":
            Z = state[:, offset + 2 * n_dof:offset + 2 * n_dof + n_z]
            f_dev = tmd_force("boucwen", dUt, Ut, q_y=p["q_y"][..., None] if np.ndim(p["q_y"]) else p["q_y"],
                              k_post=p["k_post"][..., None] if np.ndim(p["k_post"]) else p["k_post"], z=Z)
            bw_a = p["bw_a"][..., None] if np.ndim(p["bw_a"]) else p["bw_a"]
            z_rate = boucwen_rate(Z, dUt, bw_a, 0.5 * bw_a, 0.5 * bw_a, 1.0)
        else:
            kw = {k: (v[..., None] if np.ndim(v) else v) for k, v in p.items()}
            f_dev = tmd_force(c["law"], dUt, Ut, **kw)
            z_rate = None

        f_tmd = c["k_tmd"] * Ut + f_dev          # total force the TMDs apply on the roof
        load = wind_force * self.wind_components[direction] * c["shape"]

        acc_s = (-Vs @ c["Cs"].T - Xs @ c["Ks"].T + load) / c["M"]
        acc_s[:, -1] += f_tmd.sum(axis=1) / c["M"][-1]
        acc_roof = acc_s[:, -1]
        # m_tmd (u_ddot + roof_ddot) = -k u - f_dev  =>  u relative to the roof
        acc_u = -(c["k_tmd"] * Ut + f_dev) / c["m_tmd"] - acc_roof[:, None]

        deriv = np.zeros_like(state[:, offset:offset + 2 * n_dof + n_z])
        deriv[:, :n_dof] = V
        deriv[:, n_dof:n_dof + ns] = acc_s
        deriv[:, n_dof + ns:2 * n_dof] = acc_u
        if z_rate is not None:
            deriv[:, 2 * n_dof:] = z_rate
        return deriv, acc_roof

    def rhs(self, state: np.ndarray, wind_force: float) -> np.ndarray:
        deriv = np.empty_like(state)
        for direction in ("x", "y"):
            offset, n_dof, n_z = self.layout[direction]
            d, _ = self._chain_rhs(direction, state, wind_force)
            deriv[:, offset:offset + 2 * n_dof + n_z] = d
        return deriv

    def output(self, state: np.ndarray, wind_force: float) -> np.ndarray:
        out = np.empty((state.shape[0], 2))
        for j, direction in enumerate(("x", "y")):
            _, acc_roof = self._chain_rhs(direction, state, wind_force)
            out[:, j] = acc_roof
        return out


# ---------------------------------------------------------------------------
# biaxial hysteretic devices

BIAXIAL_DEVICES = ("rubber_bearing", "elastic_sliding_bearing", "steel_damper")


@dataclass(frozen=True)
class BiaxialDeviceParams:
    """Base-layer device parameters (Example-III style biaxial laws).

    Stiffnesses in kN/m (or kN/cm where the source tables use cm), friction
    force mu_W in kN, yield displacements D_x / D_y in the displacement units
    of the device.  Steel dampers use D_x = D_y = 1 since their hysteretic
    variables are not dimensionless.
    """

    device: str
    relationship: str                      # "linear" | "hysteretic"
    k: float = 0.0                         # kN per displacement unit
    k_xy: float = 0.0
    mu_W: float = 0.0                      # kN
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    A: float = 1.0
    D_x: float = 1.0
    D_y: float = 1.0

    def __post_init__(self):
        if self.device not in BIAXIAL_DEVICES:
            raise ValueError(f"unknown biaxial device {self.device!r}")
        if self.relationship not in ("linear", "hysteretic"):
            raise ValueError("relationship must be 'linear' or 'hysteretic'")
        if self.relationship == "hysteretic":
            if self.device == "elastic_sliding_bearing" and (self.D_x <= 0 or self.D_y <= 0):
                raise ValueError("sliding-bearing hysteresis requires D_x, D_y > 0")
            if self.device == "steel_damper" and not (0.0 < self.alpha < 1.0):
                raise ValueError("steel-damper hysteresis requires alpha in (0, 1)")


def biaxial_hysteresis_rates(z_x, z_y, v_x, v_y, *, A=1.0, beta=0.0, gamma=0.0,
                             D_x=1.0, D_y=1.0):
    """Coupled biaxial evolution of the hysteretic variables (Z_x, Z_y).

    D_y dZ_x/dt = A v_x - beta |v_x Z_x| Z_x - gamma v_x Z_x^2
                  - beta |v_y Z_y| Z_x - gamma v_y Z_x Z_y
    and symmetrically for dZ_y/dt (normalized by D_x).  With one direction
    quiescent this reduces to a uniaxial law with quadratic-exponent terms.
    """
    z_x = np.asarray(z_x, dtype=float)
    z_y = np.asarray(z_y, dtype=float)
    v_x = np.asarray(v_x, dtype=float)
    v_y = np.asarray(v_y, dtype=float)
    for arr in (z_x, z_y, v_x, v_y):
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite biaxial hysteresis state")
    dzx = (A * v_x - beta * np.abs(v_x * z_x) * z_x - gamma * v_x * z_x**2
           - beta * np.abs(v_y * z_y) * z_x - gamma * v_y * z_x * z_y) / D_y
    dzy = (A * v_y - beta * np.abs(v_y * z_y) * z_y - gamma * v_y * z_y**2
           - beta * np.abs(v_x * z_x) * z_y - gamma * v_x * z_y * z_x) / D_x
    return dzx, dzy


def biaxial_device_force(params: BiaxialDeviceParams, u_x, u_y, z_x=0.0, z_y=0.0):
    """Restoring force (f_x, f_y) [kN] of one base-layer device."""
    u_x = np.asarray(u_x, dtype=float)
    u_y = np.asarray(u_y, dtype=float)
    if params.relationship == "linear":
        return params.k * u_x, params.k * u_y
    z_x = np.asarray(z_x, dtype=float)
    z_y = np.asarray(z_y, dtype=float)
    if params.device == "elastic_sliding_bearing":
        return params.mu_W * z_x, params.mu_W * z_y
    if params.device == "steel_damper":
        # K_SD couples the two directions through k_xy
        fx = params.alpha * (params.k * u_x + params.k_xy * u_y) \
            + (1.0 - params.alpha) * (params.k * z_x + params.k_xy * z_y)
        fy = params.alpha * (params.k_xy * u_x + params.k * u_y) \
            + (1.0 - params.alpha) * (params.k_xy * z_x + params.k * z_y)
        return fx, fy
    raise ValueError(f"{params.device} has no hysteretic relationship")


# ---------------------------------------------------------------------------
# synthetic excitation records

def band_limited_record(duration: float, dt: float, *, band=(0.35, 1.5), order: int = 4,
                        seed: int = 0, peak: float | None = None, rms: float | None = None,
                        label: str = "synthetic") -> ExcitationRecord:
    """Band-limited filtered Gaussian white noise record.

    A Butterworth band-pass (default 4th order) applied to unit white noise,
    then scaled to the requested ``peak`` or ``rms``.  Used both for synthetic
    ground motions in the test suite and for the wind process.
    """
    n = int(round(duration / dt))
    rng = np.random.default_rng(seed)
    white = rng.standard_normal(n)
    nyq = 0.5 / dt
    sos = scipy.signal.butter(order, [band[0] / nyq, band[1] / nyq],
                              btype="bandpass", output="sos")
    x = scipy.signal.sosfilt(sos, white)
    # taper the edges so the record starts and ends near rest
    taper = scipy.signal.windows.tukey(n, alpha=0.1)
    x = x * taper
    if peak is not None:
        x = x * (peak / np.max(np.abs(x)))
    elif rms is not None:
        x = x * (rms / np.sqrt(np.mean(x**2)))
    return ExcitationRecord(dt=dt, samples=x, label=label)
