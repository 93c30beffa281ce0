"""Shared helpers: seeded random parameter sets for property-style tests."""
import numpy as np

from optocool import SystemParams, build_linear_system, is_stable
from optocool.weakcoupling import quantum_noise_rates


def random_params(rng: np.random.Generator) -> SystemParams:
    """One random parameter set in the physically sensible range (omega_m = 1)."""
    return SystemParams(
        omega_m=1.0,
        kappa=float(10.0 ** rng.uniform(-1.3, 0.7)),
        gamma=float(10.0 ** rng.uniform(-6.0, -2.0)),
        delta=float(rng.uniform(-2.0, 2.0)),
        a_tilde=float(rng.uniform(-0.4, 0.4)),
        b_tilde=float(rng.uniform(-0.4, 0.4)),
        n_th=float(10.0 ** rng.uniform(-1.0, 2.0)),
    )


def random_stable_params(rng, count, require_damped=False) -> list[SystemParams]:
    """``count`` random sets that pass the exact stability test.

    With ``require_damped`` the weak-coupling effective damping must also be
    positive (needed by the approximate-tier formulas).
    """
    out = []
    while len(out) < count:
        p = random_params(rng)
        if not is_stable(build_linear_system(p)).stable:
            continue
        if require_damped and quantum_noise_rates(p).gamma_eff <= 0.0:
            continue
        out.append(p)
    return out
