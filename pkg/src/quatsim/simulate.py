"""Complex simulation of quaternionic processes.

Each quaternionic object lifts through the matrix embedding: a state rho to
sigma = psi(rho) / 2, a POVM elementwise to {psi(E_r)}, a channel to the
Kraus set {psi(A_r)}.  Probabilities and expectations computed on the lifted
side use nothing but complex matrix arithmetic, so a comparison against the
quaternionic side is a genuine two-route check, not the same computation
twice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import embed, hmat, qqt
from .errors import DimensionError, ValidationError
from .qqt import Channel, Povm, State

LIFT_TOL = 1e-9


def lift_state(state: State) -> np.ndarray:
    """sigma = psi(rho) / 2: a valid 2d x 2d complex density matrix."""
    sigma = embed.psi(state.matrix) / 2.0
    trace = float(np.trace(sigma).real)
    if abs(trace - 1.0) > LIFT_TOL:
        raise ValidationError("unit_trace", f"lifted state trace {trace!r}")
    defect = float(np.max(np.abs(sigma - sigma.conj().T)))
    if defect > LIFT_TOL * max(1.0, float(np.linalg.norm(sigma))):
        raise ValidationError("hermitian", f"lifted state defect {defect:.3e}")
    return sigma


def lift_povm(povm: Povm) -> list[np.ndarray]:
    """Elementwise image {psi(E_r)}: a complex POVM on C^{2d}."""
    lifted = [embed.psi(e) for e in povm.effects]
    total = np.sum(lifted, axis=0)
    defect = float(np.linalg.norm(total - np.eye(2 * povm.dim)))
    if defect > LIFT_TOL * max(1.0, np.sqrt(2 * povm.dim)):
        raise ValidationError(
            "completeness", f"lifted POVM completeness defect {defect:.3e}")
    return lifted


def lift_channel(channel: Channel) -> list[np.ndarray]:
    """Lifted Kraus set {psi(A_r)}, normalized in the same mode as its source."""
    lifted = [embed.psi(a) for a in channel.kraus]
    if channel.mode == "default":
        total = np.sum([k.conj().T @ k for k in lifted], axis=0)
        eye = np.eye(2 * channel.in_dim)
    else:
        total = np.sum([k @ k.conj().T for k in lifted], axis=0)
        eye = np.eye(2 * channel.out_dim)
    defect = float(np.linalg.norm(total - eye))
    if defect > LIFT_TOL * max(1.0, np.sqrt(eye.shape[0])):
        raise ValidationError(
            "kraus_normalization",
            f"lifted Kraus normalization defect {defect:.3e} ({channel.mode} mode)")
    return lifted


def apply_lifted_channel(lifted_kraus: list[np.ndarray], sigma: np.ndarray) -> np.ndarray:
    return np.sum([k @ sigma @ k.conj().T for k in lifted_kraus], axis=0)


@dataclass(frozen=True)
class MeasurementComparison:
    """Quaternionic Born probabilities p against lifted probabilities q."""

    p: np.ndarray
    q: np.ndarray
    max_deviation: float
    p_sum_residual: float
    q_sum_residual: float


def measurement_equiv(state: State, povm: Povm) -> MeasurementComparison:
    """Compare p(r) = tr(E_r rho) with q(r) = tr(psi(E_r) sigma)."""
    p = qqt.born(state, povm)
    sigma = lift_state(state)
    q = np.array([float(np.trace(e @ sigma).real) for e in lift_povm(povm)])
    return MeasurementComparison(
        p=p, q=q,
        max_deviation=float(np.max(np.abs(p - q))),
        p_sum_residual=abs(float(p.sum()) - 1.0),
        q_sum_residual=abs(float(q.sum()) - 1.0),
    )


@dataclass(frozen=True)
class ChannelComparison:
    """Preparation -> transformation -> measurement, both routes.

    ``intermediate_residual`` is the Frobenius distance between the lifted
    output state and half the image of the quaternionic output, which the
    homomorphism laws force to vanish.
    """

    p: np.ndarray
    q: np.ndarray
    max_deviation: float
    intermediate_residual: float
    mode: str


def channel_equiv(state: State, channel: Channel, povm: Povm) -> ChannelComparison:
    """Compare tr(E_r Phi(rho)) with tr(psi(E_r) Theta(sigma)).

    In default mode the quaternionic output is additionally validated as a
    state; strict mode skips that check, since the strict normalization does
    not guarantee unit output trace.
    """
    if channel.in_dim != state.dim:
        raise DimensionError(
            f"channel input dimension {channel.in_dim} != state dimension {state.dim}")
    if povm.dim != channel.out_dim:
        raise DimensionError(
            f"POVM dimension {povm.dim} != channel output dimension {channel.out_dim}")

    out = qqt.kraus_apply(channel.kraus, state.matrix)
    if channel.mode == "default":
        State(out)  # raises ValidationError for malformed channels
    p = np.array([hmat.re_trace_product(e, out) for e in povm.effects])

    sigma = lift_state(state)
    theta_sigma = apply_lifted_channel(lift_channel(channel), sigma)
    q = np.array([float(np.trace(e @ theta_sigma).real) for e in lift_povm(povm)])

    intermediate = float(np.linalg.norm(theta_sigma - embed.psi(out) / 2.0))
    return ChannelComparison(
        p=p, q=q,
        max_deviation=float(np.max(np.abs(p - q))),
        intermediate_residual=intermediate,
        mode=channel.mode,
    )
