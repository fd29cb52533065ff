"""Quaternionic quantum objects: states, effects/POVMs, Kraus channels.

Construction is validation: a :class:`State`, :class:`Povm`, or
:class:`Channel` that exists has passed its defining invariants, and a
failed invariant raises :class:`~quatsim.errors.ValidationError` naming
exactly which one broke.

Channel normalization has two modes.  The default validates
``sum_r A_r* A_r = 1`` on the input space, which is what trace preservation
of the Re-trace actually requires; ``strict`` mode instead validates
``sum_r A_r A_r* = 1`` on the output space.  Both are exposed and nothing
is silently reinterpreted; see the project README for the distinction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import hmat
from .errors import (DimensionError, FrameInconsistencyError, ValidationError)
from .hmat import QMatrix, QVector

VALIDATION_TOL = 1e-9

CHANNEL_MODES = ("default", "strict")


def _completeness_defect(effects: Sequence[QMatrix], d: int) -> float:
    total = QMatrix.zeros(d, d)
    for e in effects:
        total = total + e
    return (total - QMatrix.identity(d)).frob()


class State:
    """Unit-trace positive semi-definite matrix over H^d."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: QMatrix, tol: float = VALIDATION_TOL):
        if matrix.rows != matrix.cols:
            raise DimensionError(f"state matrix must be square, got {matrix.shape}")
        if not hmat.is_psd(matrix, tol):
            raise ValidationError(
                "psd",
                f"state matrix is not positive semi-definite "
                f"(self-adjoint defect {matrix.sa_defect():.3e})")
        tr = matrix.trace()
        if abs(tr - 1.0) > tol:
            raise ValidationError(
                "unit_trace", f"state trace is {tr!r}, expected 1 within {tol:g}")
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @classmethod
    def maximally_mixed(cls, d: int) -> "State":
        return cls(QMatrix.identity(d) * (1.0 / d))

    @classmethod
    def pure(cls, vec: QVector) -> "State":
        return cls(vec.normalized().outer(vec.normalized()))

    @classmethod
    def random(cls, seed, d: int) -> "State":
        return cls(hmat.random_state_matrix(seed, d))

    def __repr__(self) -> str:
        return f"State(dim={self.dim})"


def is_effect(e: QMatrix, tol: float = VALIDATION_TOL) -> bool:
    """Effect test: positive semi-definite with tr(E^2) <= d."""
    if e.rows != e.cols:
        raise DimensionError(f"effect must be square, got {e.shape}")
    if not hmat.is_psd(e, tol):
        return False
    return hmat.re_trace_product(e, e) <= e.rows + tol


class Povm:
    """Positive operator valued measure: effects summing to the identity."""

    __slots__ = ("effects",)

    def __init__(self, effects: Sequence[QMatrix], tol: float = VALIDATION_TOL):
        effects = list(effects)
        if not effects:
            raise ValidationError("nonempty", "a POVM needs at least one effect")
        d = effects[0].rows
        for r, e in enumerate(effects):
            if e.shape != (d, d):
                raise DimensionError(
                    f"effect {r} has shape {e.shape}, expected ({d}, {d})")
            if not hmat.is_psd(e, tol):
                raise ValidationError(
                    "psd", f"effect {r} is not positive semi-definite")
            purity = hmat.re_trace_product(e, e)
            if purity > d + tol:
                raise ValidationError(
                    "effect_bound",
                    f"effect {r} has tr(E^2) = {purity!r} > dim = {d}")
        defect = _completeness_defect(effects, d)
        if defect > tol * max(1.0, math.sqrt(d)):
            raise ValidationError(
                "completeness",
                f"POVM completeness violated: ||sum E - 1|| = {defect:.3e}")
        self.effects = effects

    @property
    def dim(self) -> int:
        return self.effects[0].rows

    @property
    def outcomes(self) -> int:
        return len(self.effects)

    @classmethod
    def projective(cls, d: int) -> "Povm":
        """Standard-basis rank-one projectors."""
        effects = []
        for r in range(d):
            comps = np.zeros((4, d, d))
            comps[0, r, r] = 1.0
            effects.append(QMatrix(comps))
        return cls(effects)

    @classmethod
    def random(cls, seed, d: int, m: int) -> "Povm":
        """m random effects: normal-matrix squares renormalized to completeness."""
        rng = hmat.as_rng(seed)
        raws = [hmat.random_psd(rng, d) for _ in range(m)]
        total = QMatrix.zeros(d, d)
        for f in raws:
            total = total + f
        s = hmat.inv_sqrt_psd(total, 1e-9)
        return cls([s @ f @ s for f in raws])

    def __repr__(self) -> str:
        return f"Povm(dim={self.dim}, outcomes={self.outcomes})"


class Channel:
    """Quantum channel in Kraus form: rho -> sum_r A_r rho A_r*."""

    __slots__ = ("kraus", "mode")

    def __init__(self, kraus: Sequence[QMatrix], mode: str = "default",
                 tol: float = VALIDATION_TOL):
        kraus = list(kraus)
        if not kraus:
            raise ValidationError("nonempty", "a channel needs at least one Kraus operator")
        if mode not in CHANNEL_MODES:
            raise ValidationError("mode", f"unknown channel mode {mode!r}")
        p, d = kraus[0].shape
        for r, a in enumerate(kraus):
            if a.shape != (p, d):
                raise DimensionError(
                    f"Kraus operator {r} has shape {a.shape}, expected ({p}, {d})")
        if mode == "default":
            total = QMatrix.zeros(d, d)
            for a in kraus:
                total = total + a.adjoint() @ a
            defect = (total - QMatrix.identity(d)).frob()
            scale = math.sqrt(d)
        else:
            total = QMatrix.zeros(p, p)
            for a in kraus:
                total = total + a @ a.adjoint()
            defect = (total - QMatrix.identity(p)).frob()
            scale = math.sqrt(p)
        if defect > tol * max(1.0, scale):
            raise ValidationError(
                "kraus_normalization",
                f"Kraus normalization ({mode} mode) violated: defect {defect:.3e}")
        self.kraus = kraus
        self.mode = mode

    @property
    def in_dim(self) -> int:
        return self.kraus[0].cols

    @property
    def out_dim(self) -> int:
        return self.kraus[0].rows

    @classmethod
    def identity(cls, d: int, mode: str = "default") -> "Channel":
        return cls([QMatrix.identity(d)], mode=mode)

    @classmethod
    def unitary(cls, u: QMatrix, mode: str = "default") -> "Channel":
        return cls([u], mode=mode)

    @classmethod
    def random(cls, seed, d: int, p: int, n: int, mode: str = "default") -> "Channel":
        """n random p x d Kraus operators sharing a normalizing square root.

        In default mode n*p >= d is required (the Gram sum must be full rank
        on the input space); strict mode symmetrically requires n*d >= p.
        """
        rng = hmat.as_rng(seed)
        raws = [hmat.random_matrix(rng, p, d) for _ in range(n)]
        if mode == "default":
            total = QMatrix.zeros(d, d)
            for b in raws:
                total = total + b.adjoint() @ b
            s = hmat.inv_sqrt_psd(total, 1e-9)
            return cls([b @ s for b in raws], mode=mode)
        total = QMatrix.zeros(p, p)
        for b in raws:
            total = total + b @ b.adjoint()
        s = hmat.inv_sqrt_psd(total, 1e-9)
        return cls([s @ b for b in raws], mode=mode)

    def __repr__(self) -> str:
        return f"Channel({self.in_dim} -> {self.out_dim}, n={len(self.kraus)}, mode={self.mode!r})"


# -- dynamics ------------------------------------------------------------------

def born(state: State, povm: Povm, tol: float = VALIDATION_TOL) -> np.ndarray:
    """Outcome probabilities p(r) = tr(E_r rho), computed quaternionically.

    Raw values may carry roundoff of at most ``tol`` outside [0, 1]; anything
    worse indicates an invalid input and raises.  The returned vector is
    clamped to [0, 1] after the tolerance check.
    """
    if povm.dim != state.dim:
        raise DimensionError(
            f"POVM dimension {povm.dim} does not match state dimension {state.dim}")
    p = np.array([hmat.re_trace_product(e, state.matrix) for e in povm.effects])
    if p.min() < -tol or p.max() > 1.0 + tol:
        raise ValidationError(
            "probability_range",
            f"Born probabilities outside [0,1] beyond tolerance: {p}")
    total = float(p.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(
            "probability_sum", f"Born probabilities sum to {total!r}, expected 1")
    return np.clip(p, 0.0, 1.0)


def kraus_apply(kraus: Sequence[QMatrix], m: QMatrix) -> QMatrix:
    """Raw Kraus action sum_r A_r m A_r* without output validation."""
    p = kraus[0].rows
    out = QMatrix.zeros(p, p)
    for a in kraus:
        out = out + a @ m @ a.adjoint()
    return out


def apply_channel(channel: Channel, state: State) -> State:
    """Evolve a state; the output is validated, so a malformed channel
    surfaces as a validation failure rather than a silently bad state."""
    if channel.in_dim != state.dim:
        raise DimensionError(
            f"channel input dimension {channel.in_dim} does not match state "
            f"dimension {state.dim}")
    return State(kraus_apply(channel.kraus, state.matrix))


# -- frame functions and state reconstruction -----------------------------------

@dataclass(frozen=True)
class FrameSchedule:
    """Deterministic query plan for probing a frame function on dim d.

    Queries, in order: the identity effect, one in-domain affine image
    G_r = (Y_r + c_r) / s_r per orthonormal basis element Y_r, then
    ``n_validation`` seeded random effects used purely as redundancy to
    detect inconsistent responses.
    """

    dim: int
    margin: float
    basis: list[QMatrix]
    shifts: np.ndarray
    scales: np.ndarray
    validation_effects: list[QMatrix]

    def queries(self) -> list[QMatrix]:
        ident = QMatrix.identity(self.dim)
        scaled = []
        for y, c, s in zip(self.basis, self.shifts, self.scales):
            scaled.append((y + ident * float(c)) * float(1.0 / s))
        return [ident] + scaled + list(self.validation_effects)

    def __len__(self) -> int:
        return 1 + len(self.basis) + len(self.validation_effects)


def build_schedule(d: int, margin: float = 0.1, n_validation: int = 8) -> FrameSchedule:
    if d < 1:
        raise DimensionError("schedule requires d >= 1")
    if margin <= 0.0:
        raise ValidationError("margin", "shift margin must be positive")
    basis = hmat.sa_basis(d)
    shifts = np.empty(len(basis))
    scales = np.empty(len(basis))
    for r, y in enumerate(basis):
        c = abs(min(0.0, hmat.min_eigenvalue(y))) + margin
        t = y.trace()
        # tr(G^2) = (1 + 2 c tr(Y) + c^2 d) / s^2 pinned to exactly d
        s = math.sqrt((1.0 + 2.0 * c * t + c * c * d) / d)
        shifts[r] = c
        scales[r] = s
    rng = hmat.as_rng(hmat.trial_seed(d, 0, "frame-validation"))
    validation = []
    for _ in range(n_validation):
        e0 = hmat.random_psd(rng, d)
        u = rng.uniform(0.2, 0.9)
        factor = math.sqrt(u * d / hmat.re_trace_product(e0, e0))
        validation.append(e0 * factor)
    return FrameSchedule(dim=d, margin=margin, basis=basis, shifts=shifts,
                         scales=scales, validation_effects=validation)


@dataclass(frozen=True)
class FrameReconstruction:
    state: State
    coefficients: np.ndarray
    trace_residual: float
    max_validation_residual: float


def reconstruct_from_values(schedule: FrameSchedule, values: Sequence[float],
                            tol: float = 1e-8) -> FrameReconstruction:
    """Invert recorded frame-function values back to the unique state.

    ``values`` must follow the schedule's query order.  Inconsistency with
    any single state (broken normalization, non-linear responses, loss of
    positivity) raises :class:`FrameInconsistencyError` with the residual.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (len(schedule),):
        raise DimensionError(
            f"schedule for d={schedule.dim} expects {len(schedule)} values, "
            f"got {values.shape}")
    k = len(schedule.basis)
    v_ident = float(values[0])
    if abs(v_ident - 1.0) > tol:
        raise FrameInconsistencyError(
            f"frame normalization violated: f(1) = {v_ident!r}",
            abs(v_ident - 1.0))
    coeff = schedule.scales * values[1:1 + k] - schedule.shifts * v_ident
    d = schedule.dim
    rho = QMatrix.zeros(d, d)
    for y, c in zip(schedule.basis, coeff):
        rho = rho + y * float(c)
    trace_residual = abs(rho.trace() - 1.0)
    if trace_residual > tol:
        raise FrameInconsistencyError(
            f"reconstructed trace deviates from 1 by {trace_residual:.3e}",
            trace_residual)
    rho = rho * (1.0 / rho.trace())
    max_validation = 0.0
    for e, v in zip(schedule.validation_effects, values[1 + k:]):
        max_validation = max(max_validation,
                             abs(float(v) - hmat.re_trace_product(e, rho)))
    if max_validation > tol:
        raise FrameInconsistencyError(
            f"frame responses inconsistent with a single state "
            f"(validation residual {max_validation:.3e})", max_validation)
    if not hmat.is_psd(rho):
        raise FrameInconsistencyError(
            "reconstructed operator is not positive semi-definite",
            max(0.0, -hmat.min_eigenvalue(rho)))
    return FrameReconstruction(state=State(rho), coefficients=coeff,
                               trace_residual=trace_residual,
                               max_validation_residual=max_validation)


def frame_reconstruct(f: Callable[[QMatrix], float], d: int,
                      margin: float = 0.1, n_validation: int = 8,
                      tol: float = 1e-8) -> FrameReconstruction:
    """Query a frame function on the standard schedule and invert it."""
    schedule = build_schedule(d, margin=margin, n_validation=n_validation)
    values = [float(f(e)) for e in schedule.queries()]
    return reconstruct_from_values(schedule, values, tol=tol)


def state_frame_function(state: State) -> Callable[[QMatrix], float]:
    """The frame function induced by a state: E -> tr(E rho)."""
    return lambda e: hmat.re_trace_product(e, state.matrix)
