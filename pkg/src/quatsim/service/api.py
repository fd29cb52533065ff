"""Handlers behind the HTTP endpoints.

Plain functions from request models to response models; the FastAPI app and
the command-line client both call these, so the two front ends cannot
drift apart.  Domain failures propagate as :class:`~quatsim.errors`
exceptions and are translated to HTTP or exit codes by the caller.
"""

from __future__ import annotations

from .. import campaigns, embed, hmat, qqt, simulate
from ..qqt import Channel, Povm, State
from . import models


def run_verify(req: models.VerifyRequest) -> models.VerifyReport:
    report = campaigns.run_verification(
        seed=req.seed, dims=req.dims, trials=req.trials,
        mode=req.mode, tolerance=req.tolerance)
    return models.VerifyReport.model_validate(report)


def _build_state(payload: models.StatePayload) -> State:
    return State(payload.matrix.to_core())


def _build_povm(payload: models.PovmPayload) -> Povm:
    return Povm([e.to_core() for e in payload.effects])


def _build_channel(payload: models.ChannelPayload, mode: str) -> Channel:
    return Channel([a.to_core() for a in payload.kraus], mode=mode)


def run_simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    state = _build_state(req.state)
    povm = _build_povm(req.povm)
    if req.channel is None:
        rep = simulate.measurement_equiv(state, povm)
        intermediate = None
    else:
        channel = _build_channel(req.channel, req.mode)
        rep = simulate.channel_equiv(state, channel, povm)
        intermediate = float(rep.intermediate_residual)
    outcomes = [
        models.OutcomeRow(index=r, p=float(p), q=float(q),
                          deviation=abs(float(p) - float(q)))
        for r, (p, q) in enumerate(zip(rep.p, rep.q))
    ]
    return models.SimulateResponse(
        outcomes=outcomes,
        max_deviation=float(rep.max_deviation),
        intermediate_residual=intermediate,
        mode=req.mode,
    )


def run_embed(req) -> models.EmbedResponse:
    if req.direction == "h2c":
        out = embed.psi(req.matrix.to_core())
        converted = models.ComplexMatrix.from_core(out)
    else:
        out = embed.psi_inv(req.matrix.to_core())
        converted = models.QuatMatrix.from_core(out)
    return models.EmbedResponse(direction=req.direction, matrix=converted)


def run_tomography(req: models.TomographyRequest) -> models.TomographyResponse:
    schedule = qqt.build_schedule(req.dim, margin=req.margin,
                                  n_validation=req.n_validation)
    true_state = None
    if req.values is not None:
        values = req.values
    else:
        true_state = State.random(req.generate_seed, req.dim)
        f = qqt.state_frame_function(true_state)
        values = [f(e) for e in schedule.queries()]
    rec = qqt.reconstruct_from_values(schedule, values)
    round_trip = None
    if true_state is not None:
        round_trip = float((rec.state.matrix - true_state.matrix).frob())
    return models.TomographyResponse(
        dim=req.dim,
        margin=req.margin,
        state=models.StatePayload(
            dim=req.dim, matrix=models.QuatMatrix.from_core(rec.state.matrix)),
        coefficients=[float(c) for c in rec.coefficients],
        trace_residual=float(rec.trace_residual),
        max_validation_residual=float(rec.max_validation_residual),
        generated_from_seed=req.generate_seed,
        round_trip_residual=round_trip,
    )


def frame_values_for_state(state: State, dim: int, margin: float = 0.1,
                           n_validation: int = 8) -> models.FrameValuesFile:
    """Record the frame-function responses a state induces on the schedule."""
    schedule = qqt.build_schedule(dim, margin=margin, n_validation=n_validation)
    f = qqt.state_frame_function(state)
    return models.FrameValuesFile(
        dim=dim, margin=margin, n_validation=n_validation,
        values=[float(f(e)) for e in schedule.queries()])


def make_basis(dim: int) -> models.BasisFile:
    elements = [models.QuatMatrix.from_core(m) for m in hmat.sa_basis(dim)]
    return models.BasisFile(dim=dim, elements=elements)
