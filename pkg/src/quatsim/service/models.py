"""Pydantic wire models for the HTTP service, the CLI, and all JSON files.

Scalar encodings: a quaternion is a 4-array of reals [h0, h1, h2, h3]; a
complex number is a 2-array [re, im].  Quaternionic matrices store entries as
row-major nested lists of quaternion 4-arrays; complex matrices store a flat
row-major list of [re, im] pairs.  Every top-level file object carries a
``"schema": 1`` stamp.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .. import hmat
from ..hmat import QMatrix

Quat4 = Annotated[list[float], Field(min_length=4, max_length=4)]
Complex2 = Annotated[list[float], Field(min_length=2, max_length=2)]

SCHEMA_VERSION = 1


class ApiModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class SchemaStamp(ApiModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")

    @field_validator("schema_version")
    @classmethod
    def _supported(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {v}")
        return v


class QuatMatrix(ApiModel):
    """p x d quaternionic matrix, row-major quaternion 4-arrays."""

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    entries: list[list[Quat4]]

    @model_validator(mode="after")
    def _shape(self) -> "QuatMatrix":
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for r, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise ValueError(f"row {r} has {len(row)} entries, expected {self.cols}")
        return self

    def to_core(self) -> QMatrix:
        return QMatrix.from_nested(self.entries)

    @classmethod
    def from_core(cls, m: QMatrix) -> "QuatMatrix":
        return cls(rows=m.rows, cols=m.cols, entries=m.to_nested())


class QuatVector(ApiModel):
    dim: int = Field(ge=1)
    entries: list[Quat4]

    @model_validator(mode="after")
    def _shape(self) -> "QuatVector":
        if len(self.entries) != self.dim:
            raise ValueError(f"expected {self.dim} entries, got {len(self.entries)}")
        return self

    def to_core(self) -> hmat.QVector:
        return hmat.QVector(np.asarray(self.entries, dtype=float).T)

    @classmethod
    def from_core(cls, v: hmat.QVector) -> "QuatVector":
        return cls(dim=v.dim, entries=v.comps.T.tolist())


class ComplexMatrix(ApiModel):
    """Complex matrix as a flat row-major list of [re, im] pairs."""

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    entries: list[Complex2]

    @model_validator(mode="after")
    def _shape(self) -> "ComplexMatrix":
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        return self

    def to_core(self) -> np.ndarray:
        flat = np.asarray(self.entries, dtype=float)
        return (flat[:, 0] + 1j * flat[:, 1]).reshape(self.rows, self.cols)

    @classmethod
    def from_core(cls, m: np.ndarray) -> "ComplexMatrix":
        m = np.asarray(m, dtype=np.complex128)
        flat = m.reshape(-1)
        return cls(rows=m.shape[0], cols=m.shape[1],
                   entries=np.stack([flat.real, flat.imag], axis=1).tolist())


class QuatMatrixFile(SchemaStamp, QuatMatrix):
    pass


class ComplexMatrixFile(SchemaStamp, ComplexMatrix):
    pass


class StatePayload(ApiModel):
    dim: int = Field(ge=1)
    matrix: QuatMatrix

    @model_validator(mode="after")
    def _square(self) -> "StatePayload":
        if self.matrix.rows != self.dim or self.matrix.cols != self.dim:
            raise ValueError(
                f"state matrix shape ({self.matrix.rows}, {self.matrix.cols}) "
                f"does not match dim {self.dim}")
        return self


class StateFile(SchemaStamp, StatePayload):
    pass


class PovmPayload(ApiModel):
    dim: int = Field(ge=1)
    effects: list[QuatMatrix] = Field(min_length=1)

    @model_validator(mode="after")
    def _square(self) -> "PovmPayload":
        for r, e in enumerate(self.effects):
            if e.rows != self.dim or e.cols != self.dim:
                raise ValueError(
                    f"effect {r} shape ({e.rows}, {e.cols}) does not match dim {self.dim}")
        return self


class PovmFile(SchemaStamp, PovmPayload):
    pass


class ChannelPayload(ApiModel):
    in_dim: int = Field(ge=1)
    out_dim: int = Field(ge=1)
    kraus: list[QuatMatrix] = Field(min_length=1)

    @model_validator(mode="after")
    def _shapes(self) -> "ChannelPayload":
        for r, a in enumerate(self.kraus):
            if a.rows != self.out_dim or a.cols != self.in_dim:
                raise ValueError(
                    f"Kraus operator {r} shape ({a.rows}, {a.cols}) does not match "
                    f"(out_dim, in_dim) = ({self.out_dim}, {self.in_dim})")
        return self


class ChannelFile(SchemaStamp, ChannelPayload):
    pass


class FrameValuesFile(SchemaStamp):
    """Frame-function responses recorded on the standard query schedule."""

    dim: int = Field(ge=1)
    margin: float = Field(default=0.1, gt=0.0)
    n_validation: int = Field(default=8, ge=0)
    values: list[float]


class BasisFile(SchemaStamp):
    dim: int = Field(ge=1)
    elements: list[QuatMatrix]


# -- verify ---------------------------------------------------------------------

class VerifyRequest(ApiModel):
    seed: int = 0
    dims: list[int] = Field(default=[1, 2, 3, 4, 5, 6], min_length=1)
    trials: int = Field(default=100, ge=1)
    mode: Literal["default", "strict"] = "default"
    tolerance: float = Field(default=1e-10, gt=0.0)

    @field_validator("dims")
    @classmethod
    def _positive(cls, dims: list[int]) -> list[int]:
        if any(d < 1 for d in dims):
            raise ValueError("dims must be positive")
        return dims


class Violation(ApiModel):
    campaign: str
    trial: int
    seed: int
    deviation: float


class SuiteReport(ApiModel):
    model_config = ConfigDict(populate_by_name=True, extra="allow")

    trials: int
    tolerance: float
    max_residual: float
    worst_seed: int
    passed: bool = Field(alias="pass")
    violations: list[Violation]


class VerifyReport(SchemaStamp):
    command: Literal["verify"] = "verify"
    seed: int
    dims: list[int]
    trials: int
    mode: Literal["default", "strict"]
    tolerance: float
    max_measurement_dev: float
    max_channel_dev: float
    worst_seed: int
    campaigns: dict[str, SuiteReport]
    suites: dict[str, SuiteReport]
    violations: list[Violation]
    passed: bool = Field(alias="pass")


# -- simulate -------------------------------------------------------------------

class SimulateRequest(ApiModel):
    state: StatePayload
    povm: PovmPayload
    channel: Optional[ChannelPayload] = None
    mode: Literal["default", "strict"] = "default"


class OutcomeRow(ApiModel):
    index: int
    p: float
    q: float
    deviation: float


class SimulateResponse(SchemaStamp):
    outcomes: list[OutcomeRow]
    max_deviation: float
    intermediate_residual: Optional[float] = None
    mode: Literal["default", "strict"]


# -- embed ----------------------------------------------------------------------

class EmbedToComplexRequest(ApiModel):
    direction: Literal["h2c"]
    matrix: QuatMatrix


class EmbedToQuatRequest(ApiModel):
    direction: Literal["c2h"]
    matrix: ComplexMatrix


EmbedRequest = Annotated[Union[EmbedToComplexRequest, EmbedToQuatRequest],
                         Field(discriminator="direction")]


class EmbedResponse(SchemaStamp):
    direction: Literal["h2c", "c2h"]
    matrix: Union[ComplexMatrix, QuatMatrix]


# -- tomography -------------------------------------------------------------------

class TomographyRequest(ApiModel):
    """Reconstruct from recorded values, or self-test from a seeded state."""

    dim: int = Field(ge=1)
    margin: float = Field(default=0.1, gt=0.0)
    n_validation: int = Field(default=8, ge=0)
    values: Optional[list[float]] = None
    generate_seed: Optional[int] = None

    @model_validator(mode="after")
    def _one_source(self) -> "TomographyRequest":
        if (self.values is None) == (self.generate_seed is None):
            raise ValueError("provide exactly one of 'values' or 'generate_seed'")
        return self


class TomographyResponse(SchemaStamp):
    dim: int
    margin: float
    state: StatePayload
    coefficients: list[float]
    trace_residual: float
    max_validation_residual: float
    generated_from_seed: Optional[int] = None
    round_trip_residual: Optional[float] = None
