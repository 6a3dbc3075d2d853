"""JSON result records.

Every record carries ``"schema": 1``. Complex numbers are ``[re, im]``
decimal strings at the working precision.
"""

from __future__ import annotations

from typing import Literal, Sequence

from mpmath import mp
from pydantic import BaseModel, ConfigDict, Field

from .mockform import FValue, PoleHit, ShadowResult
from .numeric import complex_to_pair
from .periods import EichlerValue, PeriodLattice
from .qforms import QExpansion

ComplexPair = list[str]


class Record(BaseModel):
    schema_version: Literal[1] = Field(default=1, alias="schema")
    command: str
    form: str
    digits: int

    model_config = ConfigDict(populate_by_name=True)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


def _pairs(values: Sequence, digits: int) -> list[ComplexPair]:
    return [complex_to_pair(v, digits) for v in values]


class GeneratorRecord(BaseModel):
    label: str
    value: ComplexPair


class PeriodLatticeRecord(Record):
    command: str = "periods"
    omega1: ComplexPair
    omega2: ComplexPair
    volume: str
    residual: str
    generators: list[GeneratorRecord]

    @classmethod
    def build(cls, form: str, lattice: PeriodLattice, digits: int) -> "PeriodLatticeRecord":
        return cls(
            form=form,
            digits=digits,
            omega1=complex_to_pair(lattice.omega1, digits),
            omega2=complex_to_pair(lattice.omega2, digits),
            volume=mp.nstr(lattice.volume, digits),
            residual=mp.nstr(lattice.residual, 5),
            generators=[
                GeneratorRecord(label=label, value=complex_to_pair(v, digits))
                for v, label in lattice.generators
            ],
        )


class EichlerRecord(Record):
    command: str = "eichler"
    tau: ComplexPair
    matrix: list[int]
    components: list[ComplexPair]
    display: list[ComplexPair] = Field(default_factory=list)

    @classmethod
    def build(
        cls, form: str, tau, value: EichlerValue, digits: int, display: Sequence = ()
    ) -> "EichlerRecord":
        return cls(
            form=form,
            digits=digits,
            tau=complex_to_pair(tau, digits),
            matrix=list(value.basis_tag.as_tuple()),
            components=_pairs(value.components, digits),
            display=_pairs(display, digits),
        )


class PoleRecord(BaseModel):
    tau: ComplexPair
    matrix: list[int]
    component: int
    distance: str
    lattice_point: list[int]

    @classmethod
    def build(cls, hit: PoleHit, digits: int) -> "PoleRecord":
        return cls(
            tau=complex_to_pair(hit.tau, digits),
            matrix=list(hit.matrix.as_tuple()),
            component=hit.component,
            distance=mp.nstr(hit.distance, 5),
            lattice_point=list(hit.lattice_point),
        )


class FValueRecord(Record):
    command: str = "evaluate"
    tau: ComplexPair
    matrix: list[int]
    value: list[ComplexPair]
    pole_flag: bool
    poles: list[PoleRecord] = Field(default_factory=list)

    @classmethod
    def build(cls, form: str, value: FValue, digits: int) -> "FValueRecord":
        return cls(
            form=form,
            digits=digits,
            tau=complex_to_pair(value.tau, digits),
            matrix=list(value.matrix.as_tuple()),
            value=_pairs(value.value.entries, digits),
            pole_flag=value.pole_flag,
            poles=[PoleRecord.build(h, digits) for h in value.poles],
        )


class InvarianceRecord(Record):
    command: str = "invariance"
    tau: ComplexPair
    gamma: list[int]
    matrix: list[int]
    deviation: str
    tolerance: str
    passed: bool
    defect: list[list[int]] = Field(default_factory=list)


class ShadowRecord(Record):
    command: str = "shadow"
    tau: ComplexPair
    matrix: list[int]
    step: str
    computed: list[ComplexPair]
    expected: list[ComplexPair]
    deviation: str
    tolerance: str
    passed: bool

    @classmethod
    def build(
        cls, form: str, tau, matrix, result: ShadowResult, digits: int, tolerance
    ) -> "ShadowRecord":
        return cls(
            form=form,
            digits=digits,
            tau=complex_to_pair(tau, digits),
            matrix=list(matrix.as_tuple()),
            step=mp.nstr(result.step, 5),
            computed=_pairs(result.computed.entries, digits),
            expected=_pairs(result.expected.entries, digits),
            deviation=mp.nstr(result.deviation, 5),
            tolerance=mp.nstr(mp.mpf(tolerance), 5),
            passed=bool(result.deviation < tolerance),
        )


class PoleScanRecord(Record):
    command: str = "polescan"
    region: list[str]
    resolution: list[int]
    hits: list[PoleRecord]


class QExpansionRecord(Record):
    command: str = "qexp"
    n_min: int
    coefficients: list[ComplexPair]

    @classmethod
    def build(cls, form: str, expansion: QExpansion, digits: int) -> "QExpansionRecord":
        return cls(
            form=form,
            digits=digits,
            n_min=expansion.n_min,
            coefficients=[
                complex_to_pair(expansion.prefactor * c.coeffs[0], digits)
                for c in expansion.coeffs
            ],
        )


class FixtureResult(BaseModel):
    name: str
    expected: str
    observed: str
    passed: bool


class FixtureReport(Record):
    command: str = "fixtures"
    form: str = "all"
    results: list[FixtureResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> str:
        width = max((len(r.name) for r in self.results), default=4)
        lines = [f"{'check'.ljust(width)}  result  observed"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{r.name.ljust(width)}  {status:6}  {r.observed}")
        return "\n".join(lines)
