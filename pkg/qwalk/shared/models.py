import math
from typing import Any, TypeVar

from pydantic import BaseModel as _BaseModel
from pydantic import Field, computed_field

from qwalk.engine import bounds, errors, walks
from qwalk.engine.graph import Graph, Involution, Vertex, Verdict
from qwalk.engine.hamiltonian import BlockReduction, Hamiltonian, gershgorin_intervals
from qwalk.engine.spectral import Spectrum, TransferResult

T = TypeVar("T", bound="BaseModel")


class BaseModel(_BaseModel):
    def to_json(self) -> str:
        return self.model_dump_json()

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump()

    @classmethod
    def from_raw(cls: type[T], data: str | bytes) -> T:
        return cls.model_validate_json(data)

    @classmethod
    def from_dict(cls: type[T], obj: dict[str, Any]) -> T:
        return cls.model_validate(obj)


class GraphFile(BaseModel):
    n: int = Field(..., ge=1)
    potentials: list[float]
    edges: list[tuple[int, int]]
    involution: list[int] | None = None
    well: int | None = None

    def to_graph(self) -> Graph:
        return Graph.build(self.n, self.edges, self.potentials)

    def to_involution(self) -> Involution | None:
        return Involution(tuple(self.involution)) if self.involution is not None else None

    def to_domain(self) -> tuple[Graph, Involution | None, Vertex | None]:
        graph = self.to_graph()

        if self.well is not None and not 0 <= self.well < self.n:
            raise errors.StructuralError(f"Well {self.well} is out of range.")

        return graph, self.to_involution(), self.well

    @classmethod
    def from_domain(
        cls, g: Graph, inv: Involution | None = None, well: Vertex | None = None
    ) -> "GraphFile":
        return cls(
            n=g.n,
            potentials=list(g.potential),
            edges=sorted(g.edges),
            involution=list(inv) if inv is not None else None,
            well=well,
        )


class Violation(BaseModel):
    kind: str
    message: str
    witness: list[int]


class ValidationVerdict(BaseModel):
    ok: bool
    violations: list[Violation] = []


def verdict_to_model(verdict: Verdict) -> ValidationVerdict:
    return ValidationVerdict(
        ok=verdict.ok,
        violations=[
            Violation(kind=str(item.kind), message=item.message, witness=list(item.witness))
            for item in verdict.violations
        ],
    )


class Bound(BaseModel):
    value: float | None
    computed: float | None
    holds: bool | None
    applicable: bool
    limitation: bool


class BoundReport(BaseModel):
    q: float
    m: int
    d: int
    well: int
    partner: int
    gap_resolved: bool
    lambda2_in_minus: bool | None
    adjacent_wells: bool
    gap_equality: bool
    all_hold: bool
    limitations: list[str]
    lambda1: Bound
    lambda1_rayleigh: Bound
    lambda2: Bound
    lambda2_plain: Bound
    gap: Bound
    time: Bound
    phi1: Bound
    phi2: Bound
    phi1_rayleigh: Bound
    phi2_rayleigh: Bound
    fidelity: Bound
    theorem: Bound
    norm: Bound


def report_to_model(report: bounds.BoundReport) -> BoundReport:
    def serialize_bound(bound: bounds.Bound) -> Bound:
        return Bound(
            value=bound.value,
            computed=bound.computed,
            holds=bound.holds,
            applicable=bound.applicable,
            limitation=bound.limitation,
        )

    return BoundReport(
        q=report.q,
        m=report.m,
        d=report.d,
        well=report.well,
        partner=report.partner,
        gap_resolved=report.gap_resolved,
        lambda2_in_minus=report.lambda2_in_minus,
        adjacent_wells=report.adjacent_wells,
        gap_equality=report.gap_equality,
        all_hold=report.all_hold,
        limitations=report.limitations(),
        **{name: serialize_bound(bound) for name, bound in report.bounds().items()},
    )


class Transfer(BaseModel):
    t: float
    p: float
    amplitude_re: float
    amplitude_im: float
    oracle_p: float | None = None


def transfer_to_model(result: TransferResult, oracle_p: float | None = None) -> Transfer:
    return Transfer(
        t=result.time,
        p=result.probability,
        amplitude_re=result.amplitude.real,
        amplitude_im=result.amplitude.imag,
        oracle_p=oracle_p,
    )


class MinPotential(BaseModel):
    m: int
    epsilon: float
    c: float
    q_formula: float
    q_sufficient_256: float


class InvolutionItem(BaseModel):
    map: list[int]
    identity: bool
    fixed_points: list[int]


def involution_to_model(inv: Involution) -> InvolutionItem:
    return InvolutionItem(
        map=list(inv), identity=inv.is_identity, fixed_points=list(inv.fixed_points)
    )


class Disc(BaseModel):
    center: float
    radius: float


class Matrices(BaseModel):
    h: list[list[float]]
    hplus_asym: list[list[float]] | None = None
    hplus_sym: list[list[float]] | None = None
    hminus: list[list[float]] | None = None


class SpectrumReport(BaseModel):
    eigenvalues: list[float]
    tags: list[str] | None
    gershgorin: list[Disc]
    matrices: Matrices | None = None

    @computed_field  # type: ignore[misc]
    @property
    def gap(self) -> float | None:
        if len(self.eigenvalues) < 2:
            return None
        return self.eigenvalues[0] - self.eigenvalues[1]


def spectrum_to_model(
    h: Hamiltonian,
    spec: Spectrum,
    reduction: BlockReduction | None = None,
    with_matrices: bool = False,
) -> SpectrumReport:
    matrices = None

    if with_matrices:
        matrices = Matrices(h=h.matrix.tolist())

        if reduction is not None:
            matrices.hplus_asym = reduction.hplus_asym.tolist()
            matrices.hplus_sym = reduction.hplus_sym.tolist()
            matrices.hminus = reduction.hminus.tolist()

    return SpectrumReport(
        eigenvalues=spec.eigenvalues.tolist(),
        tags=[str(tag) for tag in spec.tags] if spec.tags is not None else None,
        gershgorin=[Disc(center=d.center, radius=d.radius) for d in gershgorin_intervals(h)],
        matrices=matrices,
    )


class GapCheck(BaseModel):
    q: float
    m: int
    d: int
    length: int
    lambda1: float
    lambda2: float
    gap: float
    intermediate_rhs: float
    intermediate_holds: bool
    scaled_lhs: float
    scaled_holds: bool
    identity_residual: float
    truncation_error: float
    final_bound: float
    final_holds: bool
    sym_residual: float
    antisym_residual: float


def gap_check_to_model(
    certificate: walks.GapCertificate, sym: walks.WellResidual, antisym: walks.WellResidual
) -> GapCheck:
    return GapCheck(
        q=certificate.q,
        m=certificate.m,
        d=certificate.d,
        length=certificate.length,
        lambda1=certificate.lambda1,
        lambda2=certificate.lambda2,
        gap=certificate.gap,
        intermediate_rhs=certificate.intermediate_rhs,
        intermediate_holds=certificate.intermediate_holds,
        scaled_lhs=certificate.scaled_lhs,
        scaled_holds=certificate.scaled_holds,
        identity_residual=certificate.identity_residual,
        truncation_error=certificate.truncation_error,
        final_bound=certificate.final_bound,
        final_holds=certificate.final_holds,
        sym_residual=sym.sym,
        antisym_residual=antisym.antisym,
    )


class SweepRow(BaseModel):
    q: float
    lambda1: float
    lambda2: float
    gap: float | None
    gap_lower: float
    p_at_tstar: float | None
    fidelity_lower: float | None
    tstar: float | None

    def to_csv_row(self) -> list[str]:
        def serialize(value: float | None) -> str:
            if value is None or not math.isfinite(value):
                return ""
            return f"{value:.17g}"

        return [serialize(value) for value in self.to_dict().values()]
