# src/interval/hull_certifier.py
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Dict, List, Optional

from ..analyzer.classifier import classify_m, is_p, is_p0, is_pd, is_psd
from ..analyzer.models.options import HullSettings
from ..analyzer.models.verdict_models import HullVerdict, Verdict, VertexRecord
from ..core.constants import TensorClass, VerdictLabel
from ..core.exceptions import IntervalException, VertexCapException
from ..core.tensor import Tensor
from ..utils.logger import setup_logger
from .hull import IntervalHull, iter_vertices, member_towards, vertex_tensor

STRONG_M_NOTE = ("derived condition: upper endpoint is a Z-tensor and lower endpoint is a strong "
                 "M-tensor; the comparison theorem covers every member")
VERTEX_NOTE = ("vertex reduction: the class holds on the hull iff it holds at every vertex I_z; "
               "exact only where every vertex check is exact")


class HullCertifier:
    """Hull-level certification: endpoint checks for strong M, 2^n vertex checks otherwise."""

    VERTEX_CHECKS: Dict[TensorClass, Callable] = {
        TensorClass.P: is_p,
        TensorClass.P0: is_p0,
        TensorClass.PSD: is_psd,
        TensorClass.PD: is_pd,
    }

    def __init__(self, settings: Optional[HullSettings] = None):
        self.settings = settings or HullSettings()
        self.logger = setup_logger(__name__)

    # -- strong M -------------------------------------------------------------

    def _m_verdict(self, T: Tensor) -> Verdict:
        verdict = classify_m(T, self.settings.spectral, self.settings.tolerances)
        return replace(verdict, tensor_class=TensorClass.STRONG_M)

    def _member_witness(self, label: VerdictLabel, member: Tensor, endpoints: Dict[str, Verdict],
                        interior: bool, note: str, verdict: Optional[Verdict] = None) -> HullVerdict:
        return HullVerdict(
            label=label,
            tensor_class=TensorClass.STRONG_M,
            interior=interior,
            witness_member=member,
            member_verdict=verdict or self._m_verdict(member),
            endpoint_verdicts=endpoints,
            exact=True,
            note=note,
        )

    def hull_is_strong_m(self, h: IntervalHull) -> HullVerdict:
        upper = self._m_verdict(h.upper)
        if upper.label == VerdictLabel.NOT_Z:
            self.logger.info(f"Upper endpoint is not a Z-tensor at {upper.index}")
            return self._member_witness(VerdictLabel.CERTIFIED_NO, h.upper, {'upper': upper}, False,
                                        "upper endpoint is a member outside the Z class", upper)

        lower = self._m_verdict(h.lower)
        endpoints = {'lower': lower, 'upper': upper}
        if lower.label == VerdictLabel.STRONG_M:
            self.logger.info("Hull is contained in the strong M-tensors")
            return HullVerdict(label=VerdictLabel.YES, tensor_class=TensorClass.STRONG_M,
                               endpoint_verdicts=endpoints, exact=lower.exact, note=STRONG_M_NOTE)
        if lower.inconclusive:
            self.logger.warning("Lower endpoint sits on the strong-M boundary within an unconverged bracket")
            return HullVerdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=TensorClass.STRONG_M,
                               endpoint_verdicts=endpoints, note="lower endpoint bracket did not converge")
        return self._member_witness(VerdictLabel.CERTIFIED_NO, h.lower, endpoints, False,
                                    f"lower endpoint classifies {lower.label.value}", lower)

    def _near_lower_not_m(self, h: IntervalHull, endpoints: Dict[str, Verdict]) -> Optional[HullVerdict]:
        """Interior member A + eps(B - A), halving eps until it is no longer an M-tensor."""
        eps = 0.5
        for _ in range(self.settings.sample_attempts):
            member = member_towards(h, eps)
            verdict = self._m_verdict(member)
            if verdict.label in (VerdictLabel.Z_NOT_M, VerdictLabel.NOT_Z):
                return self._member_witness(VerdictLabel.CERTIFIED_NO, member, endpoints, True,
                                            f"interior member at weight {eps!r} is not an M-tensor", verdict)
            eps /= 2
        return None

    def interior_is_strong_m(self, h: IntervalHull) -> HullVerdict:
        lower, upper = self._m_verdict(h.lower), self._m_verdict(h.upper)
        endpoints = {'lower': lower, 'upper': upper}

        if lower.label == VerdictLabel.NOT_Z:
            return self._member_witness(VerdictLabel.CERTIFIED_NO, h.center, endpoints, True,
                                        "lower endpoint has a positive off-diagonal entry; so does the center")
        if upper.label == VerdictLabel.NOT_Z:
            k = upper.index
            a, b = float(h.lower.data[k]), float(h.upper.data[k])
            crossing = -a / (b - a)
            member = member_towards(h, (max(crossing, 0.0) + 1.0) / 2.0)
            return self._member_witness(VerdictLabel.CERTIFIED_NO, member, endpoints, True,
                                        f"interior member is positive at off-diagonal {list(k)}")
        if lower.label == VerdictLabel.Z_NOT_M:
            witness = self._near_lower_not_m(h, endpoints)
            if witness is not None:
                return witness
            return HullVerdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=TensorClass.STRONG_M,
                               interior=True, endpoint_verdicts=endpoints,
                               note="lower endpoint is not M but no interior witness was found")
        if lower.inconclusive or upper.inconclusive:
            return HullVerdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=TensorClass.STRONG_M,
                               interior=True, endpoint_verdicts=endpoints,
                               note="an endpoint bracket did not converge")
        if upper.label == VerdictLabel.STRONG_M:
            self.logger.info("Interior of the hull is contained in the strong M-tensors")
            return HullVerdict(label=VerdictLabel.YES, tensor_class=TensorClass.STRONG_M, interior=True,
                               endpoint_verdicts=endpoints, exact=lower.exact and upper.exact,
                               note="lower endpoint is M and upper endpoint is strong M")
        if upper.label == VerdictLabel.M:
            # C <= B with B on the boundary keeps every member off the strong class
            return self._member_witness(VerdictLabel.CERTIFIED_NO, h.center, endpoints, True,
                                        "upper endpoint is an M-tensor but not strong; so is every member")
        return HullVerdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=TensorClass.STRONG_M,
                           interior=True, endpoint_verdicts=endpoints,
                           note="endpoint classifications are inconsistent within tolerance")

    # -- vertex classes ---------------------------------------------------------

    def _evaluate_vertices(self, h: IntervalHull, cls: TensorClass) -> List[VertexRecord]:
        symmetric = h.order % 2 == 0
        vertices = list(iter_vertices(h, fix_first=symmetric))
        check = self.VERTEX_CHECKS[cls]
        budget = self.settings.budget

        self.logger.info(f"Evaluating {len(vertices)} vertex tensors for {cls.value} "
                         f"with {self.settings.worker_count} workers")
        with ThreadPoolExecutor(max_workers=self.settings.worker_count) as executor:
            verdicts = list(executor.map(lambda item: check(item[1], budget), vertices))

        records = []
        for (z, _), verdict in zip(vertices, verdicts):
            self.logger.debug(f"Vertex {z}: {verdict.label.value}")
            records.append(VertexRecord(z=z, verdict=verdict))
            if symmetric:
                records.append(VertexRecord(z=tuple(-v for v in z), verdict=verdict))
        records.sort(key=lambda record: record.z)
        return records

    def _odd_pd(self, h: IntervalHull) -> HullVerdict:
        z = (1,) * h.dim
        member = vertex_tensor(h, z)
        verdict = is_pd(member, self.settings.budget)
        return HullVerdict(
            label=VerdictLabel.CERTIFIED_NO, tensor_class=TensorClass.PD,
            witness_sign=z, witness_vector=verdict.certificate, witness_member=member,
            member_verdict=verdict, vertex_records=[VertexRecord(z=z, verdict=verdict)],
            vertex_evaluations=1, exact=True, note="odd-order forms are never positive definite",
        )

    def certify_vertices(self, h: IntervalHull, cls: TensorClass) -> HullVerdict:
        if cls not in self.VERTEX_CHECKS:
            raise IntervalException(f"vertex certification does not apply to class {cls.value}")
        if h.dim > self.settings.vertex_cap:
            raise VertexCapException(
                f"dim {h.dim} exceeds the vertex enumeration cap {self.settings.vertex_cap}"
            )
        if cls == TensorClass.PD and h.order % 2 == 1:
            return self._odd_pd(h)

        records = self._evaluate_vertices(h, cls)
        evaluations = len(records) // 2 if h.order % 2 == 0 else len(records)
        failing = [r for r in records if r.verdict.label == VerdictLabel.CERTIFIED_NO]
        if failing:
            first = failing[0]
            self.logger.info(f"{cls.value} fails at vertex {first.z}")
            return HullVerdict(
                label=VerdictLabel.CERTIFIED_NO, tensor_class=cls,
                witness_sign=first.z, witness_vector=first.verdict.certificate,
                witness_member=vertex_tensor(h, first.z), member_verdict=first.verdict,
                vertex_records=records, vertex_evaluations=evaluations,
                exact=first.verdict.exact, note=VERTEX_NOTE,
            )
        undecided = [r.z for r in records if r.verdict.label != VerdictLabel.YES]
        if not undecided:
            return HullVerdict(label=VerdictLabel.YES, tensor_class=cls, vertex_records=records,
                               vertex_evaluations=evaluations, exact=True, note=VERTEX_NOTE)
        self.logger.warning(f"{cls.value}: {len(undecided)} vertices undecided")
        return HullVerdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=cls,
                           vertex_records=records, inconclusive_vertices=undecided,
                           vertex_evaluations=evaluations, note=VERTEX_NOTE)

    def certify(self, h: IntervalHull, cls: TensorClass, interior: bool = False) -> HullVerdict:
        if cls in (TensorClass.M, TensorClass.STRONG_M):
            return self.interior_is_strong_m(h) if interior else self.hull_is_strong_m(h)
        return self.certify_vertices(h, cls)


def hull_is_strong_m(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).hull_is_strong_m(h)


def interior_is_strong_m(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).interior_is_strong_m(h)


def hull_is_p(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).certify_vertices(h, TensorClass.P)


def hull_is_p0(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).certify_vertices(h, TensorClass.P0)


def hull_is_psd(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).certify_vertices(h, TensorClass.PSD)


def hull_is_pd(h: IntervalHull, settings: Optional[HullSettings] = None) -> HullVerdict:
    return HullCertifier(settings).certify_vertices(h, TensorClass.PD)
