# src/analyzer/certificates.py
"""Self-contained certificates and their offline re-verification.

Every payload embeds the tensor(s) it speaks about, so a report can be re-checked
without the inputs that produced it.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.constants import CertificateKind, TensorClass, VerdictLabel
from ..core.exceptions import CertificateException, TensorToolException
from ..core.tensor import Tensor, diagonal_mask, form_value, is_z_tensor, new_dense
from ..interval.hull import IntervalHull, contains, hull_new
from ..utils.logger import setup_logger
from .classifier import z_split
from .form_search import p_objective
from .models.verdict_models import HullVerdict, Verdict
from .spectral import cw_bounds, cw_lower

logger = setup_logger(__name__)

VERIFY_REL_TOL = 1e-9
# largest slack s - rho(D) a not-strong-M claim may lean on
NOT_STRONG_SLACK = 1e-8

VIOLATION_KINDS = {
    TensorClass.PSD: CertificateKind.PSD_VIOLATION,
    TensorClass.PD: CertificateKind.PD_VIOLATION,
    TensorClass.P: CertificateKind.P_VIOLATION,
    TensorClass.P0: CertificateKind.P0_VIOLATION,
}


@dataclass
class Certificate:
    kind: CertificateKind
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, **self.payload}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        if not isinstance(data, dict) or 'kind' not in data:
            raise CertificateException("certificate entry must be an object with a 'kind'")
        try:
            kind = CertificateKind(data['kind'])
        except ValueError:
            raise CertificateException(f"unknown certificate kind {data['kind']!r}")
        return cls(kind=kind, payload={k: v for k, v in data.items() if k != 'kind'})


def tensor_payload(T: Tensor) -> Dict[str, Any]:
    return {'order': T.order, 'dim': T.dim, 'entries': T.entries.tolist()}


def _tensor_from(payload: Dict[str, Any], key: Optional[str] = None) -> Tensor:
    try:
        source = payload[key] if key else payload
        return new_dense(int(source['order']), int(source['dim']), source['entries'])
    except (KeyError, TypeError) as e:
        raise CertificateException(f"certificate tensor payload is malformed: {e}")


def _vector_from(payload: Dict[str, Any], T: Tensor) -> np.ndarray:
    try:
        x = np.asarray(payload['x'], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise CertificateException(f"certificate vector is malformed: {e}")
    if x.shape != (T.dim,):
        raise CertificateException(f"certificate vector has length {x.size}, expected {T.dim}")
    return x


def _scale(T: Tensor) -> float:
    return VERIFY_REL_TOL * max(1.0, float(np.abs(T.data).max()))


# -- construction -------------------------------------------------------------

def _m_certificates(verdict: Verdict, A: Tensor) -> List[Certificate]:
    base = {'tensor': tensor_payload(A)}
    if verdict.label == VerdictLabel.NOT_Z:
        return [Certificate(CertificateKind.NOT_Z, {**base, 'index': list(verdict.index)})]
    if verdict.certificate is None:
        return []
    y = verdict.certificate.tolist()
    if verdict.label == VerdictLabel.Z_NOT_M:
        return [Certificate(CertificateKind.NOT_M, {**base, 'x': y})]
    if verdict.label == VerdictLabel.M and not verdict.inconclusive:
        slack = (verdict.s - verdict.bracket[0]) if verdict.bracket else 0.0
        return [Certificate(CertificateKind.NOT_STRONG_M, {**base, 'x': y, 'tolerance': max(slack, 0.0)})]
    if verdict.label == VerdictLabel.STRONG_M and np.all(verdict.certificate > 0):
        split = z_split(A)
        _, hi = cw_bounds(split.D, verdict.certificate)
        if hi < split.s:
            return [Certificate(CertificateKind.STRONG_M, {**base, 'x': y})]
    return []


def certificates_for(verdict: Verdict, A: Tensor) -> List[Certificate]:
    """Certificates backing a single-tensor verdict (none for unproven claims)."""
    if verdict.tensor_class in (TensorClass.M, TensorClass.STRONG_M):
        return _m_certificates(verdict, A)
    if verdict.label == VerdictLabel.CERTIFIED_NO and verdict.certificate is not None:
        payload = {'tensor': tensor_payload(A), 'x': verdict.certificate.tolist(), 'value': verdict.value}
        return [Certificate(VIOLATION_KINDS[verdict.tensor_class], payload)]
    return []


def hull_certificates(result: HullVerdict, hull: IntervalHull) -> List[Certificate]:
    certificates: List[Certificate] = []
    if result.witness_member is not None:
        certificates.append(Certificate(CertificateKind.HULL_MEMBER, {
            'lower': tensor_payload(hull.lower),
            'upper': tensor_payload(hull.upper),
            'member': tensor_payload(result.witness_member),
            'interior': result.interior,
        }))
        if result.member_verdict is not None:
            certificates.extend(certificates_for(result.member_verdict, result.witness_member))
    if result.label == VerdictLabel.YES and result.tensor_class == TensorClass.STRONG_M:
        certificates.append(Certificate(CertificateKind.Z_TENSOR, {'tensor': tensor_payload(hull.upper)}))
        for name, endpoint in (('lower', hull.lower), ('upper', hull.upper)):
            verdict = result.endpoint_verdicts.get(name)
            if verdict is not None and verdict.label == VerdictLabel.STRONG_M:
                certificates.extend(certificates_for(verdict, endpoint))
    return certificates


# -- verification -------------------------------------------------------------

def _check_psd(payload) -> Tuple[bool, str]:
    T = _tensor_from(payload, 'tensor')
    value = form_value(T, _vector_from(payload, T))
    return value < 0, f"form value Ax^m = {value!r} {'<' if value < 0 else 'is not <'} 0"


def _normalized(x: np.ndarray, ord) -> Optional[np.ndarray]:
    """x scaled to unit norm, None for the zero vector."""
    norm = float(np.linalg.norm(x, ord=ord))
    if not np.isfinite(norm) or norm == 0.0:
        return None
    return x / norm


def _check_pd(payload) -> Tuple[bool, str]:
    # the tolerance is absolute, so it only means something on the unit sphere
    T = _tensor_from(payload, 'tensor')
    x = _normalized(_vector_from(payload, T), 2)
    if x is None:
        return False, "witness vector is zero"
    value = form_value(T, x)
    ok = value <= _scale(T)
    return ok, f"form value Ax^m = {value!r} at unit x {'<=' if ok else 'is not <='} 0"


def _check_p(payload) -> Tuple[bool, str]:
    T = _tensor_from(payload, 'tensor')
    x = _normalized(_vector_from(payload, T), np.inf)
    if x is None:
        return False, "witness vector is zero"
    value = p_objective(T, x)
    ok = value <= _scale(T)
    return ok, f"max_i x_i(Ax^(m-1))_i = {value!r} at unit max-norm x {'<=' if ok else 'is not <='} 0"


def _check_p0(payload) -> Tuple[bool, str]:
    T = _tensor_from(payload, 'tensor')
    value = p_objective(T, _vector_from(payload, T), nonzero_only=True)
    ok = value < 0
    return ok, f"max over x_i != 0 of x_i(Ax^(m-1))_i = {value!r} {'<' if ok else 'is not <'} 0"


def _check_not_z(payload) -> Tuple[bool, str]:
    T = _tensor_from(payload, 'tensor')
    index = tuple(int(i) for i in payload.get('index', ()))
    if len(index) != T.order or any(i < 0 or i >= T.dim for i in index):
        return False, f"index {list(index)} is not a valid entry index"
    if diagonal_mask(T.order, T.dim)[index]:
        return False, f"index {list(index)} is on the diagonal"
    value = float(T.data[index])
    return value > 0, f"off-diagonal entry at {list(index)} is {value!r} {'>' if value > 0 else 'is not >'} 0"


def _split_and_vector(payload) -> Tuple[float, Tensor, np.ndarray]:
    T = _tensor_from(payload, 'tensor')
    split = z_split(T)
    return split.s, split.D, _vector_from(payload, T)


def _check_not_m(payload) -> Tuple[bool, str]:
    s, D, y = _split_and_vector(payload)
    lower = cw_lower(D, y)
    return lower > s, f"rho(D) >= {lower!r} {'>' if lower > s else 'is not >'} s = {s!r}"


def _check_not_strong_m(payload) -> Tuple[bool, str]:
    s, D, y = _split_and_vector(payload)
    tolerance = float(payload.get('tolerance', 0.0))
    if tolerance > NOT_STRONG_SLACK * max(1.0, abs(s)):
        return False, f"slack {tolerance!r} is too large to support a boundary claim"
    lower = cw_lower(D, y)
    ok = lower >= s - tolerance - VERIFY_REL_TOL * max(1.0, abs(s))
    return ok, f"rho(D) >= {lower!r} {'>=' if ok else 'is not >='} s - {tolerance!r} with s = {s!r}"


def _check_strong_m(payload) -> Tuple[bool, str]:
    s, D, y = _split_and_vector(payload)
    if not np.all(y > 0):
        return False, "strong-M certificate needs a strictly positive vector"
    _, upper = cw_bounds(D, y)
    return upper < s, f"rho(D) <= {upper!r} {'<' if upper < s else 'is not <'} s = {s!r}"


def _check_z_tensor(payload) -> Tuple[bool, str]:
    ok = is_z_tensor(_tensor_from(payload, 'tensor'))
    return ok, "every off-diagonal entry is <= 0" if ok else "a positive off-diagonal entry exists"


def _check_hull_member(payload) -> Tuple[bool, str]:
    hull = hull_new(_tensor_from(payload, 'lower'), _tensor_from(payload, 'upper'))
    interior = bool(payload.get('interior', False))
    ok = contains(hull, _tensor_from(payload, 'member'), interior=interior)
    where = "interior of the hull" if interior else "hull"
    return ok, f"member {'lies' if ok else 'does not lie'} in the {where}"


CHECKS: Dict[CertificateKind, Callable[[Dict[str, Any]], Tuple[bool, str]]] = {
    CertificateKind.PSD_VIOLATION: _check_psd,
    CertificateKind.PD_VIOLATION: _check_pd,
    CertificateKind.P_VIOLATION: _check_p,
    CertificateKind.P0_VIOLATION: _check_p0,
    CertificateKind.NOT_Z: _check_not_z,
    CertificateKind.NOT_M: _check_not_m,
    CertificateKind.NOT_STRONG_M: _check_not_strong_m,
    CertificateKind.STRONG_M: _check_strong_m,
    CertificateKind.Z_TENSOR: _check_z_tensor,
    CertificateKind.HULL_MEMBER: _check_hull_member,
}


def check_certificate(certificate: Certificate) -> Tuple[bool, str]:
    """Re-evaluate the certified inequality directly; malformed payloads fail with a message."""
    try:
        ok, message = CHECKS[certificate.kind](certificate.payload)
    except TensorToolException as e:
        ok, message = False, str(e)
    logger.debug(f"{certificate.kind.value}: {'ok' if ok else 'FAILED'} - {message}")
    return bool(ok), f"{certificate.kind.value}: {message}"
