# src/analyzer/models/verdict_models.py
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ...core.constants import TensorClass, VerdictLabel
from ...core.tensor import Tensor


@dataclass(frozen=True)
class ZSplit:
    s: float
    D: Tensor


@dataclass
class Verdict:
    label: VerdictLabel
    tensor_class: TensorClass
    margin: Optional[float] = None
    certificate: Optional[np.ndarray] = None
    bracket: Optional[Tuple[float, float]] = None
    s: Optional[float] = None
    value: Optional[float] = None
    index: Optional[Tuple[int, ...]] = None
    exact: bool = False
    inconclusive: bool = False
    method: str = ""
    detail: str = ""

    @property
    def is_certified_no(self) -> bool:
        return self.label in (VerdictLabel.CERTIFIED_NO, VerdictLabel.NOT_Z, VerdictLabel.Z_NOT_M)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'class': self.tensor_class.value,
            'label': self.label.value,
            'margin': self.margin,
            'bracket': None if self.bracket is None else list(self.bracket),
            's': self.s,
            'value': self.value,
            'certificate': None if self.certificate is None else self.certificate.tolist(),
            'index': None if self.index is None else list(self.index),
            'exact': self.exact,
            'inconclusive': self.inconclusive,
            'method': self.method,
            'detail': self.detail,
        }


@dataclass
class VertexRecord:
    z: Tuple[int, ...]
    verdict: Verdict

    def to_dict(self) -> Dict[str, Any]:
        return {'z': list(self.z), **self.verdict.to_dict()}


@dataclass
class HullVerdict:
    label: VerdictLabel
    tensor_class: TensorClass
    interior: bool = False
    witness_sign: Optional[Tuple[int, ...]] = None
    witness_vector: Optional[np.ndarray] = None
    witness_member: Optional[Tensor] = None
    member_verdict: Optional[Verdict] = None
    vertex_records: List[VertexRecord] = field(default_factory=list)
    endpoint_verdicts: Dict[str, Verdict] = field(default_factory=dict)
    inconclusive_vertices: List[Tuple[int, ...]] = field(default_factory=list)
    vertex_evaluations: int = 0
    exact: bool = False
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            'class': self.tensor_class.value,
            'label': self.label.value,
            'interior': self.interior,
            'witness_sign': None if self.witness_sign is None else list(self.witness_sign),
            'witness_vector': None if self.witness_vector is None else self.witness_vector.tolist(),
            'witness_member': None if self.witness_member is None else self.witness_member.entries.tolist(),
            'member_verdict': None if self.member_verdict is None else self.member_verdict.to_dict(),
            'vertex_records': [record.to_dict() for record in self.vertex_records],
            'endpoint_verdicts': {name: v.to_dict() for name, v in self.endpoint_verdicts.items()},
            'inconclusive_vertices': [list(z) for z in self.inconclusive_vertices],
            'vertex_evaluations': self.vertex_evaluations,
            'exact': self.exact,
            'note': self.note,
        }
