# src/utils/file_utils.py
"""TensorFile reading and writing.

A tensor file is UTF-8 JSON:

    {"order": 3, "dim": 2, "format": "dense", "entries": [1.0, 0.0, ...]}
    {"order": 3, "dim": 2, "format": "coo", "entries": [{"idx": [0, 1, 1], "val": 5.0}]}

Dense entries are row-major (first index slowest). COO entries are 0-based and unique;
unlisted entries are zero. Floats are written with repr so parse(emit(T)) == T exactly.
"""
import json
import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.constants import TensorFileFormat
from ..core.exceptions import TensorFileParseException
from ..core.tensor import Tensor, new_dense
from .logger import setup_logger

logger = setup_logger(__name__)


class CooEntry(BaseModel):
    model_config = ConfigDict(extra='forbid')

    idx: List[int]
    val: float


class TensorFile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    order: int = Field(ge=1)
    dim: int = Field(ge=1)
    format: TensorFileFormat
    entries: Union[List[float], List[CooEntry]]

    @model_validator(mode='after')
    def _check_entries(self) -> "TensorFile":
        if self.format == TensorFileFormat.DENSE:
            if any(isinstance(e, CooEntry) for e in self.entries):
                raise ValueError("dense entries must be numbers")
            expected = self.dim ** self.order
            if len(self.entries) != expected:
                raise ValueError(f"expected {expected} entries, got {len(self.entries)}")
            values = self.entries
        else:
            if any(not isinstance(e, CooEntry) for e in self.entries):
                raise ValueError("coo entries must be objects with 'idx' and 'val'")
            seen = set()
            for entry in self.entries:
                index = tuple(entry.idx)
                if len(index) != self.order:
                    raise ValueError(f"coo index {list(index)} must have {self.order} components")
                if any(i < 0 or i >= self.dim for i in index):
                    raise ValueError(f"coo index {list(index)} out of range for dim {self.dim}")
                if index in seen:
                    raise ValueError(f"duplicate coo index {list(index)}")
                seen.add(index)
            values = [e.val for e in self.entries]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("entries must be finite reals")
        return self

    def to_tensor(self) -> Tensor:
        if self.format == TensorFileFormat.DENSE:
            return new_dense(self.order, self.dim, self.entries)
        data = np.zeros((self.dim,) * self.order)
        for entry in self.entries:
            data[tuple(entry.idx)] = entry.val
        return Tensor(data)


def _locate(text: str, key: Optional[str]) -> Tuple[Optional[int], Optional[int]]:
    """1-based line and column of the first occurrence of a JSON key."""
    if not key:
        return None, None
    offset = text.find(f'"{key}"')
    if offset < 0:
        return None, None
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def parse_tensor(text: str) -> Tensor:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFileParseException(f"invalid JSON: {e.msg}", e.lineno, e.colno)
    if not isinstance(raw, dict):
        raise TensorFileParseException("tensor file must hold a JSON object", 1, 1)
    try:
        model = TensorFile.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        message = str(error['msg']).removeprefix("Value error, ")
        field = str(error['loc'][0]) if error['loc'] else 'entries'
        line, column = _locate(text, field)
        if line is None:
            line, column = 1, 1
        location = ".".join(str(part) for part in error['loc'])
        raise TensorFileParseException(f"{message}" + (f" at {location}" if location else ""), line, column)
    return model.to_tensor()


def _number(value: float) -> str:
    return json.dumps(float(value))


def emit_tensor(T: Tensor, fmt: Union[str, TensorFileFormat] = TensorFileFormat.DENSE) -> str:
    fmt = TensorFileFormat(fmt)
    lines = ['{', f'  "order": {T.order},', f'  "dim": {T.dim},', f'  "format": "{fmt.value}",']
    if fmt == TensorFileFormat.DENSE:
        lines.append('  "entries": [' + ", ".join(_number(v) for v in T.entries) + ']')
    else:
        nonzero = [tuple(int(i) for i in index) for index in np.argwhere(T.data != 0)]
        items = [f'    {{"idx": [{", ".join(str(i) for i in index)}], "val": {_number(T.data[index])}}}'
                 for index in nonzero]
        lines.append('  "entries": [' + ("\n" + ",\n".join(items) + "\n  " if items else "") + ']')
    lines.append('}')
    return "\n".join(lines) + "\n"


def read_tensor_file(path: Union[str, Path]) -> Tensor:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise TensorFileParseException(f"cannot read {path}: {e.strerror or e}")
    try:
        tensor = parse_tensor(text)
    except TensorFileParseException as e:
        raise TensorFileParseException(f"{path}: {str(e).split(' (line ')[0]}", e.line, e.column)
    logger.debug(f"Read tensor order={tensor.order} dim={tensor.dim} from {path}")
    return tensor


def write_tensor_file(path: Union[str, Path], T: Tensor,
                      fmt: Union[str, TensorFileFormat] = TensorFileFormat.DENSE) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_tensor(T, fmt), encoding='utf-8')
    logger.info(f"Tensor written to: {path}")
    return str(path)
