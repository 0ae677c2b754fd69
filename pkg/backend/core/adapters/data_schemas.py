from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional
import json

import numpy as np

from core.exceptions import RecordFormatError
from core.models import HarmonicVector, SymTensor, TensorSet

ORDERING = "lex-v1"


class RecordKind(Enum):
    """Kinds of JSON records, stored in their `kind` field"""
    TENSORS = "tensors"
    HARMONICS = "harmonics"
    MEASURE = "measure"
    BODY = "body"
    RESULT = "result"


def plain(value: Any) -> Any:
    """Recursively turn numpy scalars/arrays and tuples into JSON-native values"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    return value


def dump_record(record: Dict) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline"""
    return json.dumps(plain(record), indent=2, sort_keys=True) + "\n"


def _require(data: Dict, key: str, source: Optional[str]) -> Any:
    if key not in data:
        raise RecordFormatError(f"missing field {key!r}", source, key)
    return data[key]


def _check_ordering(data: Dict, source: Optional[str]) -> None:
    ordering = data.get('ordering', ORDERING)
    if ordering != ORDERING:
        raise RecordFormatError(
            f"unsupported ordering {ordering!r}, expected {ORDERING!r}", source, 'ordering'
        )


@dataclass
class TensorRecord:
    """
    Surface tensors up to rank s_o.

    `values` is the phi vector (ranks s_o - 1 and s_o); `tensors` holds the
    distinct components of every stored rank in lexicographic order.
    """
    n: int
    s_o: int
    values: List[float]
    tensors: Dict[str, List[float]] = field(default_factory=dict)
    scaled: bool = False

    @classmethod
    def from_tensor_set(cls, tensors: TensorSet) -> 'TensorRecord':
        return cls(
            n=tensors.dim,
            s_o=tensors.max_rank,
            values=tensors.vector().tolist(),
            tensors={str(rank): tensors.tensors[rank].values().tolist()
                     for rank in sorted(tensors.tensors)},
            scaled=tensors.scaled,
        )

    def to_tensor_set(self, source: Optional[str] = None) -> TensorSet:
        try:
            if self.tensors:
                built = {int(rank): SymTensor.from_values(self.n, int(rank),
                                                         np.asarray(values, dtype=float),
                                                         self.scaled)
                         for rank, values in self.tensors.items()}
                return TensorSet(self.n, self.s_o, built, self.scaled)
            return TensorSet.from_vector(self.n, self.s_o, np.asarray(self.values, dtype=float),
                                         self.scaled)
        except (TypeError, ValueError) as e:
            raise RecordFormatError(str(e), source, 'tensors') from e

    def to_dict(self) -> Dict:
        return {
            'kind': RecordKind.TENSORS.value,
            'n': self.n,
            's_o': self.s_o,
            'ordering': ORDERING,
            'scaled': self.scaled,
            'values': self.values,
            'tensors': self.tensors,
        }

    @classmethod
    def from_dict(cls, data: Dict, source: Optional[str] = None) -> 'TensorRecord':
        _check_ordering(data, source)
        try:
            return cls(
                n=int(_require(data, 'n', source)),
                s_o=int(_require(data, 's_o', source)),
                values=[float(v) for v in data.get('values', [])],
                tensors={str(k): [float(x) for x in v]
                         for k, v in data.get('tensors', {}).items()},
                scaled=bool(data.get('scaled', False)),
            )
        except RecordFormatError:
            raise
        except (TypeError, ValueError, AttributeError) as e:
            raise RecordFormatError(str(e), source, 'tensors') from e


@dataclass
class HarmonicRecord:
    """Harmonic intrinsic volumes up to degree s_o, ordered (k asc, j asc)"""
    n: int
    s_o: int
    values: List[float]

    @classmethod
    def from_vector(cls, vector: HarmonicVector) -> 'HarmonicRecord':
        return cls(vector.dim, vector.max_degree, vector.values.tolist())

    def to_vector(self, source: Optional[str] = None) -> HarmonicVector:
        try:
            return HarmonicVector(self.n, self.s_o, np.asarray(self.values, dtype=float))
        except ValueError as e:
            raise RecordFormatError(str(e), source, 'values') from e

    def to_dict(self) -> Dict:
        return {
            'kind': RecordKind.HARMONICS.value,
            'n': self.n,
            's_o': self.s_o,
            'ordering': ORDERING,
            'values': self.values,
        }

    @classmethod
    def from_dict(cls, data: Dict, source: Optional[str] = None) -> 'HarmonicRecord':
        _check_ordering(data, source)
        try:
            return cls(
                n=int(_require(data, 'n', source)),
                s_o=int(_require(data, 's_o', source)),
                values=[float(v) for v in _require(data, 'values', source)],
            )
        except RecordFormatError:
            raise
        except (TypeError, ValueError) as e:
            raise RecordFormatError(str(e), source, 'values') from e
