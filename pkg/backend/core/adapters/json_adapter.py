"""
JSON records: tensors, harmonics, measure, body and result.
"""

import json
from typing import Any, Dict

from core.adapters.base_adapter import RecordAdapter
from core.adapters.data_schemas import (
    HarmonicRecord,
    RecordKind,
    TensorRecord,
    dump_record,
)
from core.exceptions import RecordFormatError
from core.models import BodySpec, DiscreteMeasure, HarmonicVector, TensorSet
from core.reconstruct.algorithms import ReconstructionResult


class JsonRecordAdapter(RecordAdapter):
    """Reads and writes the JSON record kinds, dispatching on `kind`"""

    format_name = "json"
    extensions = (".json",)

    def parse(self, text: str, source: str = "<string>") -> Any:
        """
        Returns:
            TensorSet, HarmonicVector, DiscreteMeasure, BodySpec, or the raw dict
            of a result record
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise RecordFormatError(e.msg, source, f"line {e.lineno}, column {e.colno}") from e
        if not isinstance(data, dict):
            raise RecordFormatError("top level must be a JSON object", source)
        return self.from_dict(data, source)

    def from_dict(self, data: Dict, source: str = "<string>") -> Any:
        kind = data.get('kind')
        if kind is None:
            # Body files may omit the discriminator
            if 'type' in data:
                return BodySpec.from_dict(data, source)
            raise RecordFormatError("missing field 'kind'", source, 'kind')
        try:
            kind = RecordKind(kind)
        except ValueError:
            raise RecordFormatError(f"unknown record kind {kind!r}", source, 'kind') from None

        if kind is RecordKind.TENSORS:
            return TensorRecord.from_dict(data, source).to_tensor_set(source)
        if kind is RecordKind.HARMONICS:
            return HarmonicRecord.from_dict(data, source).to_vector(source)
        if kind is RecordKind.MEASURE:
            try:
                return DiscreteMeasure.from_dict(data)
            except RecordFormatError as e:
                raise RecordFormatError(str(e), source) from e
        if kind is RecordKind.BODY:
            return BodySpec.from_dict(data, source)
        return data

    def to_dict(self, obj: Any) -> Dict:
        if isinstance(obj, TensorSet):
            return TensorRecord.from_tensor_set(obj).to_dict()
        if isinstance(obj, HarmonicVector):
            return HarmonicRecord.from_vector(obj).to_dict()
        if isinstance(obj, DiscreteMeasure):
            return {'kind': RecordKind.MEASURE.value, **obj.to_dict()}
        if isinstance(obj, BodySpec):
            return obj.to_dict()
        if isinstance(obj, ReconstructionResult):
            return obj.to_dict()
        if isinstance(obj, dict):
            return obj
        raise TypeError(f"No JSON record for {type(obj).__name__}")

    def render(self, obj: Any) -> str:
        return dump_record(self.to_dict(obj))
