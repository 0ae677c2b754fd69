"""
File Formats

JSON records for tensors, harmonic vectors, measures, bodies and results, OFF
meshes for polytopes and CSV tables, behind one auto-detecting factory.
"""

from core.adapters.adapter_factory import AdapterFactory
from core.adapters.base_adapter import RecordAdapter
from core.adapters.data_schemas import (
    HarmonicRecord,
    RecordKind,
    TensorRecord,
    dump_record,
)
from core.adapters.json_adapter import JsonRecordAdapter
from core.adapters.off_adapter import OffAdapter
from core.adapters.table_adapter import TableAdapter

__all__ = [
    'AdapterFactory',
    'HarmonicRecord',
    'JsonRecordAdapter',
    'OffAdapter',
    'RecordAdapter',
    'RecordKind',
    'TableAdapter',
    'TensorRecord',
    'dump_record',
]
