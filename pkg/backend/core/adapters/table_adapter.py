import io

import pandas as pd

from core.adapters.base_adapter import RecordAdapter
from core.exceptions import RecordFormatError


class TableAdapter(RecordAdapter):
    """CSV tables of experiments and agreement checks"""

    format_name = "csv"
    extensions = (".csv",)

    def parse(self, text: str, source: str = "<string>") -> pd.DataFrame:
        try:
            return pd.read_csv(io.StringIO(text))
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise RecordFormatError(str(e), source) from e

    def render(self, table: pd.DataFrame) -> str:
        if not isinstance(table, pd.DataFrame):
            raise TypeError(f"CSV tables hold DataFrames, got {type(table).__name__}")
        return table.to_csv(index=False, float_format="%.12g", lineterminator="\n")
