# src/reporting/report_writer.py
import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from ..utils.logger import setup_logger


class ReportWriter:
    def __init__(self, indent: int = 2):
        self.indent = indent
        self.logger = setup_logger(__name__)

    def save_json_report(self, data: Dict[str, Any], path: Union[str, Path]) -> str:
        """
        Save a report as UTF-8 JSON

        Args:
            data: Report dictionary (numpy values, enums and dataclasses allowed)
            path: Target file; parent directories are created

        Returns:
            Path to the saved JSON file
        """
        try:
            file_path = Path(path)
            file_path.parent.mkdir(parents=True, exist_ok=True)

            # Make sure data is JSON serializable
            serializable_data = self._make_serializable(data)

            with open(file_path, 'w', encoding='utf-8') as f:
                json.dump(serializable_data, f, indent=self.indent, ensure_ascii=False)
                f.write("\n")

            self.logger.info(f"JSON report saved to: {file_path}")
            return str(file_path)

        except Exception as e:
            self.logger.error(f"Failed to save JSON report: {e}")
            raise

    def save_excel_report(self, report: Dict[str, Any], path: Union[str, Path]) -> str:
        """
        Save the tabular parts of a report as an Excel workbook

        Sheets: Summary (flattened results), Vertices (one row per vertex record),
        Certificates (one row per certificate).
        """
        try:
            file_path = Path(path)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            data = self._make_serializable(report)

            with pd.ExcelWriter(file_path, engine='openpyxl') as writer:
                summary = self._prepare_summary_data(data)
                pd.DataFrame([summary]).to_excel(writer, sheet_name="Summary", index=False)

                vertices = self._prepare_vertex_data(data.get('results', {}))
                if vertices:
                    pd.DataFrame(vertices).to_excel(writer, sheet_name="Vertices", index=False)

                certificates = self._prepare_certificate_data(data.get('certificates', []))
                if certificates:
                    pd.DataFrame(certificates).to_excel(writer, sheet_name="Certificates", index=False)

            self.logger.info(f"Excel report saved to: {file_path}")
            return str(file_path)

        except Exception as e:
            self.logger.error(f"Failed to save Excel report: {e}")
            raise

    def _prepare_summary_data(self, report: Dict[str, Any]) -> Dict[str, Any]:
        """Prepare summary data for Excel export"""
        summary = {key: report.get(key) for key in ('tool', 'version', 'command', 'seed')}
        results = {k: v for k, v in report.get('results', {}).items() if k != 'vertex_records'}
        summary.update(self._flatten_dict(results, 'result'))
        return summary

    def _prepare_vertex_data(self, results: Dict[str, Any]) -> List[Dict[str, Any]]:
        rows = []
        for record in results.get('vertex_records', []) or []:
            rows.append({
                'z': str(record.get('z')),
                'label': record.get('label'),
                'value': record.get('value'),
                'method': record.get('method'),
                'exact': record.get('exact'),
                'inconclusive': record.get('inconclusive'),
                'certificate': str(record.get('certificate')),
            })
        return rows

    def _prepare_certificate_data(self, certificates: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        return [
            {'index': i, 'kind': cert.get('kind'), 'x': str(cert.get('x')), 'value': cert.get('value')}
            for i, cert in enumerate(certificates)
        ]

    def _flatten_dict(self, data: Dict[str, Any], parent_key: str = '',
                      sep: str = '_') -> Dict[str, Any]:
        """Flatten nested dictionary for Excel export"""
        items = []
        for k, v in data.items():
            new_key = f"{parent_key}{sep}{k}" if parent_key else k
            if isinstance(v, dict):
                items.extend(self._flatten_dict(v, new_key, sep=sep).items())
            elif isinstance(v, list):
                # Convert lists to string for Excel
                items.append((new_key, str(v)))
            else:
                items.append((new_key, v))
        return dict(items)

    def _make_serializable(self, obj: Any) -> Any:
        """Convert non-serializable objects to serializable formats"""
        if isinstance(obj, dict):
            return {str(k): self._make_serializable(v) for k, v in obj.items()}
        elif isinstance(obj, (list, tuple)):
            return [self._make_serializable(item) for item in obj]
        elif isinstance(obj, np.ndarray):
            return self._make_serializable(obj.tolist())
        elif isinstance(obj, np.generic):
            return self._make_serializable(obj.item())
        elif isinstance(obj, float) and not np.isfinite(obj):
            return None
        elif isinstance(obj, Enum):
            return obj.value
        elif isinstance(obj, (str, int, float, bool)) or obj is None:
            return obj
        elif hasattr(obj, 'to_dict'):
            return self._make_serializable(obj.to_dict())
        elif is_dataclass(obj):
            return self._make_serializable(asdict(obj))
        else:
            # Convert to string as fallback
            return str(obj)
