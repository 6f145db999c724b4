import hashlib
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..core.constants import TOOL_NAME, TOOL_VERSION


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's bytes"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def input_digests(paths: Dict[str, Union[str, Path]]) -> Dict[str, Dict[str, str]]:
    return {name: {'path': str(path), 'sha256': file_digest(path)} for name, path in paths.items()}


def build_report(command: str, argv: Sequence[str], seed: Optional[int],
                 inputs: Dict[str, Union[str, Path]], results: Dict[str, Any],
                 certificates: List[Dict[str, Any]], timing: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    """Machine report; timing is left out entirely when None so reruns compare byte-for-byte"""
    report = {
        'tool': TOOL_NAME,
        'version': TOOL_VERSION,
        'command': command,
        'argv': list(argv),
        'seed': seed,
        'inputs': input_digests(inputs),
        'results': results,
        'certificates': certificates,
    }
    if timing is not None:
        report['timing'] = {
            **timing,
            'timestamp': time.strftime('%Y-%m-%d %H:%M:%S'),
        }
    return report


def create_error_report(command: str, argv: Sequence[str], error: str) -> Dict[str, Any]:
    """Create error report when a command fails"""
    return {
        'tool': TOOL_NAME,
        'version': TOOL_VERSION,
        'command': command,
        'argv': list(argv),
        'results': {},
        'certificates': [],
        'error': error,
        'metadata': {
            'timestamp': time.strftime('%Y-%m-%d %H:%M:%S'),
        },
    }
