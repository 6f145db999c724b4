from .tensor_service import CommandOutcome, TensorAnalysisService, hull_exit_code, verdict_exit_code

__all__ = ['CommandOutcome', 'TensorAnalysisService', 'hull_exit_code', 'verdict_exit_code']
