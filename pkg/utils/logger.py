import logging
import sys
from pathlib import Path
from typing import Optional, Dict, Any


class RefstateLogger:
    def __init__(self, log_level: str = "INFO", log_file: Optional[str] = None):
        self.logger = logging.getLogger("refstate")
        self.logger.setLevel(getattr(logging, log_level.upper()))

        if not self.logger.handlers:
            self._setup_handlers(log_file)

    def _setup_handlers(self, log_file: Optional[str]):
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # stdout is reserved for DIMACS, proofs and JSON reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)

            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def debug(self, message: str):
        self.logger.debug(message)

    def log_generation_start(self, formula: str, params: Dict[str, Any]):
        rendered = ", ".join(f"{key}={value}" for key, value in params.items())
        self.info(f"Generating {formula} ({rendered})")

    def log_generation_complete(self, formula: str, num_vars: int, num_clauses: int):
        self.info(f"Wrote {formula}: {num_vars} variables, {num_clauses} clauses")

    def log_check_result(self, kind: str, ok: bool, violations: int = 0):
        if ok:
            self.info(f"{kind} check passed")
        else:
            self.error(f"{kind} check failed with {violations} violation(s)")

    def log_trial_batch(self, done: int, total: int):
        self.debug(f"Completed {done}/{total} trials")


def get_logger(log_level: str = "INFO", log_file: Optional[str] = None) -> RefstateLogger:
    """Get a configured logger instance"""
    return RefstateLogger(log_level, log_file)
