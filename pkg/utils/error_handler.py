import logging
import traceback
from typing import Optional, Dict, Any, Callable, Tuple
from functools import wraps


class RefstateError(Exception):
    """Base exception for refstate errors"""
    pass


class ConfigurationError(RefstateError):
    """Configuration-related errors"""
    pass


class ParseError(RefstateError):
    """Malformed DIMACS, proof or model text"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PivotMissing(RefstateError):
    """Resolution pivot absent from a premise with the required sign"""
    pass


class RepairFailure(RefstateError):
    """Restricted proof step could not be re-justified"""
    pass


class InvalidProof(RefstateError):
    """A proof handed to a construction does not check"""
    pass


class FatClause(RefstateError):
    """A clause mentions every variable, so no fresh variable exists"""
    pass


class TautologicalStep(RefstateError):
    """A proof step holds a tautological clause"""
    pass


class TautologicalCell(RefstateError):
    """A levelled cell holds a tautological clause"""
    pass


class NotSatisfying(RefstateError):
    """An assignment falsifies a clause it was expected to satisfy"""

    def __init__(self, message: str, clause=None):
        self.clause = clause
        super().__init__(message)


class ParamError(RefstateError):
    """Parameters outside the supported range"""
    pass


class LayoutError(RefstateError):
    """Index or variable outside a variable layout"""
    pass


class PreconditionFailed(RefstateError):
    """A construction was called on input it is not defined for"""
    pass


class AvoidSetExhausted(RefstateError):
    """Every premise column on the child level is blocked"""

    def __init__(self, message: str, sizes: Optional[Dict[str, int]] = None):
        self.sizes = sizes or {}
        super().__init__(message)


EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class ErrorHandler:
    """Centralized error reporting for the command line"""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.error_counts = {}

    def handle_config_error(self, error: Exception, config_path: str) -> Dict[str, Any]:
        """Handle configuration errors with helpful suggestions"""
        self.logger.error(f"Configuration error in {config_path}: {error}")

        suggestions = []
        error_msg = str(error).lower()

        if "not found" in error_msg:
            suggestions.append(f"Create config file at {config_path}")
            suggestions.append("Use --config to specify a different config file")
        elif "yaml" in error_msg or "syntax" in error_msg:
            suggestions.append("Check YAML syntax in config file")
            suggestions.append("Ensure proper indentation and no tabs")
        elif "layout" in error_msg:
            suggestions.append("Unset REFSTATE_LAYOUT_VERSION or set it to a supported version")
        elif "must" in error_msg or "invalid" in error_msg:
            suggestions.append("Check section names and value types in config file")
            suggestions.append("See config.yaml example for reference")

        return self._record('configuration', error, suggestions, recoverable=True)

    def handle_parse_error(self, error: ParseError, source: str) -> Dict[str, Any]:
        """Handle malformed input files"""
        self.logger.error(f"Could not parse {source}: {error}")

        suggestions = []
        error_msg = str(error).lower()
        if "header" in error_msg or "p cnf" in error_msg:
            suggestions.append("DIMACS files must start with 'p cnf <vars> <clauses>'")
        elif "terminat" in error_msg:
            suggestions.append("Every clause line must end with 0")
        elif "justification" in error_msg:
            suggestions.append("Proof lines end with 'I <m>', 'R <v> <w> <pivot>' or 'W <u>'")

        info = self._record('parse', error, suggestions, recoverable=False)
        info['source'] = source
        info['line_number'] = error.line_number
        return info

    def handle_parameter_error(self, error: Exception) -> Dict[str, Any]:
        """Handle parameter and precondition errors"""
        self.logger.error(f"Invalid parameters: {error}")

        suggestions = []
        if isinstance(error, FatClause):
            suggestions.append("Declare at least one more variable than the widest clause uses")
        elif isinstance(error, AvoidSetExhausted):
            suggestions.append("Run 'regime' to see whether 10pt + 4w < t/4 holds")
        elif isinstance(error, PreconditionFailed):
            suggestions.append("Check the restriction with 'check-rho' first")

        return self._record('parameters', error, suggestions, recoverable=False)

    def handle_check_failure(self, kind: str, report) -> Dict[str, Any]:
        """Summarize a failed proof or witness check"""
        self.logger.warning(f"{kind} check failed with {len(report.violations)} violation(s)")
        first = report.violations[0] if report.violations else None
        return {
            'error_type': 'check',
            'error_message': str(first) if first else f"{kind} check failed",
            'suggestions': [],
            'recoverable': False,
        }

    def get_exit_code(self, error: Exception) -> int:
        """Map an exception to the command line exit code"""
        if isinstance(error, (NotSatisfying, InvalidProof)):
            return EXIT_VIOLATION
        if isinstance(error, RefstateError):
            return EXIT_USAGE
        return EXIT_VIOLATION

    def log_error_summary(self, errors: list):
        """Log a summary of all errors encountered"""
        if not errors:
            return

        self.logger.error(f"Encountered {len(errors)} error(s) during execution:")

        error_types = {}
        for error in errors:
            error_type = error.get('error_type', 'unknown')
            error_types[error_type] = error_types.get(error_type, 0) + 1

        for error_type, count in error_types.items():
            self.logger.error(f"  {error_type}: {count} error(s)")

    def _record(self, error_type: str, error: Exception, suggestions: list,
                recoverable: bool) -> Dict[str, Any]:
        self.error_counts[error_type] = self.error_counts.get(error_type, 0) + 1
        return {
            'error_type': error_type,
            'error_message': str(error),
            'suggestions': suggestions,
            'recoverable': recoverable
        }


def handle_exception(func: Callable):
    """Decorator for comprehensive exception handling"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SystemExit:
            raise
        except Exception as e:
            logger = logging.getLogger(__name__)
            logger.error(f"Unhandled exception in {func.__name__}: {e}")
            logger.debug(f"Traceback: {traceback.format_exc()}")
            raise
    return wrapper
