from typing import Dict, Any
from datetime import datetime


class RunReporter:
    """Collect per-command results into text or JSON reports"""

    def __init__(self, title: str = "refstate run"):
        self.title = title
        self.start_time = None
        self.end_time = None
        self.results = {}

    def set_start_time(self):
        """Record the start time of the run"""
        self.start_time = datetime.now()

    def set_end_time(self):
        """Record the end time of the run"""
        self.end_time = datetime.now()

    def add_result(self, name: str, result: Dict[str, Any]):
        """Add a named result; a falsy 'ok' entry marks it as failed"""
        self.results[name] = result

    def generate_summary_report(self) -> str:
        """Generate a human-readable summary report"""
        if not self.start_time:
            self.start_time = datetime.now()
        if not self.end_time:
            self.end_time = datetime.now()

        duration = self.end_time - self.start_time

        report_lines = []
        report_lines.append("=" * 50)
        report_lines.append(f"  {self.title}")
        report_lines.append("=" * 50)
        report_lines.append(f"Started:   {self.start_time.strftime('%Y-%m-%d %H:%M:%S')}")
        report_lines.append(f"Completed: {self.end_time.strftime('%Y-%m-%d %H:%M:%S')}")
        report_lines.append(f"Duration:  {self._format_duration(duration.total_seconds())}")
        report_lines.append("")

        passed = 0
        for name, result in self.results.items():
            ok = result.get('ok', True)
            status_symbol = "✓" if ok else "✗"
            report_lines.append(f"{status_symbol} {name}")
            for key, value in result.items():
                if key in ('ok', 'violations'):
                    continue
                report_lines.append(f"    {key}: {value}")
            for violation in result.get('violations', [])[:10]:
                report_lines.append(f"    - {violation}")
            if ok:
                passed += 1

        report_lines.append("-" * 50)
        report_lines.append(f"Summary: {passed}/{len(self.results)} passed")
        report_lines.append("=" * 50)

        return "\n".join(report_lines)

    def _format_duration(self, seconds: float) -> str:
        """Format duration in a human-readable way"""
        if seconds < 60:
            return f"{seconds:.1f}s"
        elif seconds < 3600:
            minutes = int(seconds // 60)
            secs = seconds % 60
            return f"{minutes}m {secs:.0f}s"
        else:
            hours = int(seconds // 3600)
            minutes = int((seconds % 3600) // 60)
            return f"{hours}h {minutes}m"

    def generate_json_report(self) -> Dict[str, Any]:
        """Generate a JSON-serializable report"""
        if not self.start_time:
            self.start_time = datetime.now()
        if not self.end_time:
            self.end_time = datetime.now()

        duration = self.end_time - self.start_time

        return {
            'title': self.title,
            'start_time': self.start_time.isoformat(),
            'end_time': self.end_time.isoformat(),
            'duration_seconds': duration.total_seconds(),
            'results': self.results,
            'summary': {
                'total': len(self.results),
                'passed': sum(1 for result in self.results.values() if result.get('ok', True)),
                'failed': sum(1 for result in self.results.values() if not result.get('ok', True))
            }
        }
