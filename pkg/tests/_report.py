"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES: list = []


def record(name: str, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} {name}: {detail}"
    LINES.append(line)
    print(line)
