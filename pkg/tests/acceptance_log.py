"""Collects one line per acceptance criterion for the terminal summary."""

LINES = []


def record(number, title, passed, elapsed, limit, detail=""):
    status = "PASS" if passed else "FAIL"
    line = f"criterion {number:>2} {status}  {elapsed:6.2f}s (limit {limit:g}s)  {title}"
    if detail:
        line += f"  -- {detail}"
    LINES.append(line)
    print(line)
    return line
