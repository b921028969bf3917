"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

RESULTS = {}


class Criterion:
    """Context manager: records PASS if the block completes, FAIL otherwise."""

    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.details = []

    def note(self, text):
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.details)
        if exc_type is not None and exc is not None and str(exc):
            detail = (detail + "; " if detail else "") + str(exc).splitlines()[0][:160]
        RESULTS[self.number] = f"criterion {self.number} {status}: {self.title}" + (f" ({detail})" if detail else "")
        return False
