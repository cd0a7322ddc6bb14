import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "qline", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", parent=settings.get_profile("qline"), max_examples=500)
settings.load_profile(os.environ.get("QLINE_HYPOTHESIS_PROFILE", "qline"))

# one line per acceptance criterion, collected by test_acceptance
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
