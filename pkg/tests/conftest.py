"""Shared test configuration.

Hypothesis runs derandomized so the suite is reproducible in CI; deadlines
are disabled because simulation-backed properties have variable runtimes.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=100,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")
