from prometheus_client import Counter

from krall_laguerre.models.enums import NAMESPACE, Subsystem

COMMAND_RUNS = Counter(
    namespace=NAMESPACE,
    subsystem=Subsystem.CLI.value,
    name="command_runs",
    labelnames=("command", "exit_code"),
    documentation="Number of command runs, by exit code.",
)

CERTIFICATES_CHECKED = Counter(
    namespace=NAMESPACE,
    subsystem=Subsystem.CERTIFICATES.value,
    name="certificates_checked",
    labelnames=("claim", "passed"),
    documentation="Number of certificates produced, by claim and outcome.",
)

OPERATORS_CONSTRUCTED = Counter(
    namespace=NAMESPACE,
    subsystem=Subsystem.OPERATORS.value,
    name="operators_constructed",
    labelnames=("construction",),
    documentation="Number of eigen-operators built, by construction method.",
)
