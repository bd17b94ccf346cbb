import logging
from typing import Any, Callable, Iterable, Optional, Sequence, Tuple

from krall_laguerre.models.certificate import Certificate
from krall_laguerre.monitoring.commands import CERTIFICATES_CHECKED

_LOGGER = logging.getLogger(__name__)

# A check returns None when the identity holds, a description of the mismatch otherwise.
Check = Callable[[Any], Optional[str]]


def certify(
    claim: str, bounds: Tuple[int, int], indices: Iterable[Any], check: Check, **details: Any
) -> Certificate:
    """
    Run a check over the given indices, stopping at the first failure.

    :param claim: the identifier of the identity being checked.
    :param bounds: the inclusive index range reported in the certificate.
    :param indices: the indices to check, in order.
    :param check: the per-index check.
    :param details: extra information recorded in the certificate.
    :return: the certificate, carrying the first failing index as witness.
    """
    for index in indices:
        if (mismatch := check(index)) is not None:
            _LOGGER.warning(
                "Certificate failed.", extra=dict(claim=claim, witness=index, mismatch=mismatch)
            )
            CERTIFICATES_CHECKED.labels(claim, False).inc()
            return Certificate(
                claim=claim,
                range=bounds,
                passed=False,
                witness=index,
                details=dict(details, mismatch=mismatch),
            )
    CERTIFICATES_CHECKED.labels(claim, True).inc()
    return Certificate(claim=claim, range=bounds, passed=True, details=dict(details))


def combine(claim: str, certificates: Sequence[Certificate], **details: Any) -> Certificate:
    """
    :return: a certificate passing iff all the given ones pass, witnessed by the first failure.
    """
    lows = [certificate.range[0] for certificate in certificates] or [0]
    highs = [certificate.range[1] for certificate in certificates] or [0]
    failed = next((certificate for certificate in certificates if not certificate.passed), None)
    return Certificate(
        claim=claim,
        range=(min(lows), max(highs)),
        passed=failed is None,
        witness=None if failed is None else {"claim": failed.claim, "witness": failed.witness},
        details=dict(details, parts=[certificate.claim for certificate in certificates]),
    )
