"""
Admission pipeline: application handler, SLA gate, resource gate, path
computation and allocation.
"""

from topoman.admission.pipeline import (
    SUFFICIENT,
    AdmissionResult,
    ApplicationHandler,
    ExpiryResult,
    ResourceGate,
    Sufficient,
    admit,
    check_resources,
    expire_leases,
)
from topoman.admission.request import (
    Admitted,
    AllocationDecision,
    BelowAdmissionThreshold,
    InsufficientResources,
    Lease,
    Rejected,
    RejectionReason,
    Request,
    SlaBreach,
    reason_code,
)
from topoman.admission.state import ComputeState

__all__ = [
    "SUFFICIENT",
    "AdmissionResult",
    "Admitted",
    "AllocationDecision",
    "ApplicationHandler",
    "BelowAdmissionThreshold",
    "ComputeState",
    "ExpiryResult",
    "InsufficientResources",
    "Lease",
    "Rejected",
    "RejectionReason",
    "Request",
    "ResourceGate",
    "SlaBreach",
    "Sufficient",
    "admit",
    "check_resources",
    "expire_leases",
    "reason_code",
]
