"""Verifiers that assemble every term of the Hardy, Rellich and CKN statements."""
from .ckn import verify_ckn
from .fundamental import FundamentalReport, fundamental_inequality_suite
from .hardy import (verify_hardy_b, verify_hardy_c, verify_high_l2, verify_high_lp,
                    verify_ibp_identity, verify_l2_identity, verify_lp_identity,
                    verify_unified_hardy)
from .limits import verify_chains, verify_log_limits
from .params import CknParams, HardyParams, resolve_ckn_params
from .rellich import verify_radial_lower_bound, verify_rellich_l2, verify_rellich_lp
from .report import Status, VerificationReport, reports_to_csv

__all__ = [
    "CknParams", "FundamentalReport", "HardyParams", "Status", "VerificationReport",
    "fundamental_inequality_suite", "reports_to_csv", "resolve_ckn_params", "verify_chains",
    "verify_ckn", "verify_hardy_b", "verify_hardy_c", "verify_high_l2", "verify_high_lp",
    "verify_ibp_identity", "verify_l2_identity", "verify_log_limits", "verify_lp_identity",
    "verify_radial_lower_bound", "verify_rellich_l2", "verify_rellich_lp", "verify_unified_hardy",
]
