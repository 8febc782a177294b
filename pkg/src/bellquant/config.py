"""Central numerical tolerances.

Every threshold used by the library lives here so ensemble runs can be
tightened or relaxed from one place.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    unit_trace: float = 1e-10
    renorm_warning: float = 1e-6
    # relative to the largest Schmidt coefficient
    schmidt_rank: float = 1e-10
    sign_zero: float = 1e-10
    separable: float = 1e-8
    concurrence_forms: float = 1e-9
    spectrum_bound: float = 1e-9
    imag_residue: float = 1e-10
    pauli_imag_residue: float = 1e-12
    root_cluster: float = 1e-7
    nullity: float = 1e-8
    monotone_fail: float = 1e-9

    def with_schmidt_rank(self, tol: float) -> "Tolerances":
        return replace(self, schmidt_rank=tol)


DEFAULT_TOLERANCES = Tolerances()
