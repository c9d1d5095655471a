"""Inter-valley coupling and valley-qubit dynamics in a silicon quantum dot."""

__version__ = "0.1.0"

from .decoherence import PhononModel, decoherence_time, fig7_tables, phonon_rate  # noqa: E402
from .dot import DotSpec, make_basis, oscillatory_kernel  # noqa: E402
from .qubit import (  # noqa: E402
    PseudoSpinState,
    QubitModel,
    effective_hamiltonian,
    evolve,
    operation_budget,
    pulse_protocol,
    rabi_frequency,
    tunneling_amplitude,
)
from .solver import (  # noqa: E402
    EigensolverError,
    ValleyOrderError,
    assemble,
    coupling_sweep,
    cross_axis_coupling,
    find_anticrossing,
    splitting_and_coupling,
    sweep_field,
)
from .two_qubit import (  # noqa: E402
    CoulombModel,
    TwoQubitModel,
    coulomb_matrix_element,
    evolve_closed_form,
    evolve_exact,
    hamiltonian4,
    swap_protocol,
)
from .units import SILICON, SiliconParams, UnitError, convert  # noqa: E402
from .valley import BandModel, coupling_I, coupling_J, valley_set  # noqa: E402

__all__ = [
    "BandModel", "CoulombModel", "DotSpec", "EigensolverError", "PhononModel", "PseudoSpinState",
    "QubitModel", "SILICON", "SiliconParams", "TwoQubitModel", "UnitError", "ValleyOrderError",
    "assemble", "convert", "coulomb_matrix_element", "coupling_I", "coupling_J", "coupling_sweep",
    "cross_axis_coupling", "decoherence_time", "effective_hamiltonian", "evolve",
    "evolve_closed_form", "evolve_exact", "fig7_tables", "find_anticrossing", "hamiltonian4",
    "make_basis", "operation_budget", "oscillatory_kernel", "phonon_rate", "pulse_protocol",
    "rabi_frequency", "splitting_and_coupling", "swap_protocol", "sweep_field",
    "tunneling_amplitude", "valley_set",
]
