"""Biased quantum wire with floating thermoelectric probes.

NEGF transport, floating-probe solvers and entropy accounting; the heavy
lifting lives in the compiled extension.
"""

from ._joulewire import (  # noqa: F401
    K_BOLTZMANN,
    CouplingRegime,
    DeficitFit,
    DeficitResult,
    DistributionCurve,
    EnergyGrid,
    EntropyReport,
    FermiState,
    FloatingProblem,
    GreensBundle,
    ProbeMethod,
    ProbeSolution,
    ProfileTable,
    RatioRow,
    ResistanceFitResult,
    ShareRow,
    ShareTable,
    SingleProbeAnalytic,
    SweepSpec,
    Terminal,
    TerminalCurrents,
    TerminalKind,
    TransmissionMatrix,
    WireModel,
    apply_probe_solution,
    default_distribution_grid,
    deficit_fit,
    distribution_snapshots,
    entropy_deficit,
    entropy_deficit_all,
    fermi_entropy_density,
    fermi_occupation,
    floating_chain_resistance,
    greens_at,
    joule_report,
    joule_report_exact,
    lead_broadening,
    local_distribution,
    make_floating_problem,
    make_terminals,
    probe_entropy_injection,
    probe_entropy_shares,
    profiles,
    resistance_scan,
    single_probe_analytic,
    solve_floating_exact,
    solve_floating_sommerfeld,
    solve_potentials,
    solve_temperatures,
    surface_green,
    sweep_ratio,
    transmission_at,
)

__version__ = "0.1.0"
