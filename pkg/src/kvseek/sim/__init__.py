from kvseek.sim.diagnostics import (DiagnosticsEvaluator, check_lyapunov_delta, limsup_metric,
                                    lyapunov_v, psi_diagnostic)
from kvseek.sim.loop import COLUMNS, SimulationResult, initial_field, make_loop, run
from kvseek.sim.scenario import DEFAULTS, Scenario, load_config, load_config_list, scenario

__all__ = [
    "COLUMNS", "DEFAULTS", "DiagnosticsEvaluator", "Scenario", "SimulationResult",
    "check_lyapunov_delta", "initial_field", "limsup_metric", "load_config", "load_config_list",
    "lyapunov_v", "make_loop", "psi_diagnostic", "run", "scenario",
]
