from pseudosched.dband.agents import palette
from pseudosched.dband.analysis import BoundsVerdict, DependencyCycle, check_color_bounds, find_dependency_cycles
from pseudosched.dband.messages import Message, MessageKind
from pseudosched.dband.runtime import POLICIES, RunConfig, SimulationRun, run_dband

__all__ = [
    'BoundsVerdict', 'DependencyCycle', 'Message', 'MessageKind', 'POLICIES', 'RunConfig',
    'SimulationRun', 'check_color_bounds', 'find_dependency_cycles', 'palette', 'run_dband',
]
