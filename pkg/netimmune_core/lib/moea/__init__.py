from netimmune_core.lib.moea.evaluation import Evaluator, RunResult, default_reference_point, evaluate
from netimmune_core.lib.moea.hybrid import make_hybrid_init
from netimmune_core.lib.moea.nsga2 import nsga2_run
from netimmune_core.lib.moea.sms_emoa import sms_emoa_run
from netimmune_core.lib.moea.sorting import crowding_distance, nondominated_sort, rank_and_crowding
from netimmune_core.lib.pareto import hv_contribution_2d


def run_ga(g, costs, config, init=None, **kwargs) -> RunResult:
    """Dispatch on config.algorithm."""
    if config.algorithm == "sms_emoa":
        return sms_emoa_run(g, costs, config, init, **kwargs)
    return nsga2_run(g, costs, config, init, **kwargs)
