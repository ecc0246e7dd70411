from netimmune_core.lib.pareto.objects import DL_TOL, ObjectivePoint, as_point, dominates, weakly_dominates
from netimmune_core.lib.pareto.front import AttainmentCurve, Front, nondominated_filter
from netimmune_core.lib.pareto.indicators import (
    first_attainment_curve,
    hv_contribution_2d,
    hypervolume_2d,
    objective_array,
)
from netimmune_core.lib.pareto.io import (
    FRONT_COLUMNS,
    read_front,
    read_front_csv,
    read_front_json,
    write_front,
    write_front_csv,
    write_front_json,
)
