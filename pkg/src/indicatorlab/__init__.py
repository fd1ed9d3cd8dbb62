"""indicatorlab: indicators of angular measures, critical growth types,
density extremals, and randomized point-set classification."""

__version__ = "0.1.0"

from .balance import (CircumData, IntervalSet, TrigCorrection,
                      balanced_modification, build_h_star, circumcenter,
                      coverable_by_sparse_intervals, is_balanced,
                      is_locally_balanced, max_set, superlevel_set,
                      trig_shift_minimax)
from .critical import (MultiplierFn, TypeReport, half_period_average_bound,
                       reducing_multiplier, superlevel_balance_bound,
                       type_report, types_coincide, upper_bound_from_multiplier,
                       zero_set_type)
from .density import (DensityRange, NodeConfig, clipped_density,
                      critical_density_range, density_range,
                      merge_inequality_check, node_envelope,
                      saturated_density_range)
from .errors import (CoverConstructionError, IndicatorLabError, MeasureError,
                     MomentConditionError, PreconditionError)
from .indicator import (IndicatorFn, build_indicator, check_ode,
                        check_trig_convexity, default_resolution, from_callable,
                        indicator_at)
from .measures import AngularMeasure, Order, uniform_measure
from .randomsets import (FockClassification, RadialSequence, RandomSet,
                         classify, dyadic_oscillations, empirical_density_table,
                         lindelof_partial_sums, power_radii, randomize,
                         tail_spread)

__all__ = [name for name in dir() if not name.startswith("_")]
