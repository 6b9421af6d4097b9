"""pipir: kinematics, singularity and workspace analysis for a 3-PRPiR
multi-operation-mode parallel robot."""

from .model import (BOUNDARY_TOL, ConfigurationError, ConstraintSystem,
                    DesignParams, JointInput, LegConstraint, OperationMode,
                    OPERATION_MODES, PointSet, Pose, PRESETS, build_system,
                    leg_points, normalize_angle, operation_mode, residuals,
                    validate_pose)
from .kinematics import (CollinearCentersError, ConcentricCirclesError,
                         DegenerateEquationError, FkSolution, FkSolutionSet,
                         IndeterminateAngleError, UnreachablePoseError,
                         WorkingMode, all_working_modes, boundary_legs,
                         enumerate_ik, forward_kinematics, intersect_circles,
                         inverse_kinematics, leg_quadratics, solve_linear_trig,
                         trilaterate)
from .singularity import (JacobianPair, OffManifoldError, SingularityVerdict,
                          classify, jacobians, parallel_factor_values,
                          serial_condition_values)
from .workspace import (AspectLabeling, GridMap, GridSpec, ModeTransition,
                        NoSignChangeError, TransitionReport, count_regions,
                        find_boundary_root, holes_by_region, home_line_pose,
                        home_pose, jointspace_map, jointspace_spec,
                        label_aspects, region_labels, transition_report,
                        workspace_map, workspace_spec)

__version__ = "0.1.0"
