from .quadrature import integrate, integrate_by_winner, winner_regions
from .sphere import (
    Sphere,
    SupportNet,
    feasibility_probe,
    find_inscribed_sphere,
    parametrize_sphere_surface,
    sphere_argmax,
    unit_from_angles,
)
from .synthetic import (
    BinarySigmoid,
    EmpiricalDistribution,
    GroupSynthetic,
    MulticlassSigmoid,
    bayes_binary,
    bayes_diagonal,
    confusion_of_binary_threshold,
    parametrize_boundary_binary,
    rbo_boundary_point,
    rbo_boundary_point_lower,
    smooth_boundary_fit,
)

__all__ = [
    "integrate",
    "integrate_by_winner",
    "winner_regions",
    "Sphere",
    "SupportNet",
    "feasibility_probe",
    "find_inscribed_sphere",
    "parametrize_sphere_surface",
    "sphere_argmax",
    "unit_from_angles",
    "BinarySigmoid",
    "EmpiricalDistribution",
    "GroupSynthetic",
    "MulticlassSigmoid",
    "bayes_binary",
    "bayes_diagonal",
    "confusion_of_binary_threshold",
    "parametrize_boundary_binary",
    "rbo_boundary_point",
    "rbo_boundary_point_lower",
    "smooth_boundary_fit",
]
