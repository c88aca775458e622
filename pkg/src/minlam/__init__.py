"""Embedded minimal disks with prescribed curvature concentration.

Build hierarchical nets on a compact subset of the unit interval, sum
holomorphic concentrator data over them, immerse the resulting strip domains
through the Weierstrass representation, and certify the construction's
structural claims numerically at desk scale.
"""

from .compactset import (
    CompactSetSpec,
    MaterializedSet,
    NetHierarchy,
    audit_nets,
    build_nets,
    closest_net_point,
    materialize_set,
)
from .errors import (
    DomainError,
    GridError,
    MinlamError,
    QuadratureError,
    ValidationError,
)
from .profile import (
    DomainProfile,
    ParameterGrid,
    Params,
    domain_contains,
    profile_height,
    sample_domain,
    strip_height,
)
from .analytic import (
    HolomorphicField,
    field_eval,
    kernel,
    kernel_primitive,
    kernel_primitive_quadrature,
    oscillation_bounds,
    radius_recursion,
    radius_scalars,
)
from .immersion import (
    SurfaceMesh,
    WeierstrassSurface,
    build_mesh,
    discrete_mean_curvature,
    gauss_data,
    immerse_point,
    tangent_frame,
)
from .verify import VerificationReport
from .cli import RunConfig, export_mesh, load_config, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "CompactSetSpec", "MaterializedSet", "NetHierarchy",
    "audit_nets", "build_nets", "closest_net_point", "materialize_set",
    "Params", "DomainProfile", "ParameterGrid",
    "profile_height", "strip_height", "domain_contains", "sample_domain",
    "HolomorphicField", "field_eval", "kernel",
    "kernel_primitive", "kernel_primitive_quadrature",
    "oscillation_bounds", "radius_scalars", "radius_recursion",
    "WeierstrassSurface", "SurfaceMesh", "build_mesh",
    "immerse_point", "tangent_frame", "gauss_data", "discrete_mean_curvature",
    "VerificationReport",
    "RunConfig", "load_config", "run_pipeline", "export_mesh",
    "MinlamError", "ValidationError", "DomainError", "QuadratureError", "GridError",
    "__version__",
]
