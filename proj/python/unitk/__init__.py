"""Projective planes of order 16 and their unitals."""

from ._core import (
    BoundsError,
    ConfigError,
    ContractError,
    DomainError,
    Error,
    ParseError,
    Plane,
    ResourceError,
    ShapeError,
    build_pg2,
    certificate,
    classify,
    dual,
    embedded_catalog,
    embedded_catalog_text,
    find_unitals,
    group_order,
    hermitian_unital,
    is_unital,
    load_plane,
    parse_unital_catalog,
    run_cli,
    stabilizer_order,
    tangent_secant_counts,
    validate_design,
    write_native,
)

__version__ = "0.1.0"
