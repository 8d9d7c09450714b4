"""Exception types shared across the package."""


class YMError(Exception):
    """Base class for all package errors."""


class InvalidArgument(YMError, ValueError):
    pass


class AdmissibilityError(YMError, ValueError):
    """A Clebsch-Gordan rule is violated (empty Hom space)."""


class DivergentSeriesError(YMError, ValueError):
    """A heat-kernel series was requested at non-positive area."""


class SingularityError(YMError, ValueError):
    """Evaluation point (or a finite-difference stencil) hits a root hyperplane."""


class StructureError(YMError, ValueError):
    """Malformed cell structure of a surface with a graph."""


class SchemaError(YMError, ValueError):
    """Unparseable or schema-violating surface file."""
