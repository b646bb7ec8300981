"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class PropagationDiagnosticError(RuntimeError):
    """A propagation invariant failed (trace drift, negativity, norm growth).

    Carries the first offending time in ``time_fs``.
    """

    def __init__(self, message, time_fs):
        super().__init__(f"{message} (t = {time_fs:.6g} fs)")
        self.time_fs = time_fs


class InsufficientPropagationError(RuntimeError):
    """The recorded dipole signal has not decayed enough for a clean transform."""


class SchemaError(ValueError):
    """A configuration document violates the published schema.

    ``path`` points at the offending entry, e.g. ``$.gamma2_star``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
