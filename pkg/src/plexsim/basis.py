"""Product basis for n two-level dots and one truncated bosonic mode.

Flat index convention: the plasmon quantum number is the slowest index,
then dot 1, dot 2, ... with each dot contributing one bit (0 ground,
1 excited):

    index(s, q) = s * 2**n_dots + sum_j q_j * 2**(n_dots - j)

so the global ground state sits at index 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class BasisDescriptor:
    n_dots: int
    n_pl: int

    @property
    def dim(self):
        return self.n_pl * 2 ** self.n_dots

    def index_of(self, s, qs):
        """Flat index of the state with plasmon number ``s`` and dot bits ``qs``."""
        qs = tuple(qs)
        if not 0 <= s < self.n_pl:
            raise InvalidArgumentError(f"plasmon quantum number {s} outside 0..{self.n_pl - 1}")
        if len(qs) != self.n_dots or any(q not in (0, 1) for q in qs):
            raise InvalidArgumentError(f"need {self.n_dots} dot occupations of 0 or 1")
        idx = s
        for q in qs:
            idx = idx * 2 + q
        return idx

    def state_of(self, index):
        """Inverse of :meth:`index_of`; returns ``(s, qs)``."""
        if not 0 <= index < self.dim:
            raise InvalidArgumentError(f"index {index} outside 0..{self.dim - 1}")
        qs = []
        for _ in range(self.n_dots):
            qs.append(index % 2)
            index //= 2
        return index, tuple(reversed(qs))

    def states(self):
        """All basis states in flat-index order."""
        return [self.state_of(i) for i in range(self.dim)]

    def plasmon_numbers(self):
        """Array of the plasmon quantum number of every basis state."""
        return np.array([self.state_of(i)[0] for i in range(self.dim)], dtype=float)

    def dot_occupations(self, j):
        """Array of the occupation of dot ``j`` (1-based) for every basis state."""
        if not 1 <= j <= self.n_dots:
            raise InvalidArgumentError(f"dot index {j} outside 1..{self.n_dots}")
        return np.array([self.state_of(i)[1][j - 1] for i in range(self.dim)], dtype=float)

    def unit_vector(self, s, qs):
        """Basis vector |s, q1..qn> as a complex amplitude array."""
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index_of(s, qs)] = 1.0
        return vec


def build_basis(n_dots, n_pl):
    """Basis for ``n_dots`` two-level dots and ``n_pl`` plasmon Fock states."""
    if n_dots < 1:
        raise InvalidArgumentError("n_dots must be >= 1")
    if n_pl < 2:
        raise InvalidArgumentError("n_pl must be >= 2")
    return BasisDescriptor(n_dots=int(n_dots), n_pl=int(n_pl))
