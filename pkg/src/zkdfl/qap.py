"""R1CS to QAP reduction.

Constraint i is attached to the domain point omega^i of the smallest
power-of-two domain holding all rows. Per-variable polynomials A_j, B_j, C_j
are never materialised as coefficients: their evaluations on the domain are
the matrix columns, so evaluating them at a secret point is a column sum
weighted by the Lagrange basis, and the prover only needs the row products.
"""

from __future__ import annotations

from .curve.fft import Domain
from .curve.field import FR_GENERATOR, R_SCALAR
from .errors import ArgumentError
from .r1cs import ConstraintSystem


class Qap:
    def __init__(self, cs: ConstraintSystem):
        if cs.num_constraints == 0:
            raise ArgumentError("cannot build a QAP from a system with no constraints")
        if not cs.record:
            raise ArgumentError("QAP needs a system with recorded rows")
        self.cs = cs
        self.num_constraints = cs.num_constraints
        self.num_public = cs.num_public
        self.num_variables = cs.num_variables
        self.domain = Domain.for_size(self.num_constraints)

    @property
    def degree(self):
        """Domain size, i.e. the degree of the target polynomial t(x) = x^n - 1."""
        return self.domain.size

    def target_at(self, x):
        return self.domain.vanishing(x)

    def target_coeffs(self):
        n = self.degree
        return [R_SCALAR - 1] + [0] * (n - 1) + [1]

    def evaluations(self, j):
        """(A_j, B_j, C_j) as evaluation vectors on the domain."""
        n = self.degree
        out = []
        for m in (self.cs.a, self.cs.b, self.cs.c):
            ev = [0] * n
            for i in range(m.num_rows):
                for col, c in m.row(i):
                    if col == j:
                        ev[i] = (ev[i] + c) % R_SCALAR
            out.append(ev)
        return tuple(out)

    def evaluate_at(self, tau):
        """Per-variable values A_j(tau), B_j(tau), C_j(tau) and t(tau)."""
        lag = self.domain.lagrange_at(tau)
        nv = self.num_variables
        ua = self.cs.a.column_sums(lag, nv)
        va = self.cs.b.column_sums(lag, nv)
        wa = self.cs.c.column_sums(lag, nv)
        return ua, va, wa, self.target_at(tau)

    def row_values(self, assignment):
        return self.cs.evaluate_rows([int(v) % R_SCALAR for v in assignment])

    def quotient(self, assignment):
        """Coefficients of h(x) = (A(x)B(x) - C(x)) / t(x), length n - 1.

        Computed on the coset g*H, where t is the constant g^n - 1. The result
        is only meaningful (exact) for satisfying assignments.
        """
        az, bz, cz = self.row_values(assignment)
        return self._quotient_from_rows(az, bz, cz)

    def _quotient_from_rows(self, az, bz, cz):
        d = self.domain
        n = d.size
        a = d.coset_fft(d.ifft(az))
        b = d.coset_fft(d.ifft(bz))
        c = d.coset_fft(d.ifft(cz))
        zinv = pow((pow(FR_GENERATOR, n, R_SCALAR) - 1) % R_SCALAR, -1, R_SCALAR)
        h_ev = [(x * y - z) * zinv % R_SCALAR for x, y, z in zip(a, b, c)]
        h = d.coset_ifft(h_ev)
        return h[: n - 1]

    def polys(self, assignment):
        """Coefficient vectors of A(x), B(x), C(x) for an assignment."""
        d = self.domain
        az, bz, cz = self.row_values(assignment)
        return d.ifft(az), d.ifft(bz), d.ifft(cz)

    def divide(self, assignment):
        """Exact division of A(x)B(x) - C(x) by t(x): returns (quotient, remainder).

        The remainder is zero exactly when every constraint row holds.
        """
        n = self.degree
        big = Domain(2 * n)
        az, bz, cz = self.row_values(assignment)
        d = self.domain
        a, b, c = d.ifft(az), d.ifft(bz), d.ifft(cz)
        prod = big.ifft([x * y % R_SCALAR for x, y in zip(big.fft(a), big.fft(b))])
        p = [(x - (c[i] if i < n else 0)) % R_SCALAR for i, x in enumerate(prod)]
        # divide by x^n - 1 from the top
        quot = [0] * n
        for k in range(2 * n - 1, n - 1, -1):
            coef = p[k]
            if coef:
                quot[k - n] = (quot[k - n] + coef) % R_SCALAR
                p[k - n] = (p[k - n] + coef) % R_SCALAR
                p[k] = 0
        return quot[: n - 1], p[:n]


def to_qap(cs: ConstraintSystem) -> Qap:
    return Qap(cs)
