"""Rank-1 constraint systems.

Variable 0 is the constant one, public inputs follow as a contiguous prefix,
then private witness variables. Each row states <A,z> * <B,z> = <C,z>.

A system can run in two modes. With ``record=True`` (default) rows are stored
in three CSR matrices; with ``record=False`` only the assignment is computed,
which lets the same circuit-building code produce a fresh witness for an
already-compiled topology without paying for the rows again.
"""

from __future__ import annotations

from array import array

from .curve.field import R_SCALAR, Fr
from .errors import ArgumentError, OrderingError

ONE_INDEX = 0

KIND_ONE = "one"
KIND_PUBLIC = "public"
KIND_WITNESS = "witness"


class Variable:
    """Handle to an allocated variable; arithmetic on it yields linear combinations."""

    __slots__ = ("index", "kind")

    def __init__(self, index, kind):
        self.index = index
        self.kind = kind

    def lc(self):
        return LinearCombination({self.index: 1})

    def __add__(self, other):
        return self.lc() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.lc() - other

    def __rsub__(self, other):
        return LinearCombination.of(other) - self.lc()

    def __mul__(self, k):
        return self.lc() * k

    __rmul__ = __mul__

    def __neg__(self):
        return self.lc() * -1

    def __repr__(self):
        return f"Variable({self.index}, {self.kind})"

    def __eq__(self, other):
        return isinstance(other, Variable) and other.index == self.index

    def __hash__(self):
        return hash(self.index)


class LinearCombination:
    """Sparse sum of coefficient * variable; zero coefficients are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for idx, c in terms.items():
                c = int(c) % R_SCALAR
                if c:
                    self.terms[idx] = c

    @classmethod
    def of(cls, x):
        if isinstance(x, LinearCombination):
            return x
        if isinstance(x, Variable):
            return x.lc()
        if isinstance(x, int):
            return cls({ONE_INDEX: x})
        if isinstance(x, (list, tuple)):
            out = cls()
            for var, c in x:
                idx = var.index if isinstance(var, Variable) else int(var)
                out._add_term(idx, c)
            return out
        raise ArgumentError(f"cannot build a linear combination from {type(x).__name__}")

    def _add_term(self, idx, c):
        v = (self.terms.get(idx, 0) + int(c)) % R_SCALAR
        if v:
            self.terms[idx] = v
        else:
            self.terms.pop(idx, None)

    def copy(self):
        out = LinearCombination()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        out = self.copy()
        for idx, c in LinearCombination.of(other).terms.items():
            out._add_term(idx, c)
        return out

    __radd__ = __add__

    def __sub__(self, other):
        out = self.copy()
        for idx, c in LinearCombination.of(other).terms.items():
            out._add_term(idx, -c)
        return out

    def __rsub__(self, other):
        return LinearCombination.of(other) - self

    def __mul__(self, k):
        k = int(k) % R_SCALAR
        out = LinearCombination()
        if k:
            out.terms = {idx: c * k % R_SCALAR for idx, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __len__(self):
        return len(self.terms)

    def items(self):
        return list(self.terms.items())

    def evaluate(self, values):
        return sum(c * values[i] for i, c in self.terms.items()) % R_SCALAR

    def __repr__(self):
        return "LC(" + " + ".join(f"{c}*v{i}" for i, c in self.terms.items()) + ")"


class SparseMatrix:
    """Row-major CSR storage for one of the A/B/C matrices."""

    __slots__ = ("ptr", "cols", "coeffs")

    def __init__(self):
        self.ptr = array("Q", [0])
        self.cols = array("I")
        self.coeffs = []

    def append_row(self, terms):
        for idx, c in terms:
            self.cols.append(idx)
            self.coeffs.append(c)
        self.ptr.append(len(self.cols))

    @property
    def num_rows(self):
        return len(self.ptr) - 1

    @property
    def nnz(self):
        return len(self.cols)

    def row(self, i):
        lo, hi = self.ptr[i], self.ptr[i + 1]
        return list(zip(self.cols[lo:hi], self.coeffs[lo:hi]))

    def mul_vec(self, z):
        """[<row_i, z>] for every row."""
        ptr, cols, coeffs = self.ptr, self.cols, self.coeffs
        out = [0] * self.num_rows
        lo = 0
        for i in range(self.num_rows):
            hi = ptr[i + 1]
            if hi - lo == 1:
                out[i] = coeffs[lo] * z[cols[lo]] % R_SCALAR
            elif hi > lo:
                s = 0
                for k in range(lo, hi):
                    s += coeffs[k] * z[cols[k]]
                out[i] = s % R_SCALAR
            lo = hi
        return out

    def column_sums(self, row_weights, num_cols):
        """out[j] = sum_i M[i][j] * row_weights[i] (used to evaluate QAP polynomials)."""
        out = [0] * num_cols
        ptr, cols, coeffs = self.ptr, self.cols, self.coeffs
        lo = 0
        for i in range(self.num_rows):
            hi = ptr[i + 1]
            w = row_weights[i]
            for k in range(lo, hi):
                out[cols[k]] += coeffs[k] * w
            lo = hi
        return [v % R_SCALAR for v in out]


def _canon_terms(lc):
    return list(LinearCombination.of(lc).terms.items())


class ConstraintSystem:
    """Growing R1CS plus (optionally) the assignment that goes with it."""

    def __init__(self, record=True):
        self.record = record
        self.num_public = 0
        self.num_witness = 0
        self.values = [1]
        self.a = SparseMatrix()
        self.b = SparseMatrix()
        self.c = SparseMatrix()
        self._count = 0

    one = Variable(ONE_INDEX, KIND_ONE)

    # -- allocation --

    @property
    def num_variables(self):
        return 1 + self.num_public + self.num_witness

    def alloc(self, kind=KIND_WITNESS, value=0):
        if kind == KIND_PUBLIC:
            if self.num_witness:
                raise OrderingError("public input allocated after a private witness")
            self.num_public += 1
        elif kind == KIND_WITNESS:
            self.num_witness += 1
        else:
            raise ArgumentError(f"unknown variable kind {kind!r}")
        self.values.append(int(value) % R_SCALAR)
        return Variable(len(self.values) - 1, kind)

    def alloc_public(self, value=0):
        return self.alloc(KIND_PUBLIC, value)

    def alloc_witness(self, value=0):
        return self.alloc(KIND_WITNESS, value)

    def value(self, x):
        """Current value of a Variable or linear combination."""
        if isinstance(x, Variable):
            return self.values[x.index]
        return LinearCombination.of(x).evaluate(self.values)

    # -- constraints --

    def enforce(self, a, b, c):
        rows = (_canon_terms(a), _canon_terms(b), _canon_terms(c))
        n = self.num_variables
        for terms in rows:
            for idx, _ in terms:
                if not 0 <= idx < n:
                    raise ArgumentError(f"constraint references unallocated variable {idx}")
        self._push(*rows)

    def enforce_terms(self, a, b, c):
        """Trusted fast path: rows given as canonical (index, coeff) lists."""
        if self.record:
            self.a.append_row(a)
            self.b.append_row(b)
            self.c.append_row(c)
        self._count += 1

    _push = enforce_terms

    @property
    def num_constraints(self):
        return self._count

    def constraint(self, i):
        if not self.record:
            raise ArgumentError("constraint rows were not recorded in this system")
        return self.a.row(i), self.b.row(i), self.c.row(i)

    # -- assignment --

    def assignment(self):
        return list(self.values)

    def public_inputs(self):
        return self.values[1 : 1 + self.num_public]

    def witness(self):
        return self.values[1 + self.num_public :]

    def evaluate_rows(self, assignment):
        """(Az, Bz, Cz) as three lists indexed by constraint."""
        self._check_assignment(assignment)
        return self.a.mul_vec(assignment), self.b.mul_vec(assignment), self.c.mul_vec(assignment)

    def first_unsatisfied(self, assignment=None):
        """Index of the first violated row, or None if all rows hold."""
        z = self.values if assignment is None else [int(v) % R_SCALAR for v in assignment]
        az, bz, cz = self.evaluate_rows(z)
        for i in range(self._count):
            if az[i] * bz[i] % R_SCALAR != cz[i]:
                return i
        return None

    def is_satisfied(self, assignment=None):
        return self.first_unsatisfied(assignment) is None

    def _check_assignment(self, z):
        if len(z) != self.num_variables:
            raise ArgumentError(f"assignment has {len(z)} entries, expected {self.num_variables}")
        if int(z[0]) % R_SCALAR != 1:
            raise ArgumentError("assignment[0] must be the constant 1")
        if not self.record and self._count:
            raise ArgumentError("constraint rows were not recorded in this system")

    def shape(self):
        return (self.num_public, self.num_witness, self._count)


def alloc(cs: ConstraintSystem, kind=KIND_WITNESS, value=0) -> Variable:
    return cs.alloc(kind, value)


def enforce(cs: ConstraintSystem, a, b, c) -> None:
    cs.enforce(a, b, c)


def is_satisfied(cs: ConstraintSystem, assignment) -> bool:
    return cs.is_satisfied(assignment)


__all__ = [
    "ConstraintSystem",
    "Variable",
    "LinearCombination",
    "SparseMatrix",
    "Fr",
    "alloc",
    "enforce",
    "is_satisfied",
    "KIND_PUBLIC",
    "KIND_WITNESS",
]
