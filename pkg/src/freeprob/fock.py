"""Truncated full Fock space realization of free Levy processes.

Given a cumulant functional kappa on k variables, the one-particle space
is (a time component) tensor (the span of monomials of degree <= d_H under
the inner product <X_w, X_v> = kappa(w . reverse(v))), and the process
increment over (s, t) in variable i is

    (t - s) kappa_1(i) + creation + annihilation + gauge

of the vector (indicator of (s,t)) tensor X_i, with the gauge part acting
by multiplication by the indicator on time and by the compressed left
multiplication by X_i on polynomials.  Vacuum expectations of products of
at most min(n_max, d_H) increments are exact up to float roundoff: every
operator factor raises polynomial degree and particle number by at most
one, so within that budget no state ever leaves the modeled subspace and
the compressions act as identities.

Matrices are dense numpy arrays over the truncated tensor basis; the
rational Gram data and its pivoted elimination stay exact, and square
roots enter only when the orthonormal basis is finally written down.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, StructuralError, ValidationError
from .functionals import (
    CumulantFunctional,
    MomentFunctional,
    as_scalar,
    cumulants_to_moments,
    iter_words_upto,
    moments_to_cumulants,
)
from .infdiv import gram_matrix, monomial_basis, psd_certificate

DEFAULT_PIVOT_TOLERANCE = Fraction(1, 10**10)


class PolySpace:
    """Orthonormalized quotient of the monomial span of degree <= d_H.

    Built from exact rational data: the cumulant Gram matrix is assembled
    and eliminated with diagonal pivoting in Fraction arithmetic, pivots
    below the cutoff count as kernel, and only the final normalization by
    1/sqrt(pivot) produces floats.  Also carries, per variable, the
    compressed left multiplication table and the coordinates of X_i
    itself, which is everything the Fock construction consumes.
    """

    def __init__(self, cf, d_H, tolerance=DEFAULT_PIVOT_TOLERANCE):
        if not isinstance(cf, CumulantFunctional):
            raise StructuralError("PolySpace needs a CumulantFunctional")
        if d_H < 1:
            raise ValidationError("d_H must be >= 1")
        if cf.order < 2 * d_H + 1:
            raise ValidationError(
                "multiplication tables need cumulants to order %d, table stops at %d"
                % (2 * d_H + 1, cf.order)
            )
        self.cf = cf
        self.d_H = d_H
        self.arity = cf.arity
        self.monomials = monomial_basis(cf.arity, d_H)
        self._mono_index = {w: i for i, w in enumerate(self.monomials)}

        gram = gram_matrix(cf, cf.arity, d_H)
        cert = psd_certificate(gram.row_lists(), tolerance)
        if not cert.psd:
            names = [cf.word_name(w) for w in self.monomials]
            combo = ", ".join(
                "%s*(%s)" % (c, names[i])
                for i, c in enumerate(cert.witness)
                if c
            )
            raise ValidationError(
                "Gram matrix is not positive semidefinite; witness %s has "
                "form value %s" % (combo, cert.witness_value)
            )
        self.gram = gram
        self.pivot_values = tuple(value for _, value in cert.pivots)
        self.dim = len(cert.pivots)
        self.kernel_dim = len(self.monomials) - self.dim

        n_mono = len(self.monomials)
        basis = np.zeros((self.dim, n_mono))
        for a, (_, vector, value) in enumerate(cert.basis):
            scale = 1.0 / math.sqrt(float(value))
            for j, c in enumerate(vector):
                if c:
                    basis[a, j] = float(c) * scale
        self.basis = basis  # rows: orthonormal vectors in monomial coordinates

        kappa = cf.cumulant
        gram_f = np.array(
            [[float(x) for x in row] for row in gram.entries]
        )
        self.var_embeddings = []
        self.var_tables = []
        for i in range(1, cf.arity + 1):
            row = gram_f[self._mono_index[(i,)]]
            self.var_embeddings.append(basis @ row)
            lifted = np.zeros((n_mono, n_mono))
            for a, w in enumerate(self.monomials):
                for b, v in enumerate(self.monomials):
                    lifted[a, b] = float(kappa((i,) + v + w[::-1]))
            # lifted[a, b] = <X_i X_vb, X_wa>; compress both sides
            self.var_tables.append(basis @ lifted @ basis.T)
        self.first_cumulants = tuple(
            float(kappa((i,))) for i in range(1, cf.arity + 1)
        )

    def project_word(self, word):
        """Coordinates of the image of a monomial in the orthonormal
        basis."""
        idx = self._mono_index.get(tuple(word))
        if idx is None:
            raise ValidationError("monomial %r outside degree 1..%d" % (word, self.d_H))
        row = np.array([float(x) for x in self.gram.entries[idx]])
        return self.basis @ row


class TimeComponent:
    """Finitely supported slice of L^2 of the half line: indicator
    functions over the elementary intervals between registered
    breakpoints, with exact rational lengths."""

    def __init__(self, breakpoints):
        pts = tuple(as_scalar(p) for p in breakpoints)
        if len(pts) < 2:
            raise ValidationError("need at least two breakpoints")
        if any(p < 0 for p in pts):
            raise ValidationError("breakpoints must be >= 0")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValidationError("breakpoints must be strictly increasing")
        self.breakpoints = pts
        self.lengths = tuple(b - a for a, b in zip(pts, pts[1:]))

    @classmethod
    def from_endpoints(cls, endpoints):
        """Union of all endpoints mentioned in a session, sorted."""
        pts = sorted({as_scalar(p) for p in endpoints})
        return cls(pts)

    @property
    def n_elem(self):
        return len(self.lengths)

    def _locate(self, s, t):
        s, t = as_scalar(s), as_scalar(t)
        if s not in self.breakpoints or t not in self.breakpoints:
            raise ValidationError(
                "interval (%s, %s) endpoints are not registered breakpoints"
                % (s, t)
            )
        if t < s:
            raise ValidationError("interval must have s <= t")
        i0 = self.breakpoints.index(s)
        i1 = self.breakpoints.index(t)
        return i0, i1

    def indicator_coeffs(self, s, t):
        """Coordinates of the indicator of (s, t) in the orthonormal basis
        of normalized elementary indicators: sqrt(length) on each covered
        elementary interval."""
        i0, i1 = self._locate(s, t)
        out = np.zeros(self.n_elem)
        for j in range(i0, i1):
            out[j] = math.sqrt(float(self.lengths[j]))
        return out

    def multiplier_diag(self, s, t):
        """Multiplication by the indicator of (s, t) is diagonal with 0/1
        entries on elementary indicators."""
        i0, i1 = self._locate(s, t)
        out = np.zeros(self.n_elem)
        out[i0:i1] = 1.0
        return out


@dataclass(frozen=True)
class FockOperator:
    """Dense matrix on the truncated Fock basis."""

    matrix: np.ndarray
    label: str

    def adjoint(self):
        return FockOperator(matrix=self.matrix.T.copy(), label="adj(%s)" % self.label)

    def selfadjoint_defect(self):
        return float(np.abs(self.matrix - self.matrix.T).max())

    def apply(self, vector):
        return self.matrix @ vector


class FockModel:
    """Truncated full Fock space over (time component) tensor (poly
    space), with at most n_max particles.

    The basis is the vacuum followed by all tensor words over the product
    one-particle basis, enumerated level by level in lexicographic order,
    so a word is its base-D numeral.  Total dimension 1 + D + ... +
    D^n_max is capped; exceeding the cap raises CapacityError rather than
    silently truncating further.
    """

    def __init__(self, poly, time, n_max, max_dim=60000):
        if not isinstance(poly, PolySpace):
            raise StructuralError("poly must be a PolySpace")
        if not isinstance(time, TimeComponent):
            raise StructuralError("time must be a TimeComponent")
        if n_max < 1:
            raise ValidationError("n_max must be >= 1")
        self.poly = poly
        self.time = time
        self.n_max = n_max
        self.hat_dim = time.n_elem * poly.dim
        if self.hat_dim == 0:
            raise ValidationError("one-particle space is zero")
        dims = [self.hat_dim**m for m in range(n_max + 1)]
        total = sum(dims)
        if total > max_dim:
            raise CapacityError(
                "truncated Fock dimension %d exceeds cap %d" % (total, max_dim)
            )
        self.level_dims = tuple(dims)  # level 0 is the vacuum line
        offsets = [0]
        for d in dims:
            offsets.append(offsets[-1] + d)
        self.level_offsets = tuple(offsets[:-1])
        self.dim = total

    def summary(self):
        return {
            "k": self.poly.arity,
            "d_H": self.poly.d_H,
            "n_max": self.n_max,
            "dim_H": self.hat_dim,
            "dim_poly": self.poly.dim,
            "dim_fock": self.dim,
            "breakpoints": [str(p) for p in self.time.breakpoints],
        }

    def basis_words(self):
        """Tensor words of the basis, vacuum first, level by level."""
        yield ()
        for m in range(1, self.n_max + 1):
            yield from itertools.product(range(self.hat_dim), repeat=m)

    def vacuum(self):
        v = np.zeros(self.dim)
        v[0] = 1.0
        return v

    def hat_vector(self, var, s, t):
        """Coordinates of (indicator of (s,t)) tensor X_var in the product
        one-particle basis, time index major."""
        if not 1 <= var <= self.poly.arity:
            raise ValidationError("variable %r outside 1..%d" % (var, self.poly.arity))
        return np.kron(
            self.time.indicator_coeffs(s, t), self.poly.var_embeddings[var - 1]
        )

    def _check_hat(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.hat_dim,):
            raise StructuralError(
                "one-particle vector must have length %d" % self.hat_dim
            )
        return x

    def creation(self, x, label="l*"):
        """Left creation by a one-particle vector; components that would
        exceed n_max particles are dropped."""
        x = self._check_hat(x)
        M = np.zeros((self.dim, self.dim))
        D = self.hat_dim
        for m in range(self.n_max):
            r0 = self.level_offsets[m + 1]
            c0 = self.level_offsets[m]
            block = np.kron(x.reshape(D, 1), np.eye(D**m))
            M[r0 : r0 + D ** (m + 1), c0 : c0 + D**m] = block
        return FockOperator(matrix=M, label=label)

    def annihilation(self, x, label="l"):
        """Adjoint of creation: kills the vacuum, pairs the first tensor
        factor against x."""
        return FockOperator(
            matrix=self.creation(x).matrix.T.copy(), label=label
        )

    def gauge(self, T, label="p"):
        """Second-quantized action of a one-particle operator on the first
        tensor factor only; kills the vacuum.  T is a dense hat-space
        matrix or a (time matrix, poly matrix) pair combined by tensor
        product."""
        if isinstance(T, tuple):
            t_part, p_part = T
            T = np.kron(np.asarray(t_part, dtype=float), np.asarray(p_part, dtype=float))
        T = np.asarray(T, dtype=float)
        if T.shape != (self.hat_dim, self.hat_dim):
            raise StructuralError(
                "gauge operator must be %d x %d" % (self.hat_dim, self.hat_dim)
            )
        M = np.zeros((self.dim, self.dim))
        D = self.hat_dim
        for m in range(1, self.n_max + 1):
            o = self.level_offsets[m]
            M[o : o + D**m, o : o + D**m] = np.kron(T, np.eye(D ** (m - 1)))
        return FockOperator(matrix=M, label=label)

    def levy_increment(self, var, s, t):
        """Process increment over (s, t) in variable ``var``: drift plus
        creation plus annihilation plus gauge of the indicator-tensor-X
        data.  The empty interval s == t gives the zero operator."""
        if not 1 <= var <= self.poly.arity:
            raise ValidationError("variable %r outside 1..%d" % (var, self.poly.arity))
        s_, t_ = as_scalar(s), as_scalar(t)
        x = self.hat_vector(var, s_, t_)
        drift = float(t_ - s_) * self.poly.first_cumulants[var - 1]
        cre = self.creation(x).matrix
        T = np.kron(
            np.diag(self.time.multiplier_diag(s_, t_)),
            self.poly.var_tables[var - 1],
        )
        M = drift * np.eye(self.dim) + cre + cre.T + self.gauge(T).matrix
        return FockOperator(
            matrix=M, label="a[%d](%s,%s)" % (var, s_, t_)
        )

    def vacuum_moment(self, ops):
        """<A_1 ... A_r vacuum, vacuum> for a product applied left to
        right as written."""
        v = self.vacuum()
        for op in reversed(list(ops)):
            m = op.matrix if isinstance(op, FockOperator) else np.asarray(op)
            v = m @ v
        return float(v[0])

    def moment_table(self, ops, names, order):
        """Joint vacuum-moment table of the given operators as an exact
        MomentFunctional (floats promoted to their binary rationals).
        Shares suffix states across words, one matvec per word."""
        ops = list(ops)
        if len(ops) != len(names):
            raise StructuralError("need one name per operator")
        mats = [
            op.matrix if isinstance(op, FockOperator) else np.asarray(op)
            for op in ops
        ]
        states = {(): self.vacuum()}
        table = {}
        for n in range(1, order + 1):
            for w in itertools.product(range(1, len(ops) + 1), repeat=n):
                states[w] = mats[w[0] - 1] @ states[w[1:]]
                table[w] = Fraction(float(states[w][0]))
        return MomentFunctional(tuple(names), order, table)


def build_poly_space(cf, d_H, tolerance=DEFAULT_PIVOT_TOLERANCE):
    return PolySpace(cf, d_H, tolerance)


def build_fock_model(cf, d_H, n_max, endpoints=(0, 1), max_dim=60000):
    """Convenience constructor: poly space from the cumulant table plus a
    time component over the given endpoints."""
    poly = PolySpace(cf, d_H)
    return FockModel(poly, TimeComponent.from_endpoints(endpoints), n_max, max_dim)


@dataclass(frozen=True)
class LevyAxiomSection:
    name: str
    max_error: float
    tolerance: float
    passed: bool
    detail: tuple  # ((description, error), ...) worst offenders

    def to_json_dict(self):
        return {
            "name": self.name,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": [
                {"case": case, "error": err} for case, err in self.detail
            ],
        }


@dataclass(frozen=True)
class LevyReport:
    order: int
    summary: dict
    sections: tuple

    @property
    def passed(self):
        return all(s.passed for s in self.sections)

    def section(self, name):
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json_dict(self):
        return {
            "order": self.order,
            "summary": self.summary,
            "passed": self.passed,
            "sections": [s.to_json_dict() for s in self.sections],
        }

    def to_text(self):
        lines = [
            "Levy axiom check, order %d, dim_H %s, Fock dim %s"
            % (self.order, self.summary["dim_H"], self.summary["dim_fock"])
        ]
        for s in self.sections:
            lines.append(
                "  [%s] %-22s max error %.3e (tol %.0e)"
                % ("PASS" if s.passed else "FAIL", s.name, s.max_error, s.tolerance)
            )
        return "\n".join(lines)


def _section(name, errors, tolerance):
    worst = sorted(errors, key=lambda pair: -pair[1])[:3]
    max_err = worst[0][1] if worst else 0.0
    return LevyAxiomSection(
        name=name,
        max_error=max_err,
        tolerance=tolerance,
        passed=max_err <= tolerance,
        detail=tuple(worst),
    )


def verify_levy_axioms(
    model,
    order,
    tol_moments=1e-9,
    tol_stationarity=1e-12,
    tol_freeness=1e-9,
    max_dim=60000,
):
    """Check the defining properties of the realized process.

    Sections: marginal moments over (0,1) against the defining functional;
    stationarity of (0,1) vs (2,3); free independence of the increments
    over (0,1) and (1,2); vanishing at the empty interval together with
    the cumulant semigroup in t over (0, t), t = 1, 1/2, 1/4, 1/8.

    Each section runs in its own small model over exactly the breakpoints
    it mentions; all models share the poly space of ``model``.
    """
    if not isinstance(model, FockModel):
        raise StructuralError("expected a FockModel")
    poly = model.poly
    k = poly.arity
    if order > model.n_max:
        raise ValidationError("order %d beyond n_max %d" % (order, model.n_max))
    if order > poly.d_H:
        raise ValidationError("order %d beyond d_H %d" % (order, poly.d_H))

    target_cf = poly.cf.truncate(order)
    target_mf = cumulants_to_moments(target_cf)
    sections = []

    # marginal moments over the unit interval
    m_unit = FockModel(poly, TimeComponent((0, 1)), order, max_dim)
    ops = [m_unit.levy_increment(i, 0, 1) for i in range(1, k + 1)]
    table = m_unit.moment_table(ops, target_mf.alphabet, order)
    errors = [
        (target_mf.word_name(w), abs(float(table.moment(w) - target_mf.moment(w))))
        for w in table.words()
    ]
    sections.append(_section("marginal moments", errors, tol_moments))

    # stationarity: the law over (0,1) equals the law over (2,3)
    m_station = FockModel(poly, TimeComponent((0, 1, 2, 3)), order, max_dim)
    ops01 = [m_station.levy_increment(i, 0, 1) for i in range(1, k + 1)]
    ops23 = [m_station.levy_increment(i, 2, 3) for i in range(1, k + 1)]
    t01 = m_station.moment_table(ops01, target_mf.alphabet, order)
    t23 = m_station.moment_table(ops23, target_mf.alphabet, order)
    errors = [
        (t01.word_name(w), abs(float(t01.moment(w) - t23.moment(w))))
        for w in t01.words()
    ]
    sections.append(_section("stationarity", errors, tol_stationarity))

    # free increments: mixed cumulants across (0,1) and (1,2) vanish
    m_free = FockModel(poly, TimeComponent((0, 1, 2)), order, max_dim)
    fam = [m_free.levy_increment(i, 0, 1) for i in range(1, k + 1)]
    fam += [m_free.levy_increment(i, 1, 2) for i in range(1, k + 1)]
    names = ["a%d.early" % i for i in range(1, k + 1)]
    names += ["a%d.late" % i for i in range(1, k + 1)]
    joint = m_free.moment_table(fam, names, order)
    joint_cf = moments_to_cumulants(joint)
    errors = []
    for w in joint_cf.words():
        early = any(c <= k for c in w)
        late = any(c > k for c in w)
        if early and late:
            errors.append(
                (joint_cf.word_name(w), abs(float(joint_cf.cumulant(w))))
            )
    sections.append(_section("free increments", errors, tol_freeness))

    # zero at the start, and the cumulant semigroup along shrinking t
    errors = [
        (
            "a[%d](0,0)" % i,
            float(np.abs(m_unit.levy_increment(i, 0, 0).matrix).max()),
        )
        for i in range(1, k + 1)
    ]
    for t in (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
        m_t = FockModel(poly, TimeComponent((0, t)), order, max_dim)
        ops_t = [m_t.levy_increment(i, 0, t) for i in range(1, k + 1)]
        tab = m_t.moment_table(ops_t, target_mf.alphabet, order)
        cf_t = moments_to_cumulants(tab)
        for w in cf_t.words():
            want = t * target_cf.cumulant(w)
            errors.append(
                (
                    "t=%s %s" % (t, cf_t.word_name(w)),
                    abs(float(cf_t.cumulant(w) - want)),
                )
            )
    sections.append(_section("semigroup in t", errors, tol_moments))

    return LevyReport(
        order=order, summary=model.summary(), sections=tuple(sections)
    )
