"""Truncated power series in one and two complex variables.

Every object stores complex double coefficients up to a fixed degree cap D
and all arithmetic is exact through degree D: an operation never silently
reads or writes coefficients beyond the cap, and the result of any
combination of ring operations agrees coefficientwise with the untruncated
computation through degree D.

``TruncatedSeries1`` holds ``a_0 + a_1 z + ... + a_D z^D`` as a dense
vector.  ``TruncatedSeries2`` holds ``sum c_{ij} x^i y^j`` over ``i+j <= D``
as a dense triangular array.  Values are immutable after construction, so
instances can be shared freely across threads.

Serialization round-trips through JSON-friendly dicts of the form
``{"degree_cap": D, "coeffs": [[i, re, im], ...]}`` (one variable) and
``{"degree_cap": D, "coeffs": [[i, j, re, im], ...]}`` (two variables),
with zero coefficients omitted.
"""

from __future__ import annotations

import cmath

import numpy as np
from scipy.signal import convolve2d

from .errors import CapMismatchError, SeriesDomainError

__all__ = ["TruncatedSeries1", "TruncatedSeries2"]


def _as_complex_vector(coeffs, cap):
    arr = np.zeros(cap + 1, dtype=np.complex128)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.ndim != 1:
        raise SeriesDomainError("one-variable coefficients must be a flat sequence")
    if coeffs.size > cap + 1:
        raise SeriesDomainError(
            f"{coeffs.size} coefficients exceed degree cap {cap}"
        )
    arr[: coeffs.size] = coeffs
    return arr


def _check_finite(arr):
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise SeriesDomainError("non-finite coefficient")


def _check_same_cap(a, b):
    if a.degree_cap != b.degree_cap:
        raise CapMismatchError(
            f"degree caps differ: {a.degree_cap} vs {b.degree_cap}"
        )


class TruncatedSeries1:
    """Polynomial truncation of a one-variable power series.

    Supports ring arithmetic (``+``, ``-``, ``*``, scalar mixing),
    composition, local inversion, log/exp and reciprocal for the unit
    groups, differentiation, and Horner evaluation (vectorized over
    numpy arrays of points).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, degree_cap=None):
        if degree_cap is None:
            degree_cap = len(coeffs) - 1
        if degree_cap < 1:
            raise SeriesDomainError("degree cap must be at least 1")
        arr = _as_complex_vector(coeffs, degree_cap)
        _check_finite(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries1 is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, cap):
        return cls([0.0], cap)

    @classmethod
    def one(cls, cap):
        return cls([1.0], cap)

    @classmethod
    def identity(cls, cap):
        """The series z."""
        return cls([0.0, 1.0], cap)

    @classmethod
    def monomial(cls, coeff, degree, cap):
        c = np.zeros(degree + 1, dtype=np.complex128)
        c[degree] = coeff
        return cls(c, cap)

    # -- basic queries -------------------------------------------------

    @property
    def degree_cap(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return complex(self.coeffs[k])

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    def max_abs_diff(self, other):
        _check_same_cap(self, other)
        return float(np.max(np.abs(self.coeffs - other.coeffs)))

    def __repr__(self):
        head = ", ".join(f"{c:.4g}" for c in self.coeffs[:4])
        return f"TruncatedSeries1(D={self.degree_cap}, [{head}, ...])"

    # -- ring arithmetic ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries1):
            _check_same_cap(self, other)
            return other
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries1([other], self.degree_cap)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return TruncatedSeries1(self.coeffs + other.coeffs, self.degree_cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries1(-self.coeffs, self.degree_cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return TruncatedSeries1(self.coeffs - other.coeffs, self.degree_cap)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries1(self.coeffs * other, self.degree_cap)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = self.degree_cap
        full = np.convolve(self.coeffs, other.coeffs)
        return TruncatedSeries1(full[: cap + 1], cap)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise SeriesDomainError("series powers take non-negative integers")
        result = TruncatedSeries1.one(self.degree_cap)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus ------------------------------------------------------

    def derivative(self):
        cap = self.degree_cap
        d = self.coeffs[1:] * np.arange(1, cap + 1)
        out = np.zeros(cap + 1, dtype=np.complex128)
        out[:cap] = d
        return TruncatedSeries1(out, cap)

    # -- composition and inversion ------------------------------------

    def compose(self, inner, check_inner_vanishes=True):
        """Return self(inner(.)), truncated at the shared cap.

        The result is exact through the cap when ``inner`` has zero
        constant term; with the check disabled the Horner evaluation is
        still well defined but retained degrees mix with truncated ones.
        """
        if isinstance(inner, TruncatedSeries2):
            return inner._compose_outer1(self, check_inner_vanishes)
        _check_same_cap(self, inner)
        if check_inner_vanishes and inner.coeffs[0] != 0:
            raise SeriesDomainError(
                "inner series must vanish at 0 for exact composition"
            )
        cap = self.degree_cap
        acc = TruncatedSeries1([self.coeffs[cap]], cap)
        for k in range(cap - 1, -1, -1):
            acc = acc * inner + self.coeffs[k]
        return acc

    def invert_local(self):
        """Compositional inverse t with t(self(z)) = z + O(z^{D+1}).

        Requires a vanishing constant term and a nonzero linear one.
        The coefficients are produced degree by degree from the powers
        of self.
        """
        cap = self.degree_cap
        if self.coeffs[0] != 0:
            raise SeriesDomainError("local inversion needs s(0) = 0")
        s1 = self.coeffs[1]
        if s1 == 0:
            raise SeriesDomainError("local inversion needs s'(0) != 0")
        t = np.zeros(cap + 1, dtype=np.complex128)
        t[1] = 1.0 / s1
        powers = [None, self]  # powers[k] = self**k
        for k in range(2, cap + 1):
            powers.append(powers[k - 1] * self)
        for n in range(2, cap + 1):
            acc = 0.0 + 0.0j
            for k in range(1, n):
                acc += t[k] * powers[k].coeffs[n]
            t[n] = -acc / s1**n
        return TruncatedSeries1(t, cap)

    def reciprocal(self):
        """1/self for series with nonzero constant term."""
        cap = self.degree_cap
        c0 = self.coeffs[0]
        if c0 == 0:
            raise SeriesDomainError("reciprocal needs a nonzero constant term")
        r = np.zeros(cap + 1, dtype=np.complex128)
        r[0] = 1.0 / c0
        for n in range(1, cap + 1):
            r[n] = -np.dot(self.coeffs[1 : n + 1], r[n - 1 :: -1][: n]) / c0
        return TruncatedSeries1(r, cap)

    def log(self):
        """Principal-branch log of a series with nonzero constant term.

        Uses the recursion n g_n f_0 = n f_n - sum_{k<n} k g_k f_{n-k}.
        """
        cap = self.degree_cap
        f0 = self.coeffs[0]
        if f0 == 0:
            raise SeriesDomainError("log needs a nonzero constant term")
        g = np.zeros(cap + 1, dtype=np.complex128)
        g[0] = cmath.log(f0)
        for n in range(1, cap + 1):
            acc = n * self.coeffs[n]
            for k in range(1, n):
                acc -= k * g[k] * self.coeffs[n - k]
            g[n] = acc / (n * f0)
        return TruncatedSeries1(g, cap)

    def exp(self):
        """exp of the series; h_n = (1/n) sum_{k=1..n} k f_k h_{n-k}."""
        cap = self.degree_cap
        h = np.zeros(cap + 1, dtype=np.complex128)
        h[0] = cmath.exp(self.coeffs[0])
        for n in range(1, cap + 1):
            acc = 0.0 + 0.0j
            for k in range(1, n + 1):
                acc += k * self.coeffs[k] * h[n - k]
            h[n] = acc / n
        return TruncatedSeries1(h, cap)

    # -- evaluation ----------------------------------------------------

    def eval(self, z):
        """Horner evaluation; z may be a scalar or a numpy array."""
        z = np.asarray(z, dtype=np.complex128)
        acc = np.full(z.shape, self.coeffs[-1])
        for k in range(self.degree_cap - 1, -1, -1):
            acc = acc * z + self.coeffs[k]
        if acc.shape == ():
            return complex(acc)
        return acc

    def __call__(self, z):
        return self.eval(z)

    # -- embedding and serialization ------------------------------------

    def as_x(self, cap=None):
        """Embed as a two-variable series in the first variable."""
        cap = self.degree_cap if cap is None else cap
        out = np.zeros((cap + 1, cap + 1), dtype=np.complex128)
        upto = min(self.degree_cap, cap)
        out[: upto + 1, 0] = self.coeffs[: upto + 1]
        return TruncatedSeries2(out, cap)

    def as_y(self, cap=None):
        """Embed as a two-variable series in the second variable."""
        cap = self.degree_cap if cap is None else cap
        out = np.zeros((cap + 1, cap + 1), dtype=np.complex128)
        upto = min(self.degree_cap, cap)
        out[0, : upto + 1] = self.coeffs[: upto + 1]
        return TruncatedSeries2(out, cap)

    def to_json(self):
        rows = [
            [k, float(c.real), float(c.imag)]
            for k, c in enumerate(self.coeffs)
            if c != 0
        ]
        return {"degree_cap": self.degree_cap, "coeffs": rows}

    @classmethod
    def from_json(cls, obj):
        cap = int(obj["degree_cap"])
        arr = np.zeros(cap + 1, dtype=np.complex128)
        for row in obj["coeffs"]:
            if len(row) != 3:
                raise SeriesDomainError(
                    "one-variable coefficient rows are [degree, re, im]"
                )
            k, re, im = row
            arr[int(k)] = complex(re, im)
        return cls(arr, cap)


class TruncatedSeries2:
    """Triangular truncation of a two-variable power series.

    ``coeffs[i, j]`` is the coefficient of ``x^i y^j``; entries with
    ``i + j > D`` are identically zero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, degree_cap=None):
        arr = np.asarray(coeffs, dtype=np.complex128)
        if degree_cap is None:
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise SeriesDomainError("expected a square coefficient array")
            degree_cap = arr.shape[0] - 1
        if degree_cap < 1:
            raise SeriesDomainError("degree cap must be at least 1")
        full = np.zeros((degree_cap + 1, degree_cap + 1), dtype=np.complex128)
        if arr.ndim != 2:
            raise SeriesDomainError("two-variable coefficients must be 2-d")
        if arr.shape[0] > degree_cap + 1 or arr.shape[1] > degree_cap + 1:
            raise SeriesDomainError("coefficient array exceeds degree cap")
        full[: arr.shape[0], : arr.shape[1]] = arr
        full[_mask_beyond(degree_cap)] = 0.0
        _check_finite(full)
        full.setflags(write=False)
        object.__setattr__(self, "coeffs", full)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries2 is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, cap):
        return cls(np.zeros((1, 1)), cap)

    @classmethod
    def from_terms(cls, terms, cap):
        """Build from an iterable of (i, j, coefficient) triples."""
        arr = np.zeros((cap + 1, cap + 1), dtype=np.complex128)
        for i, j, c in terms:
            if i + j > cap:
                raise SeriesDomainError(
                    f"term x^{i} y^{j} exceeds degree cap {cap}"
                )
            arr[i, j] += c
        return cls(arr, cap)

    @classmethod
    def var_x(cls, cap):
        return cls.from_terms([(1, 0, 1.0)], cap)

    @classmethod
    def var_y(cls, cap):
        return cls.from_terms([(0, 1, 1.0)], cap)

    # -- basic queries -------------------------------------------------

    @property
    def degree_cap(self):
        return self.coeffs.shape[0] - 1

    def __getitem__(self, ij):
        i, j = ij
        return complex(self.coeffs[i, j])

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    def max_abs_diff(self, other):
        _check_same_cap(self, other)
        return float(np.max(np.abs(self.coeffs - other.coeffs)))

    def __repr__(self):
        return f"TruncatedSeries2(D={self.degree_cap})"

    # -- ring arithmetic ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries2):
            _check_same_cap(self, other)
            return other
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries2.from_terms([(0, 0, other)], self.degree_cap)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return TruncatedSeries2(self.coeffs + other.coeffs, self.degree_cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries2(-self.coeffs, self.degree_cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return TruncatedSeries2(self.coeffs - other.coeffs, self.degree_cap)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TruncatedSeries2(self.coeffs * other, self.degree_cap)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = self.degree_cap
        full = convolve2d(self.coeffs, other.coeffs)
        return TruncatedSeries2(full[: cap + 1, : cap + 1], cap)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise SeriesDomainError("series powers take non-negative integers")
        result = TruncatedSeries2.from_terms([(0, 0, 1.0)], self.degree_cap)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus ------------------------------------------------------

    def partial_x(self):
        cap = self.degree_cap
        out = np.zeros_like(self.coeffs)
        out[:cap, :] = self.coeffs[1:, :] * np.arange(1, cap + 1)[:, None]
        return TruncatedSeries2(out, cap)

    def partial_y(self):
        cap = self.degree_cap
        out = np.zeros_like(self.coeffs)
        out[:, :cap] = self.coeffs[:, 1:] * np.arange(1, cap + 1)[None, :]
        return TruncatedSeries2(out, cap)

    # -- substitution ---------------------------------------------------

    def subst_curve(self, u, v):
        """One-variable series F(u(t), v(t)).

        Exact through the cap when u and v have zero constant terms.
        """
        cap = self.degree_cap
        if not isinstance(u, TruncatedSeries1) or not isinstance(
            v, TruncatedSeries1
        ):
            raise SeriesDomainError("subst_curve takes one-variable series")
        if u.degree_cap != cap or v.degree_cap != cap:
            raise CapMismatchError("curve caps must match the series cap")
        if u.coeffs[0] != 0 or v.coeffs[0] != 0:
            raise SeriesDomainError("curves must vanish at 0")
        # Horner in x over polynomials in y(t).
        v_pow = [TruncatedSeries1.one(cap)]
        for _ in range(cap):
            v_pow.append(v_pow[-1] * v)
        acc = TruncatedSeries1.zero(cap)
        for i in range(cap, -1, -1):
            row = TruncatedSeries1.zero(cap)
            cs = self.coeffs[i]
            for j in range(cap - i + 1):
                if cs[j] != 0:
                    row = row + v_pow[j] * cs[j]
            acc = acc * u + row
        return acc

    def subst_pair(self, s1, s2, check_vanishing=True):
        """Two-variable series F(s1(x,y), s2(x,y)).

        Exact through the cap when both inner series have zero constant
        terms.
        """
        cap = self.degree_cap
        _check_same_cap(self, s1)
        _check_same_cap(self, s2)
        if check_vanishing and (s1.coeffs[0, 0] != 0 or s2.coeffs[0, 0] != 0):
            raise SeriesDomainError("inner series must vanish at 0")
        one = TruncatedSeries2.from_terms([(0, 0, 1.0)], cap)
        s2_pow = [one]
        for _ in range(cap):
            s2_pow.append(s2_pow[-1] * s2)
        acc = TruncatedSeries2.zero(cap)
        for i in range(cap, -1, -1):
            row = TruncatedSeries2.zero(cap)
            cs = self.coeffs[i]
            for j in range(cap - i + 1):
                if cs[j] != 0:
                    row = row + s2_pow[j] * cs[j]
            acc = acc * s1 + row
        return acc

    def _compose_outer1(self, outer, check_inner_vanishes=True):
        """outer(self) for a one-variable outer series."""
        cap = self.degree_cap
        if outer.degree_cap != cap:
            raise CapMismatchError("outer cap must match the series cap")
        if check_inner_vanishes and self.coeffs[0, 0] != 0:
            raise SeriesDomainError(
                "inner series must vanish at 0 for exact composition"
            )
        acc = TruncatedSeries2.from_terms([(0, 0, outer.coeffs[cap])], cap)
        for k in range(cap - 1, -1, -1):
            acc = acc * self + outer.coeffs[k]
        return acc

    # -- slices ----------------------------------------------------------

    def coeff_in_y(self, i):
        """The coefficient function of x^i, as a series in y."""
        return TruncatedSeries1(self.coeffs[i, :], self.degree_cap)

    def coeff_in_x(self, j):
        """The coefficient function of y^j, as a series in x."""
        return TruncatedSeries1(self.coeffs[:, j], self.degree_cap)

    # -- evaluation ----------------------------------------------------

    def eval(self, x, y):
        """Horner evaluation; x and y may be scalars or numpy arrays."""
        x = np.asarray(x, dtype=np.complex128)
        y = np.asarray(y, dtype=np.complex128)
        cap = self.degree_cap
        acc = np.zeros(np.broadcast(x, y).shape, dtype=np.complex128)
        for i in range(cap, -1, -1):
            row = np.zeros_like(acc)
            cs = self.coeffs[i]
            for j in range(cap - i, -1, -1):
                row = row * y + cs[j]
            acc = acc * x + row
        if acc.shape == ():
            return complex(acc)
        return acc

    def __call__(self, x, y):
        return self.eval(x, y)

    # -- serialization ---------------------------------------------------

    def to_json(self):
        cap = self.degree_cap
        rows = []
        for i in range(cap + 1):
            for j in range(cap + 1 - i):
                c = self.coeffs[i, j]
                if c != 0:
                    rows.append([i, j, float(c.real), float(c.imag)])
        return {"degree_cap": cap, "coeffs": rows}

    @classmethod
    def from_json(cls, obj):
        cap = int(obj["degree_cap"])
        terms = []
        for row in obj["coeffs"]:
            if len(row) != 4:
                raise SeriesDomainError(
                    "two-variable coefficient rows are [i, j, re, im]"
                )
            i, j, re, im = row
            terms.append((int(i), int(j), complex(re, im)))
        return cls.from_terms(terms, cap)


def _mask_beyond(cap):
    idx = np.arange(cap + 1)
    return idx[:, None] + idx[None, :] > cap


def series_from_json(obj):
    """Dispatch on row width: 3 entries means one variable, 4 means two."""
    rows = obj.get("coeffs", [])
    if rows and len(rows[0]) == 4:
        return TruncatedSeries2.from_json(obj)
    if rows and len(rows[0]) == 3:
        return TruncatedSeries1.from_json(obj)
    if not rows:
        # An all-zero series defaults to one variable.
        return TruncatedSeries1.zero(int(obj["degree_cap"]))
    raise SeriesDomainError("unrecognized series JSON layout")
