"""Sparse Fourier-Taylor and plain Taylor arithmetic over mpmath.

FTSeries represents sum_{m,j} a[m, j] * t**m * exp(i j s) with mpc
coefficients, truncated at t-degree `deg` and harmonic width `jmax`.  It is
the workhorse for the order-by-order solve of the manifold invariance
equation, which needs coefficients far below double rounding.

Taylor1 is a dense single-variable Taylor polynomial whose coefficients can
be mpf/mpc scalars or, generically, anything with ring operations (including
other Taylor1 instances), used for jet transport and 1-d conjugacies.
"""

from __future__ import annotations

import mpmath as mp


class FTSeries:
    __slots__ = ("c", "deg", "jmax")

    def __init__(self, coeffs=None, deg: int = 12, jmax: int = 12):
        self.c = dict(coeffs or {})
        self.deg = deg
        self.jmax = jmax

    # -- constructors -------------------------------------------------------
    @staticmethod
    def const(val, deg=12, jmax=12):
        s = FTSeries(deg=deg, jmax=jmax)
        if val != 0:
            s.c[(0, 0)] = mp.mpc(val)
        return s

    @staticmethod
    def t_power(m: int, deg=12, jmax=12, val=1):
        s = FTSeries(deg=deg, jmax=jmax)
        if m <= deg:
            s.c[(m, 0)] = mp.mpc(val)
        return s

    @staticmethod
    def harmonic(j: int, deg=12, jmax=12, val=1):
        """val * exp(i j s)."""
        s = FTSeries(deg=deg, jmax=jmax)
        s.c[(0, j)] = mp.mpc(val)
        return s

    def copy(self):
        return FTSeries(self.c, self.deg, self.jmax)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FTSeries):
            other = FTSeries.const(other, self.deg, self.jmax)
        out = FTSeries(self.c, self.deg, self.jmax)
        for k, v in other.c.items():
            out.c[k] = out.c.get(k, mp.mpc(0)) + v
        return out

    __radd__ = __add__

    def __neg__(self):
        return FTSeries({k: -v for k, v in self.c.items()}, self.deg, self.jmax)

    def __sub__(self, other):
        if not isinstance(other, FTSeries):
            other = FTSeries.const(other, self.deg, self.jmax)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FTSeries):
            out = FTSeries(deg=self.deg, jmax=self.jmax)
            for k, v in self.c.items():
                out.c[k] = v * other
            return out
        out = FTSeries(deg=self.deg, jmax=self.jmax)
        oc = out.c
        for (m1, j1), v1 in self.c.items():
            for (m2, j2), v2 in other.c.items():
                m = m1 + m2
                j = j1 + j2
                if m > self.deg or abs(j) > self.jmax:
                    continue
                key = (m, j)
                oc[key] = oc.get(key, mp.mpc(0)) + v1 * v2
        return out

    __rmul__ = __mul__

    def pow_int(self, n: int):
        out = FTSeries.const(1, self.deg, self.jmax)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- structure ----------------------------------------------------------
    def truncate(self, deg: int):
        return FTSeries({k: v for k, v in self.c.items() if k[0] <= deg},
                        deg, self.jmax)

    def min_order(self) -> int:
        return min((m for (m, _), v in self.c.items() if v != 0), default=self.deg + 1)

    def order_slice(self, m: int) -> dict:
        """Harmonic dict {j: coeff} of the t**m layer."""
        return {j: v for (mm, j), v in self.c.items() if mm == m}

    def conj(self):
        return FTSeries({(m, -j): mp.conj(v) for (m, j), v in self.c.items()},
                        self.deg, self.jmax)

    def d_ds(self):
        return FTSeries({k: v * (1j * k[1]) for k, v in self.c.items()},
                        self.deg, self.jmax)

    def integrate_s(self):
        """Antiderivative in s of the mean-free part (j = 0 layers must vanish)."""
        out = {}
        for (m, j), v in self.c.items():
            if j == 0:
                if abs(v) > mp.mpf(10) ** (-mp.mp.dps + 8):
                    raise ValueError("integrate_s of a series with nonzero mean")
                continue
            out[(m, j)] = v / (1j * j)
        return FTSeries(out, self.deg, self.jmax)

    def chop(self, tol=None):
        tol = tol if tol is not None else mp.mpf(10) ** (-mp.mp.dps + 5)
        return FTSeries({k: v for k, v in self.c.items() if abs(v) > tol},
                        self.deg, self.jmax)

    def eval(self, t, s):
        tot = mp.mpc(0)
        for (m, j), v in self.c.items():
            tot += v * mp.mpc(t) ** m * mp.exp(1j * j * mp.mpf(s))
        return tot

    def eval_t_poly(self, s):
        """Coefficient list in t at fixed epoch s (length deg + 1)."""
        out = [mp.mpc(0)] * (self.deg + 1)
        for (m, j), v in self.c.items():
            out[m] += v * mp.exp(1j * j * mp.mpf(s))
        return out


def ft_sin_cos(delta: FTSeries, depth: int | None = None):
    """(sin, cos) of a series with no constant term, by truncated power series."""
    if (0, 0) in delta.c and abs(delta.c[(0, 0)]) > mp.mpf(10) ** (-mp.mp.dps + 5):
        raise ValueError("ft_sin_cos requires a series without constant term")
    mo = max(delta.min_order(), 1)
    if depth is None:
        depth = delta.deg // mo + 1
    sin_s = FTSeries(deg=delta.deg, jmax=delta.jmax)
    cos_s = FTSeries.const(1, delta.deg, delta.jmax)
    power = FTSeries.const(1, delta.deg, delta.jmax)
    fact = mp.mpf(1)
    for n in range(1, depth + 1):
        power = power * delta
        fact *= n
        if n % 2 == 1:
            sin_s = sin_s + power * (mp.mpf(-1) ** ((n - 1) // 2) / fact)
        else:
            cos_s = cos_s + power * (mp.mpf(-1) ** (n // 2) / fact)
    return sin_s, cos_s


class Taylor1:
    """Dense 1-variable Taylor polynomial with generic coefficient ring."""

    __slots__ = ("a", "deg")

    def __init__(self, coeffs, deg: int):
        a = list(coeffs)[: deg + 1]
        a += [0] * (deg + 1 - len(a))
        self.a = a
        self.deg = deg

    @staticmethod
    def var(deg: int, one=mp.mpf(1)):
        return Taylor1([one * 0, one], deg)

    def __add__(self, other):
        if isinstance(other, Taylor1):
            return Taylor1([x + y for x, y in zip(self.a, other.a)], self.deg)
        a = self.a[:]
        a[0] = a[0] + other
        return Taylor1(a, self.deg)

    __radd__ = __add__

    def __neg__(self):
        return Taylor1([-x for x in self.a], self.deg)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Taylor1) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Taylor1):
            return Taylor1([x * other for x in self.a], self.deg)
        out = [0] * (self.deg + 1)
        for i, x in enumerate(self.a):
            if isinstance(x, (int, float)) and x == 0:
                continue
            hi = self.deg - i
            for j, y in enumerate(other.a[: hi + 1]):
                out[i + j] = out[i + j] + x * y
        return Taylor1(out, self.deg)

    __rmul__ = __mul__

    def pow_int(self, n: int):
        out = Taylor1([1], self.deg)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def compose(self, inner: "Taylor1") -> "Taylor1":
        """self(inner(t)); inner must have zero constant term."""
        out = Taylor1([0], self.deg)
        for coeff in reversed(self.a):
            out = out * inner + coeff
        return out

    def eval(self, t):
        tot = 0
        for coeff in reversed(self.a):
            tot = tot * t + coeff
        return tot

    def integrate(self):
        """Antiderivative with zero constant term."""
        out = [0] * (self.deg + 1)
        for i in range(self.deg):
            out[i + 1] = self.a[i] / mp.mpf(i + 1)
        return Taylor1(out, self.deg)

    def truncated(self, deg):
        return Taylor1(self.a[: deg + 1], deg)


def taylor_sin_cos(delta: Taylor1, depth: int | None = None):
    """(sin, cos) of a Taylor polynomial with zero constant term."""
    mo = next((i for i, v in enumerate(delta.a) if i > 0 and v != 0), delta.deg + 1)
    if depth is None:
        depth = delta.deg // max(mo, 1) + 1
    s = Taylor1([0], delta.deg)
    c = Taylor1([1], delta.deg)
    power = Taylor1([1], delta.deg)
    fact = mp.mpf(1)
    for n in range(1, depth + 1):
        power = power * delta
        fact *= n
        if n % 2 == 1:
            s = s + power * (mp.mpf(-1) ** ((n - 1) // 2) / fact)
        else:
            c = c + power * (mp.mpf(-1) ** (n // 2) / fact)
    return s, c
