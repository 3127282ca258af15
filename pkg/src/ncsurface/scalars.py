"""Exact coefficient field for the free-algebra engine.

A Scalar is an element of Q(i, h) where h is a formal square root of a
fixed positive rational ``hsq`` (the carrier of the exact i*hbar appearing
in the generator relations).  Elements are stored as

    (re + im*i) + (hre + him*i) * h,        h**2 = hsq,

with all four components ``fractions.Fraction``.  Scalars with no h-part
carry ``hsq = 0`` so that equality and hashing are canonical; scalars from
different extensions (distinct nonzero hsq) must never be mixed.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)

RationalLike = int | Fraction


class Scalar:
    __slots__ = ("re", "im", "hre", "him", "hsq")

    def __init__(self, re=0, im=0, hre=0, him=0, hsq=0):
        re, im, hre, him = (Fraction(v) for v in (re, im, hre, him))
        hsq = Fraction(hsq)
        if hre == 0 and him == 0:
            hsq = _ZERO
        elif hsq <= 0:
            raise ValueError("h-part requires a positive rational hsq")
        self.re, self.im, self.hre, self.him, self.hsq = re, im, hre, him, hsq

    # -- constructors -------------------------------------------------

    @classmethod
    def i(cls) -> "Scalar":
        return cls(0, 1)

    @classmethod
    def i_hbar(cls, hsq: RationalLike, factor: RationalLike = 1) -> "Scalar":
        """factor * i * h with h**2 = hsq (the exact i*hbar coefficient)."""
        return cls(0, 0, 0, factor, hsq=hsq)

    # -- field structure ----------------------------------------------

    def _merged_hsq(self, other: "Scalar") -> Fraction:
        if self.hsq and other.hsq and self.hsq != other.hsq:
            raise ValueError(
                f"mixing scalars over different extensions h^2={self.hsq} vs {other.hsq}"
            )
        return self.hsq or other.hsq

    @staticmethod
    def _coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(
            self.re + other.re,
            self.im + other.im,
            self.hre + other.hre,
            self.him + other.him,
            hsq=self._merged_hsq(other),
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, -self.hre, -self.him, hsq=self.hsq)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        hsq = self._merged_hsq(other)
        # (p + q h)(r + s h) = (pr + hsq qs) + (ps + qr) h, complex p,q,r,s
        pr_re = self.re * other.re - self.im * other.im
        pr_im = self.re * other.im + self.im * other.re
        qs_re = self.hre * other.hre - self.him * other.him
        qs_im = self.hre * other.him + self.him * other.hre
        ps_re = self.re * other.hre - self.im * other.him
        ps_im = self.re * other.him + self.im * other.hre
        qr_re = self.hre * other.re - self.him * other.im
        qr_im = self.hre * other.im + self.him * other.re
        return Scalar(
            pr_re + hsq * qs_re,
            pr_im + hsq * qs_im,
            ps_re + qr_re,
            ps_im + qr_im,
            hsq=hsq,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1, 1) / Fraction(other)
            return self * Scalar(inv)
        return NotImplemented

    # -- predicates / conversions --------------------------------------

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.hre or self.him)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.re, self.im, self.hre, self.him, self.hsq) == (
            other.re, other.im, other.hre, other.him, other.hsq)

    def __hash__(self):
        return hash((self.re, self.im, self.hre, self.him, self.hsq))

    def to_complex(self, h_value: float | None = None) -> complex:
        """Numeric value; h evaluates to sqrt(hsq) unless overridden."""
        if h_value is None:
            h_value = float(self.hsq) ** 0.5
        return complex(self.re + self.hre * h_value, self.im + self.him * h_value)

    def drop_h(self) -> "Scalar":
        """The hbar -> 0 specialization (h-part discarded)."""
        return Scalar(self.re, self.im)

    # -- canonical text form -------------------------------------------

    def __str__(self):
        parts = []
        for value, suffix in ((self.re, ""), (self.im, "*i"),
                              (self.hre, "*h"), (self.him, "*i*h")):
            if value == 0:
                continue
            body = str(value) if suffix == "" else f"{abs(value)}{suffix}"
            if not parts:
                parts.append(body if (suffix == "" or value > 0) else f"-{body}")
            else:
                parts.append(f"+{body}" if value > 0 else f"-{body}")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Scalar({self})"


ONE = Scalar(1)
ZERO = Scalar(0)
