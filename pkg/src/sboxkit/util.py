"""Small shared helpers."""

from fractions import Fraction


def exact_decimal(value):
    """Render a Fraction as an exact decimal string when possible.

    Works whenever the denominator is of the form 2^a * 5^b (all dyadic
    rationals qualify, as do means over 10^k trials).  Anything else falls
    back to the exact "p/q" form rather than rounding.
    """
    fr = Fraction(value)
    if fr.denominator == 1:
        return str(fr.numerator)
    den = fr.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{fr.numerator}/{fr.denominator}"
    digits = max(twos, fives)
    scaled = abs(fr.numerator) * 2 ** (digits - twos) * 5 ** (digits - fives)
    whole, frac = divmod(scaled, 10 ** digits)
    sign = "-" if fr.numerator < 0 else ""
    tail = str(frac).rjust(digits, "0").rstrip("0")
    return f"{sign}{whole}.{tail}" if tail else f"{sign}{whole}"
