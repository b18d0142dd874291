"""Closed-form centered Gaussian moments.

Normalized moments of the Maxwellian (m / 2 pi kT)^(3/2) exp(-m |v|^2 / 2kT):

    <v1^a v2^b v3^g> = (a-1)!! (b-1)!! (g-1)!! (kT/m)^((a+b+g)/2)

for even exponents, and zero as soon as one exponent is odd.
"""

import math

INT64_MAX = 2**63 - 1


def odd_double_factorial(x: int) -> int:
    """(x-1)(x-3)...1 for even x >= 0; the empty product (x = 0) is 1."""
    if x < 0 or x % 2:
        raise ValueError(f"Expected an even nonnegative exponent (got {x})")
    return math.prod(range(x - 1, 0, -2))


def double_factorial_product(e) -> int:
    """Product of (x-1)(x-3)...1 over the six exponents (a, b, g, d, r, h)."""
    if len(e) != 6:
        raise ValueError(f"Expected six exponents (got {len(e)})")
    result = 1
    for x in e:
        result *= odd_double_factorial(x)
    if result > INT64_MAX:
        raise OverflowError(f"Double-factorial product for {tuple(e)} exceeds the 64-bit range")
    return result


def _check_exponents(e, n):
    if len(e) != n or any(x < 0 for x in e):
        raise ValueError(f"Expected {n} nonnegative exponents (got {tuple(e)})")


def gaussian_moment_3d(mass: float, kT: float, e) -> float:
    """Normalized 3-D Maxwellian moment of v1^a v2^b v3^g."""
    _check_exponents(e, 3)
    if not (mass > 0 and kT > 0):
        raise ValueError("mass and kT must be positive")
    if any(x % 2 for x in e):
        return 0.0
    coeff = odd_double_factorial(e[0]) * odd_double_factorial(e[1]) * odd_double_factorial(e[2])
    return float(coeff) * (kT / mass) ** (sum(e) // 2)


def gaussian_moment_6d(m_i: float, m_j: float, kT: float, e) -> float:
    """Moment over the product of species-i (v) and species-j (v*) Maxwellians.

    Exponents (a, b, g, d, r, h) act on v1, v*1, v2, v*2, v3, v*3.
    """
    _check_exponents(e, 6)
    if not (m_i > 0 and m_j > 0 and kT > 0):
        raise ValueError("masses and kT must be positive")
    if any(x % 2 for x in e):
        return 0.0
    alpha, beta, gamma, delta, rho, eta = e
    return (
        float(double_factorial_product(e))
        * (kT / m_i) ** ((alpha + gamma + rho) // 2)
        * (kT / m_j) ** ((beta + delta + eta) // 2)
    )
