"""
Complete elliptic integral of the first kind and Jacobi elliptic functions.

Both are built on the arithmetic-geometric mean. Callers that already know the
complementary modulus k' = sqrt(1 - k^2) to full precision (the Zolotarev
coefficients need K(k') with k' close to 1) can pass it explicitly, which keeps
moduli within 1e-16 of one usable.
"""

import math
from typing import NamedTuple, Optional

from apps.core.exceptions import DomainError
from apps.core.utils import EPS

MAX_AGM_STEPS = 64
SMALL_MODULUS = 1e-8
# Above this modulus sn/cn/dn go through the imaginary transformation.
TRIG_MODULUS_LIMIT = 1.0 / math.sqrt(2.0)


class JacobiTriple(NamedTuple):
    sn: float
    cn: float
    dn: float


def _complement(k: float) -> float:
    return math.sqrt((1.0 - k) * (1.0 + k))


def _check_modulus(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0.0 or k >= 1.0:
        raise DomainError(f"Elliptic modulus must lie in [0, 1), got {k!r}.")
    return k


def _check_complement(kp: float) -> float:
    kp = float(kp)
    if not math.isfinite(kp) or kp <= 0.0 or kp > 1.0:
        raise DomainError(f"Complementary modulus must lie in (0, 1], got {kp!r}.")
    return kp


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(MAX_AGM_STEPS):
        if abs(a - b) <= EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def complete_elliptic_K(k: float, kp: Optional[float] = None) -> float:
    """
    Complete elliptic integral of the first kind.

    Args:
        k: Modulus in [0, 1)
        kp: Optional complementary modulus sqrt(1 - k^2); when given it is
            used instead of recomputing it from k

    Returns:
        K(k) = integral of 1/sqrt(1 - k^2 sin^2 t) over [0, pi/2]
    """
    if kp is None:
        kp = _complement(_check_modulus(k))
    return math.pi / (2.0 * agm(1.0, _check_complement(kp)))


def _descending_landen(modulus: float, complement: float):
    """AGM ladder (a_n, c_n) for the descending Landen transformation."""
    a = [1.0]
    c = [modulus]
    b = complement
    while c[-1] > EPS * a[-1] and len(a) < MAX_AGM_STEPS:
        a_next = 0.5 * (a[-1] + b)
        # c_{n+1} = (a_n - b_n)/2 written without cancellation
        c.append(c[-1] * c[-1] / (4.0 * a_next))
        b = math.sqrt(a[-1] * b)
        a.append(a_next)
    return a, c


def _trigonometric(u: float, k: float, kp: float) -> JacobiTriple:
    if k < SMALL_MODULUS:
        return JacobiTriple(math.sin(u), math.cos(u), 1.0)
    a, c = _descending_landen(k, kp)
    steps = len(a) - 1
    phi = (2.0**steps) * a[-1] * u
    for n in range(steps, 0, -1):
        phi = 0.5 * (math.asin(c[n] * math.sin(phi) / a[n]) + phi)
    sn = math.sin(phi)
    return JacobiTriple(sn, math.cos(phi), math.sqrt(1.0 - k * k * sn * sn))


def _hyperbolic(u: float, k: float, kp: float) -> JacobiTriple:
    # sn(u,k) = -i sc(iu,k'): the amplitude of iu under k' stays on the
    # imaginary axis, so the Landen recursion runs on its imaginary part.
    # Valid for 0 <= u < K(k).
    a, c = _descending_landen(kp, k)
    steps = len(a) - 1
    psi = (2.0**steps) * a[-1] * u
    for n in range(steps, 0, -1):
        psi = 0.5 * (math.asinh(c[n] * math.sinh(psi) / a[n]) + psi)
    sh = math.sinh(psi)
    ch = math.cosh(psi)
    return JacobiTriple(math.tanh(psi), 1.0 / ch, math.sqrt(1.0 + (kp * sh) ** 2) / ch)


def _reduced_hyperbolic(u: float, k: float, kp: float) -> JacobiTriple:
    quarter = complete_elliptic_K(k, kp)
    t = math.fmod(u, 4.0 * quarter)
    if t < 0.0:
        t += 4.0 * quarter
    sn_sign = cn_sign = 1.0
    if t >= 2.0 * quarter:
        t -= 2.0 * quarter
        sn_sign = cn_sign = -1.0
    if t > quarter:
        t = 2.0 * quarter - t
        cn_sign = -cn_sign
    if t <= 0.5 * quarter:
        sn, cn, dn = _hyperbolic(t, k, kp)
    else:
        # Reflect about the quarter period so cn keeps full relative accuracy.
        s, c, d = _hyperbolic(quarter - t, k, kp)
        sn, cn, dn = c / d, kp * s / d, kp / d
    return JacobiTriple(sn_sign * sn, cn_sign * cn, dn)


def jacobi_sn_cn_dn(u: float, k: float, kp: Optional[float] = None) -> JacobiTriple:
    """
    Jacobi elliptic functions sn, cn and dn.

    Uses the descending Landen transformation with a trigonometric base case
    for small moduli; moduli above 1/sqrt(2) go through Jacobi's imaginary
    transformation so that cn stays accurate near the quarter period.

    Args:
        u: Real argument
        k: Modulus in [0, 1)
        kp: Optional complementary modulus, see complete_elliptic_K

    Returns:
        JacobiTriple(sn, cn, dn)
    """
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"Argument must be finite, got {u!r}.")
    if kp is None:
        k = _check_modulus(k)
        kp = _complement(k)
    else:
        kp = _check_complement(kp)
        k = min(float(k), 1.0)
    if u == 0.0:
        return JacobiTriple(0.0, 1.0, 1.0)
    if k <= TRIG_MODULUS_LIMIT:
        return _trigonometric(u, k, kp)
    return _reduced_hyperbolic(u, k, kp)
