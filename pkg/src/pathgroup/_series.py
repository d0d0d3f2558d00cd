"""Cancellation-free evaluation of the trigonometric combinations that vanish
to high order at tau = 0.

Below a per-function switch point each function is evaluated from its Maclaurin series; the
truncation error there is far below double precision.
"""

from fractions import Fraction as Fr

import numpy as np

# below these the direct formulas lose more than a couple of digits to cancellation
SWITCH = {"a": 1.0, "b": 1.0, "f1": 1.5, "a1m": 1.5, "g3": 1.5, "h3": 1.5, "d2": 1.0}

# (leading power, coefficients of the even powers after it); 16 terms
_SERIES = {
    # tau - sin cos
    "a": (3, [
        Fr(2, 3), Fr(-2, 15), Fr(4, 315), Fr(-2, 2835), Fr(4, 155925), Fr(-4, 6081075), Fr(8,
        638512875), Fr(-2, 10854718875), Fr(4, 1856156927625), Fr(-4, 194896477400625), Fr(8,
        49308808782358125), Fr(-4, 3698160658676859375), Fr(8, 1298054391195577640625), Fr(-8,
        263505041412702261046875), Fr(16, 122529844256906551386796875), Fr(-2,
        4043484860477916195764296875)]),
    # sin - tau cos
    "b": (3, [
        Fr(1, 3), Fr(-1, 30), Fr(1, 840), Fr(-1, 45360), Fr(1, 3991680), Fr(-1, 518918400),
        Fr(1, 93405312000), Fr(-1, 22230464256000), Fr(1, 6758061133824000), Fr(-1,
        2554547108585472000), Fr(1, 1175091669949317120000), Fr(-1, 646300418472124416000000),
        Fr(1, 418802671169936621568000000), Fr(-1, 315777214062132212662272000000), Fr(1,
        274094621805930760590852096000000), Fr(-1, 271353675587871452984943575040000000)]),
    # tau^2 + tau sin cos - 2 sin^2
    "f1": (6, [
        Fr(2, 45), Fr(-2, 315), Fr(2, 4725), Fr(-8, 467775), Fr(4, 8513505), Fr(-2, 212837625),
        Fr(2, 13956067125), Fr(-16, 9280784638125), Fr(4, 238206805711875), Fr(-4,
        29585285269414875), Fr(4, 4370553505709015625), Fr(-16, 3028793579456347828125), Fr(8,
        304044278553117993515625), Fr(-2, 17504263465272364483828125), Fr(2,
        4582616175208305021866203125), Fr(-32, 21652861427859241228317809765625)]),
    # tau sin - tau^2 cos - tau^2 + sin^2
    "a1m": (6, [
        Fr(1, 90), Fr(-1, 504), Fr(1, 8400), Fr(-241, 59875200), Fr(1003, 10897286400), Fr(-113,
        72648576000), Fr(4087, 200074178304000), Fr(-65491, 304112751022080000), Fr(571,
        306100416061440000), Fr(-104851, 7755605021665492992000), Fr(2097113,
        25205716320412852224000000), Fr(-1657, 3764053637181652598784000), Fr(67108759,
        33156607476523882329538560000000), Fr(-2581109, 316263025160689339143290880000000),
        Fr(14913079, 512556942777090522304893419520000000), Fr(-4294967143,
        46499165848737652183499931018854400000000)]),
    # 3 sin - 3 tau cos - tau^2 sin
    "g3": (5, [
        Fr(1, 15), Fr(-1, 210), Fr(1, 7560), Fr(-1, 498960), Fr(1, 51891840), Fr(-1,
        7783776000), Fr(1, 1587890304000), Fr(-1, 422378820864000), Fr(1, 141919283810304000),
        Fr(-1, 58754583497465856000), Fr(1, 29377291748732928000000), Fr(-1,
        17450111298747359232000000), Fr(1, 12145277463928162025472000000), Fr(-1,
        9789093635926098592530432000000), Fr(1, 9045122519595715099498119168000000), Fr(-1,
        9497378645575500854473025126400000000)]),
    # 3 tau^2 + tau cos sin - 4 sin^2
    "h3": (4, [
        Fr(2, 3), Fr(-2, 45), Fr(0), Fr(2, 14175), Fr(-4, 467775), Fr(4, 14189175), Fr(-4,
        638512875), Fr(2, 19538493975), Fr(-4, 3093594879375), Fr(4, 306265893058125), Fr(-16,
        147926426347074375), Fr(4, 5341787618088796875), Fr(-8, 1817276147673808696875), Fr(8,
        359325056471866719609375), Fr(-4, 40843281418968850462265625), Fr(2,
        5287634048317275025230234375)]),
    # tau^2 - sin^2
    "d2": (4, [
        Fr(1, 3), Fr(-2, 45), Fr(1, 315), Fr(-2, 14175), Fr(2, 467775), Fr(-4, 42567525), Fr(1,
        638512875), Fr(-2, 97692469875), Fr(2, 9280784638125), Fr(-4, 2143861251406875), Fr(2,
        147926426347074375), Fr(-4, 48076088562799171875), Fr(4, 9086380738369043484375), Fr(-8,
        3952575621190533915703125), Fr(1, 122529844256906551386796875), Fr(-2,
        68739242628124575327993046875)]),
}

_DIRECT = {
    "a": lambda t: t - np.sin(t) * np.cos(t),
    "b": lambda t: np.sin(t) - t * np.cos(t),
    "f1": lambda t: t * t + t * np.sin(t) * np.cos(t) - 2 * np.sin(t) ** 2,
    # sin (tau + sin) - 2 tau^2 cos^2(tau/2): no cancellation as tau -> pi
    "a1m": lambda t: np.sin(t) * (t + np.sin(t)) - 2 * t * t * np.cos(t / 2) ** 2,
    "g3": lambda t: 3 * np.sin(t) - 3 * t * np.cos(t) - t * t * np.sin(t),
    "h3": lambda t: 3 * t * t + t * np.cos(t) * np.sin(t) - 4 * np.sin(t) ** 2,
    "d2": lambda t: t * t - np.sin(t) ** 2,
}

_COEFFS = {k: (p, [float(c) for c in cs]) for k, (p, cs) in _SERIES.items()}


def _series(name, t):
    p, cs = _COEFFS[name]
    t2 = t * t
    acc = np.zeros_like(t)
    for c in reversed(cs):
        acc = acc * t2 + c
    return acc * t ** p


def evaluate(name, tau):
    """Evaluate the named combination at ``tau`` (scalar or array)."""
    t = np.asarray(tau, dtype=float)
    small = np.abs(t) < SWITCH[name]
    if t.ndim == 0:
        out = _series(name, t) if small else _DIRECT[name](t)
        return float(out)
    out = _DIRECT[name](t)
    if np.any(small):
        out = np.where(small, _series(name, np.where(small, t, 0.0)), out)
    return out


def a_fun(tau):
    """tau - sin(tau) cos(tau)."""
    return evaluate("a", tau)


def b_fun(tau):
    """sin(tau) - tau cos(tau)."""
    return evaluate("b", tau)
