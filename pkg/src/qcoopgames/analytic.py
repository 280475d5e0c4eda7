"""Closed-form payoffs of the cooperative games under each channel.

These are hand-transcribed rational expressions in q, r, s, p and theta.  They
share no code with the Kraus pipeline in :mod:`qcoopgames.game`, which makes
them usable as an independent oracle for it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel
from .game import check_theta


class Role(str, enum.Enum):
    COOPERATOR = "cooperator"
    SOLO_C = "C"
    SOLO_D = "D"


@dataclass(frozen=True)
class AnalyticQuery:
    players: int
    kind: Channel
    role: Role
    p: float
    theta: float
    q: float
    r: float
    s: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Channel(self.kind))
        object.__setattr__(self, "role", Role(self.role))
        if self.players not in (3, 4):
            raise ValueError(f"only 3- and 4-player games are defined, got {self.players}")
        if (self.s is None) != (self.players == 3):
            raise ValueError("s must be given exactly for the four-player game")
        if self.role is Role.SOLO_D and self.players != 4:
            raise ValueError("player D exists only in the four-player game")
        for name in ("p", "q", "r", "s"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        object.__setattr__(self, "theta", check_theta(self.theta))


def _damping_factor(p: float, theta: float) -> float:
    # population transfer term shared by every amplitude-damping formula
    return 1 - 2 * p * (1 - p) * (1 - math.cos(theta))


# --- three players -------------------------------------------------------


def _ad3_cooperator(p, theta, q, r):
    # printed as a ratio of two negatives; both signs flipped here
    root = math.sqrt(q * r * (1 - p) * (1 - q) * (1 - r))
    sin = math.sin(theta)
    num = (q + r - 2 * q * r) * _damping_factor(p, theta) + 2 * (1 - p) * root * sin
    return num / (1 + 4 * (1 - p) * root * sin)


def _ad3_solo(p, theta, q, r):
    root = math.sqrt(q * r * (1 - p) * (1 - q) * (1 - r))
    sin = math.sin(theta)
    num = 2 * ((2 * q * r - q - r) * (-1 + 2 * p * (1 - p) * (1 - math.cos(theta)))) + 4 * (
        1 - p
    ) * root * sin
    return -num / (1 + 4 * (1 - p) * root * sin)


def _pd3_cooperator(p, theta, q, r):
    root = math.sqrt(q * r * (1 - p) * (1 - q) * (1 - r))
    sin = math.sin(theta)
    return (q + r - 2 * q * r + 2 * (1 - p) * root * sin) / (1 + 4 * (1 - p) * root * sin)


def _dp3_cooperator(p, theta, q, r):
    t = 3 - 4 * p
    root = math.sqrt(q * r * (1 - q) * (1 - r))
    sin = math.sin(theta)
    num = t**2 * (3 * q + 3 * r - 6 * q * r + 2 * t * root * sin)
    return num / (27 - 4 * (-t) ** 3 * root * sin)


def _dp3_solo(p, theta, q, r):
    t = 3 - 4 * p
    root = math.sqrt(q * r * (1 - q) * (1 - r))
    sin = math.sin(theta)
    num = 2 * t**2 * (3 * q + 3 * r - 6 * q * r + 2 * t * root * sin)
    return -num / (27 - 4 * (-t) ** 3 * root * sin)


def _three_player(kind, role, p, theta, q, r):
    if kind is Channel.AD:
        f = _ad3_cooperator if role is Role.COOPERATOR else _ad3_solo
        return f(p, theta, q, r)
    if kind is Channel.DP:
        f = _dp3_cooperator if role is Role.COOPERATOR else _dp3_solo
        return f(p, theta, q, r)
    coop = _pd3_cooperator(p, theta, q, r)
    return coop if role is Role.COOPERATOR else -2 * coop


# --- four players --------------------------------------------------------


def _four_player(kind, role, p, theta, q, r, s):
    root = math.sqrt(q * r * s * (1 - q) * (1 - r) * (1 - s))
    sin = math.sin(theta)

    if kind is Channel.DP:
        t = 3 - 4 * p
        den = 81 + 8 * t**4 * root * sin
        if role is Role.COOPERATOR:
            return t**2 * (9 * (r + s - 2 * r * s) + 4 * t**2 * root * sin) / den
        if role is Role.SOLO_C:
            inner = 9 * (s - 4 * q * s - 3 * r + 4 * q * r + 2 * r * s) - 4 * t**2 * root * sin
            return t**2 * inner / den
        inner = 9 * (-r - 4 * q * s + 3 * s + 4 * q * r - 2 * r * s) + 4 * t**2 * root * sin
        return -(t**2) * inner / den

    coherence = 4 * (1 - p) ** 2 * root * sin
    den = 1 + 8 * (1 - p) ** 2 * root * sin
    if kind is Channel.AD:
        f = _damping_factor(p, theta)
        if role is Role.COOPERATOR:
            return ((r + s - 2 * r * s) * f + coherence) / den
        if role is Role.SOLO_C:
            return ((s - 4 * q * s + r * (-3 + 4 * q + 2 * s)) * f - coherence) / den
        return ((r * (-1 + 4 * q - 2 * s) + (3 - 4 * q) * s) * (-f) - coherence) / den

    if role is Role.COOPERATOR:
        return (r + s - 2 * r * s + coherence) / den
    if role is Role.SOLO_C:
        return (s - 4 * q * s - 3 * r + 4 * q * r + 2 * r * s - coherence) / den
    return (r - 4 * q * r - 3 * s + 4 * q * s + 2 * r * s - coherence) / den


def payoff_closed_form(query: AnalyticQuery) -> float:
    if query.players == 3:
        return _three_player(query.kind, query.role, query.p, query.theta, query.q, query.r)
    return _four_player(query.kind, query.role, query.p, query.theta, query.q, query.r, query.s)


def closed_form_payoffs(players, kind, p, theta, q, r, s=None) -> np.ndarray:
    """Full payoff vector A, B, C(, D) assembled from the per-role formulas."""

    def one(role):
        return payoff_closed_form(AnalyticQuery(players, kind, role, p, theta, q, r, s))

    coop = one(Role.COOPERATOR)
    if players == 3:
        return np.array([coop, coop, one(Role.SOLO_C)])
    return np.array([coop, coop, one(Role.SOLO_C), one(Role.SOLO_D)])


def max_payoff_closed_form(players, kind, p, theta, role=Role.COOPERATOR) -> float:
    """Payoff at the symmetric maximizer q = r (= s) = 1/2."""
    kind, role = Channel(kind), Role(role)
    AnalyticQuery(players, kind, role, p, theta, 0.5, 0.5, None if players == 3 else 0.5)
    theta = check_theta(theta)
    sin = math.sin(theta)

    if players == 3:
        if kind is Channel.PD:
            return 0.5 if role is Role.COOPERATOR else -1.0
        if kind is Channel.AD:
            c = (1 - p) ** 1.5 * sin
            if role is Role.COOPERATOR:
                return (_damping_factor(p, theta) + c) / (2 * (1 + c))
            return -(_damping_factor(p, theta) + c) / (1 + c)
        t = 3 - 4 * p
        if role is Role.COOPERATOR:
            return t**2 * (3 + t * sin) / (54 - 2 * (-t) ** 3 * sin)
        return -(t**2) * (3 + t * sin) / (27 - (-t) ** 3 * sin)

    sign = 1.0 if role is Role.COOPERATOR else -1.0
    if kind is Channel.PD:
        return 0.5 * sign
    if kind is Channel.AD:
        c = (1 - p) ** 2 * sin
        return sign * (_damping_factor(p, theta) + c) / (2 * (1 + c))
    # the four-player depolarizing maximum is not printed; this is the
    # general formula evaluated at q = r = s = 1/2
    t = 3 - 4 * p
    return sign * t**2 * (9 + t**2 * sin) / (2 * (81 + t**4 * sin))
