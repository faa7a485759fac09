"""Entropy functionals and the information measures built from them.

All quantities are in bits (base-2 logarithms). Values are returned as
EntropyScalar, a float subclass tagged with the kind of quantity it
carries; an infinite relative entropy is a tagged +inf, never an
overflow. Eigenvalues are clipped at zero before taking logarithms, with
the limit x log x -> 0 applied at x = 0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    DimensionMismatch,
    InfiniteDivergence,
    InvalidChannel,
    InvalidOrder,
    InvalidProbability,
)
from .qmath import (
    COMPLETENESS_TOL,
    Ensemble,
    _as_matrix,
    partial_trace,
)

_KINDS = frozenset(
    {
        "shannon",
        "von_neumann",
        "relative",
        "holevo",
        "mutual",
        "conditional",
        "renyi",
        "coherent",
        "exchange",
    }
)

_SUPPORT_TOL = 1e-12


class EntropyScalar(float):
    """A float in bits tagged with the kind of entropy it measures."""

    __slots__ = ("kind",)

    def __new__(cls, value: float, kind: str):
        if kind not in _KINDS:
            raise ValueError(f"unknown entropy kind {kind!r}")
        obj = super().__new__(cls, value)
        obj.kind = kind
        return obj

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self)

    def __repr__(self):
        return f"EntropyScalar({float(self)!r}, kind={self.kind!r})"


def _plog2(x: np.ndarray) -> np.ndarray:
    """Elementwise x * log2(x) with the x = 0 limit set to 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def binary_entropy(p: float) -> EntropyScalar:
    """H2(p) = -p log2 p - (1-p) log2(1-p), zero at both endpoints."""
    p = float(p)
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise InvalidProbability(f"p = {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return EntropyScalar(-float(_plog2([p, 1.0 - p]).sum()), "shannon")


def von_neumann(rho) -> EntropyScalar:
    """S(rho) = -sum_i lambda_i log2 lambda_i over the spectrum."""
    w = np.clip(np.linalg.eigvalsh(_as_matrix(rho)), 0.0, None)
    return EntropyScalar(-float(_plog2(w).sum()), "von_neumann")


def relative_entropy(rho, sigma) -> EntropyScalar:
    """D(rho || sigma) = Tr rho (log2 rho - log2 sigma).

    Returns tagged +inf when the support of rho is not contained in the
    support of sigma.
    """
    a = _as_matrix(rho)
    b = _as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatch(f"state dims differ: {a.shape[0]} vs {b.shape[0]}")
    wa, va = np.linalg.eigh(a)
    wb, vb = np.linalg.eigh(b)
    wa = np.clip(wa, 0.0, None)
    wb = np.clip(wb, 0.0, None)
    # support check: any weight of rho on the kernel of sigma diverges
    kernel = wb <= _SUPPORT_TOL
    if np.any(kernel):
        overlap = np.abs(va.conj().T @ vb[:, kernel]) ** 2
        mass = float((wa[:, None] * overlap).sum())
        if mass > _SUPPORT_TOL:
            return EntropyScalar(math.inf, "relative")
    term_rho = float(_plog2(wa).sum())
    # cross term: sum_ij wa_i |<va_i|vb_j>|^2 log2 wb_j over sigma's support
    sup = ~kernel
    overlap = np.abs(va.conj().T @ vb[:, sup]) ** 2
    term_cross = float((wa[:, None] * overlap * np.log2(wb[sup])[None, :]).sum())
    return EntropyScalar(max(term_rho - term_cross, 0.0), "relative")


def relative_entropy_bloch(r_rho, r_sigma) -> EntropyScalar:
    """Qubit relative entropy straight from two Bloch vectors.

    Closed form in the radii r_rho, r_sigma and the angle between the
    vectors; equals the matrix definition exactly. Requires |r_sigma| < 1
    unless the two vectors coincide; a pure sigma with any other rho has
    divergent relative entropy and raises InfiniteDivergence.
    """
    a = np.asarray(tuple(r_rho), dtype=float)
    b = np.asarray(tuple(r_sigma), dtype=float)
    if a.shape != (3,) or b.shape != (3,):
        raise DimensionMismatch("Bloch vectors need exactly 3 components")
    ra = float(np.linalg.norm(a))
    rb = float(np.linalg.norm(b))
    if ra > 1.0 + 1e-10 or rb > 1.0 + 1e-10:
        raise InfiniteDivergence("Bloch norm exceeds 1")
    ra = min(ra, 1.0)
    if rb >= 1.0 - 1e-12:
        if np.linalg.norm(a - b) <= 1e-12:
            return EntropyScalar(0.0, "relative")
        raise InfiniteDivergence("sigma is pure and differs from rho")
    # 1 - S(rho), written in a form stable at ra = 1
    first = 0.5 * float(_plog2([1.0 + ra, 1.0 - ra]).sum())
    half_log_ratio = 0.5 * math.log2((1.0 + rb) / (1.0 - rb))
    cos_term = float(a @ b) / rb if rb > 0.0 else 0.0
    value = (
        first
        - 0.5 * math.log2((1.0 + rb) * (1.0 - rb))
        - cos_term * half_log_ratio
    )
    return EntropyScalar(value, "relative")


def holevo_quantity(ensemble: Ensemble) -> EntropyScalar:
    """chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i)."""
    avg = ensemble.average()
    mix = float(von_neumann(avg))
    members = sum(
        p * float(von_neumann(s)) for p, s in zip(ensemble.weights, ensemble.states)
    )
    return EntropyScalar(max(mix - members, 0.0), "holevo")


def conditional_entropy(rho_ab, dims) -> EntropyScalar:
    """S(A|B) = S(AB) - S(B) for a bipartite state with subsystem dims."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionMismatch("conditional entropy needs exactly two subsystems")
    joint = float(von_neumann(rho_ab))
    s_b = float(von_neumann(partial_trace(rho_ab, dims, 1)))
    return EntropyScalar(joint - s_b, "conditional")


def mutual_information(rho_ab, dims) -> EntropyScalar:
    """I(A:B) = S(A) + S(B) - S(AB)."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionMismatch("mutual information needs exactly two subsystems")
    s_a = float(von_neumann(partial_trace(rho_ab, dims, 0)))
    s_b = float(von_neumann(partial_trace(rho_ab, dims, 1)))
    joint = float(von_neumann(rho_ab))
    return EntropyScalar(max(s_a + s_b - joint, 0.0), "mutual")


def renyi_entropy(rho, r: float) -> EntropyScalar:
    """Renyi entropy R_r(rho) = log2(Tr rho^r) / (1 - r).

    The r -> 1 limit is the von Neumann entropy, r = 0 gives log2(rank),
    and r -> inf gives -log2 of the largest eigenvalue (operator norm);
    r = inf is accepted directly.
    """
    if r < 0:
        raise InvalidOrder(f"Renyi order {r} is negative")
    w = np.clip(np.linalg.eigvalsh(_as_matrix(rho)), 0.0, None)
    if math.isinf(r):
        return EntropyScalar(-math.log2(float(w.max())), "renyi")
    if abs(r - 1.0) <= 1e-12:
        return EntropyScalar(-float(_plog2(w).sum()), "renyi")
    if r == 0.0:
        rank = int(np.count_nonzero(w > _SUPPORT_TOL))
        return EntropyScalar(math.log2(rank), "renyi")
    pos = w[w > 0.0]
    total = float((pos**r).sum())
    return EntropyScalar(math.log2(total) / (1.0 - r), "renyi")


def environment_state(rho, channel) -> np.ndarray:
    """Environment output rho_E with entries Tr(K_i rho K_j^dag).

    This is the complementary-channel output written directly in the
    environment basis attached to the channel's Kraus operators.
    """
    kraus = getattr(channel, "kraus", None)
    if kraus is None:
        raise InvalidChannel("channel has no Kraus representation")
    m = _as_matrix(rho)
    if m.shape[0] != channel.dim_in:
        raise DimensionMismatch(
            f"state dim {m.shape[0]} differs from channel input {channel.dim_in}"
        )
    total = sum(k.conj().T @ k for k in kraus)
    if np.max(np.abs(total - np.eye(channel.dim_in))) > COMPLETENESS_TOL:
        raise InvalidChannel("Kraus completeness fails")
    n = len(kraus)
    env = np.empty((n, n), dtype=complex)
    for i in range(n):
        ki_rho = kraus[i] @ m
        for j in range(i, n):
            val = np.trace(ki_rho @ kraus[j].conj().T)
            env[i, j] = val
            env[j, i] = val.conjugate()
    return env


def coherent_information(rho, channel):
    """I_coh = S(rho_B) - S(rho_E) for input rho; returns (I_coh, S_E).

    rho_B is the channel output and rho_E the environment output of the
    complementary map; S_E is the entropy exchange.
    """
    env = environment_state(rho, channel)
    m = _as_matrix(rho)
    out = sum(k @ m @ k.conj().T for k in channel.kraus)
    s_b = float(von_neumann(out))
    s_e = float(von_neumann(env))
    return (
        EntropyScalar(s_b - s_e, "coherent"),
        EntropyScalar(s_e, "exchange"),
    )
