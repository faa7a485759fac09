"""Capacity solvers.

Numeric optimizers for the single-letter capacities (Holevo ensemble
optimization, coherent-information maximization, entanglement-assisted
mutual information, private information), an independent geometric
solver that finds the informational radius r* of a qubit channel as a
min-max relative-entropy ball problem, and closed forms for the channel
families that have them.

All solvers are deterministic for a fixed OptimizerConfig seed, use
multi-start local refinement (sequential, lowest start index wins ties),
and report single-letter quantities: every value is a one-use optimum,
which lower-bounds the regularized capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar, nnls

from .channels import (
    QuantumChannel,
    _fibonacci_directions,
    affine_representation,
    complementary,
    is_cptp,
    is_unital,
)
from .entropy import _plog2, binary_entropy
from .errors import InvalidChannel, InvalidParameter, Unsupported
from .qmath import DensityMatrix, Ensemble, from_bloch

_DIM_LIMIT = 8


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs shared by the numeric solvers."""

    max_inputs: int = 4
    restarts: int = 32
    tolerance: float = 1e-6
    seed: int = 0


DEFAULT_CONFIG = OptimizerConfig()


@dataclass(frozen=True)
class OptimizerStats:
    iterations: int
    restarts: int
    achieved_tolerance: float


@dataclass(frozen=True)
class CapacityReport:
    """Named single-letter results; unset fields are None."""

    channel_label: str
    chi: Optional[float] = None
    C_hsw: Optional[float] = None
    Q1: Optional[float] = None
    Q1_raw: Optional[float] = None
    C_E: Optional[float] = None
    P1: Optional[float] = None
    r_star: Optional[float] = None
    S_min: Optional[float] = None
    optimizer: Optional[OptimizerStats] = None
    optimal_ensemble: Optional[Ensemble] = None
    notes: tuple = field(default_factory=tuple)


def _require_solvable(channel: QuantumChannel) -> None:
    if channel.kraus is None:
        raise InvalidChannel("channel has no Kraus representation; capacity undefined")
    if channel.dim_in > _DIM_LIMIT or channel.dim_out > _DIM_LIMIT:
        raise Unsupported(
            f"solver limit is dimension {_DIM_LIMIT}, got {channel.dim_in}->{channel.dim_out}"
        )
    if not is_cptp(channel):
        raise InvalidChannel("capacity solvers need a CPTP channel")


def _softmax(w: np.ndarray) -> np.ndarray:
    e = np.exp(w - w.max())
    return e / e.sum()


def _one_minus_entropy(radii: np.ndarray) -> np.ndarray:
    """1 - S(rho) for qubit states of the given Bloch radii (vectorized)."""
    r = np.minimum(np.asarray(radii, dtype=float), 1.0)
    return 0.5 * (_plog2(1.0 + r) + _plog2(1.0 - r))


def _entropy_of_radius(radii):
    return 1.0 - _one_minus_entropy(radii)


class _MultiStart:
    """Sequential multi-start minimizer with a plateau early exit.

    Runs local refinements from the given starts in order, keeps the best
    result (earliest start wins ties), and stops early once at least 8
    starts ran and 6 in a row failed to improve. Never exceeds
    cfg.restarts starts.
    """

    def __init__(self, cfg: OptimizerConfig):
        self.cfg = cfg
        self.best_val = math.inf
        self.best_x = None
        self.runner_up = math.inf
        self.iterations = 0
        self.started = 0
        self._since_improve = 0

    def run(self, objective: Callable, starts, method="L-BFGS-B", options=None):
        options = options or {}
        for x0 in starts:
            if self.started >= self.cfg.restarts:
                break
            res = minimize(objective, np.asarray(x0, dtype=float), method=method, options=options)
            self.started += 1
            self.iterations += int(res.nit)
            val = float(res.fun)
            if val < self.best_val - 1e-15:
                self.runner_up = self.best_val
                self.best_val = val
                self.best_x = np.asarray(res.x, dtype=float)
                self._since_improve = 0
            else:
                self.runner_up = min(self.runner_up, val)
                self._since_improve += 1
            if self.started >= 8 and self._since_improve >= 6:
                break
        return self

    def stats(self) -> OptimizerStats:
        if math.isfinite(self.runner_up) and math.isfinite(self.best_val):
            spread = abs(self.runner_up - self.best_val)
        else:
            spread = self.cfg.tolerance
        return OptimizerStats(self.iterations, self.started, spread)


def _axis_ensemble_starts(m: int, rng: np.random.Generator, total: int):
    """Start points for m-member qubit ensembles: axis pairs, then random."""
    axes = [
        np.array([0.0, 0.0, 1.0]),
        np.array([0.0, 0.0, -1.0]),
        np.array([1.0, 0.0, 0.0]),
        np.array([-1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
        np.array([0.0, -1.0, 0.0]),
    ]
    structured = [
        [axes[0], axes[1], axes[2], axes[3]],
        [axes[0], axes[1], axes[4], axes[5]],
        [axes[2], axes[3], axes[4], axes[5]],
        [axes[0], axes[1], axes[0], axes[1]],
    ]
    starts = []
    for vecs in structured:
        vecs = (vecs * m)[:m]
        starts.append(np.concatenate([np.concatenate(vecs), np.zeros(m)]))
    while len(starts) < total:
        x = rng.standard_normal(3 * m)
        w = 0.1 * rng.standard_normal(m)
        starts.append(np.concatenate([x, w]))
    return starts


def _unpack_bloch_ensemble(t: np.ndarray, m: int):
    xs = t[: 3 * m].reshape(m, 3)
    norms = np.maximum(np.linalg.norm(xs, axis=1), 1e-12)
    us = xs / norms[:, None]
    w = _softmax(t[3 * m :])
    return us, w


def _hsw_qubit(channel: QuantumChannel, cfg: OptimizerConfig):
    aff = affine_representation(channel)
    a_t = aff.A.T
    b = aff.b
    m = max(2, int(cfg.max_inputs))

    def neg_chi(t):
        us, w = _unpack_bloch_ensemble(t, m)
        outs = us @ a_t + b
        rads = np.linalg.norm(outs, axis=1)
        avg = w @ outs
        mix = _entropy_of_radius(np.linalg.norm(avg))
        members = float(w @ _entropy_of_radius(rads))
        return -(float(mix) - members)

    rng = np.random.default_rng(cfg.seed)
    opts = {"maxiter": 300, "ftol": 1e-13, "gtol": 1e-9}
    ms = _MultiStart(cfg).run(neg_chi, _axis_ensemble_starts(m, rng, cfg.restarts), options=opts)

    # prune negligible members, then polish once more
    us, w = _unpack_bloch_ensemble(ms.best_x, m)
    keep = w > 1e-4
    if keep.sum() >= 1 and keep.sum() < m:
        us = np.concatenate([us[keep], us[[0] * (m - int(keep.sum()))]])
        w = np.concatenate([w[keep], np.zeros(m - int(keep.sum()))])
        w = w / w.sum()
        logits = np.log(np.maximum(w, 1e-12))
        t0 = np.concatenate([us.reshape(-1), logits])
        res = minimize(neg_chi, t0, method="L-BFGS-B", options=opts)
        if float(res.fun) <= ms.best_val:
            ms.best_x = np.asarray(res.x, dtype=float)
            ms.best_val = float(res.fun)
            ms.iterations += int(res.nit)

    us, w = _unpack_bloch_ensemble(ms.best_x, m)
    chi = max(-ms.best_val, 0.0)
    keep = w > 1e-4
    w_kept = w[keep] / w[keep].sum()
    states = [from_bloch(u) for u in us[keep]]
    ensemble = Ensemble(w_kept, states)
    return chi, ensemble, ms.stats()


def _basis_ensemble_starts(d: int, m: int, rng: np.random.Generator, total: int):
    starts = []
    base = np.zeros(m * 2 * d)
    for k in range(m):
        base[k * 2 * d + (k % d)] = 1.0
    starts.append(np.concatenate([base, np.zeros(m)]))
    uniform = np.tile(np.concatenate([np.ones(d), np.zeros(d)]) / math.sqrt(d), m)
    starts.append(np.concatenate([uniform, np.zeros(m)]))
    while len(starts) < total:
        starts.append(
            np.concatenate([rng.standard_normal(m * 2 * d), 0.1 * rng.standard_normal(m)])
        )
    return starts


def _unpack_vector_ensemble(t: np.ndarray, m: int, d: int):
    amps = []
    for k in range(m):
        seg = t[k * 2 * d : (k + 1) * 2 * d]
        amp = seg[:d] + 1j * seg[d:]
        nrm = np.linalg.norm(amp)
        if nrm < 1e-12:
            amp = np.zeros(d, dtype=complex)
            amp[0] = 1.0
        else:
            amp = amp / nrm
        amps.append(amp)
    w = _softmax(t[m * 2 * d :])
    return amps, w


def _batched_entropies(mats: np.ndarray) -> np.ndarray:
    w = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
    return -_plog2(w).sum(axis=-1)


def _hsw_general(channel: QuantumChannel, cfg: OptimizerConfig):
    d = channel.dim_in
    d_out = channel.dim_out
    kraus = channel.kraus
    m = max(2, int(cfg.max_inputs))

    def neg_chi(t):
        amps, w = _unpack_vector_ensemble(t, m, d)
        outs = np.empty((m + 1, d_out, d_out), dtype=complex)
        for k, amp in enumerate(amps):
            vs = [op @ amp for op in kraus]
            outs[k] = sum(np.outer(v, v.conj()) for v in vs)
        outs[m] = np.tensordot(w, outs[:m], axes=1)
        ent = _batched_entropies(outs)
        return -(float(ent[m]) - float(w @ ent[:m]))

    rng = np.random.default_rng(cfg.seed)
    opts = {"maxiter": 200, "ftol": 1e-13, "gtol": 1e-8}
    ms = _MultiStart(cfg).run(
        neg_chi, _basis_ensemble_starts(d, m, rng, cfg.restarts), options=opts
    )
    amps, w = _unpack_vector_ensemble(ms.best_x, m, d)
    chi = max(-ms.best_val, 0.0)
    keep = w > 1e-4
    w_kept = w[keep] / w[keep].sum()
    states = [
        _pure_density(amp) for amp, k in zip(amps, keep) if k
    ]
    ensemble = Ensemble(w_kept, states)
    return chi, ensemble, ms.stats()


def _pure_density(amp: np.ndarray) -> DensityMatrix:
    return DensityMatrix(np.outer(amp, amp.conj()), repair=True)


def hsw_numeric(channel: QuantumChannel, cfg: Optional[OptimizerConfig] = None) -> CapacityReport:
    """Single-letter Holevo capacity by ensemble optimization.

    Maximizes chi over ensembles of cfg.max_inputs pure input states with
    free priors. Qubit-to-qubit channels run on a fast Bloch-coordinate
    path; everything else uses explicit state vectors.
    """
    cfg = cfg or DEFAULT_CONFIG
    _require_solvable(channel)
    if channel.dim_in == 2 and channel.dim_out == 2:
        chi, ensemble, stats = _hsw_qubit(channel, cfg)
    else:
        chi, ensemble, stats = _hsw_general(channel, cfg)
    return CapacityReport(
        channel_label=channel.label,
        chi=chi,
        C_hsw=chi,
        optimizer=stats,
        optimal_ensemble=ensemble,
        notes=("single-letter value; lower bound on the regularized capacity",),
    )


def _divergences(points: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """D(point || sigma) for qubit Bloch points against one interior sigma."""
    r_s = float(np.linalg.norm(sigma))
    r_s = min(r_s, 1.0 - 1e-12)
    rads = np.linalg.norm(points, axis=1)
    vals = _one_minus_entropy(rads)
    if r_s > 0.0:
        half_log_ratio = 0.5 * math.log2((1.0 + r_s) / (1.0 - r_s))
        vals = vals - 0.5 * math.log2(1.0 - r_s * r_s)
        vals = vals - (points @ (sigma / r_s)) * half_log_ratio
    return vals


def hsw_geometric(channel: QuantumChannel, cfg: Optional[OptimizerConfig] = None) -> CapacityReport:
    """Informational radius r* of a qubit channel.

    Finds min over states sigma of the max relative entropy from the
    channel's output ellipsoid to sigma; that radius equals the HSW
    capacity. Works entirely in Bloch coordinates and never calls the
    ensemble optimizer, so it is an independent cross-check of
    hsw_numeric. The optimal sigma is certified as a convex mixture of
    the divergence maximizers with equal divergences.
    """
    cfg = cfg or DEFAULT_CONFIG
    if channel.dim_in != 2 or channel.dim_out != 2:
        raise Unsupported("geometric solver handles qubit channels")
    _require_solvable(channel)
    aff = affine_representation(channel)
    dirs = _fibonacci_directions(2048)
    points = dirs @ aff.A.T + aff.b
    notes = ["single-letter value; lower bound on the regularized capacity"]

    if np.ptp(points, axis=0).max() < 1e-12:
        return CapacityReport(
            channel_label=channel.label,
            r_star=0.0,
            optimizer=OptimizerStats(0, 0, 0.0),
            notes=tuple(notes + ["constant-output channel"]),
        )

    support = points
    iterations = 0

    def outer(sig):
        if np.linalg.norm(sig) >= 1.0 - 1e-9:
            return math.inf
        return float(_divergences(support, sig).max())

    sigma = points.mean(axis=0)
    for _ in range(4):
        res = minimize(
            outer,
            sigma,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 1200},
        )
        iterations += int(res.nit)
        sigma = np.asarray(res.x, dtype=float)
        # polish the inner maximum over the output ellipsoid surface
        vals = _divergences(points, sigma)
        order = np.argsort(vals)[::-1]
        new_points = []
        best_polished = float(vals[order[0]])

        def neg_div(angles):
            u = _unit_from_angles(angles)
            s = (aff.A @ u + aff.b)[None, :]
            return -float(_divergences(s, sigma)[0])

        for idx in order[:8]:
            u0 = dirs[idx]
            theta = math.acos(max(-1.0, min(1.0, u0[2])))
            phi = math.atan2(u0[1], u0[0])
            pol = minimize(
                neg_div,
                np.array([theta, phi]),
                method="Nelder-Mead",
                options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 500},
            )
            iterations += int(pol.nit)
            val = -float(pol.fun)
            if val > best_polished + 1e-12:
                new_points.append(aff.A @ _unit_from_angles(pol.x) + aff.b)
                best_polished = max(best_polished, val)
        if not new_points:
            break
        support = np.vstack([support, np.array(new_points)])

    vals = _divergences(support, sigma)
    r_star = float(vals.max())

    # certificate: sigma must be a convex mixture of the maximizers,
    # all of which sit at the same divergence
    maximizers = support[vals >= r_star - 1e-6]
    a_aug = np.vstack([maximizers.T, np.ones(len(maximizers))])
    b_aug = np.concatenate([sigma, [1.0]])
    weights, _ = nnls(a_aug, b_aug)
    cert_residual = float(np.linalg.norm(a_aug @ weights - b_aug))
    if cert_residual > 1e-3:
        notes.append(f"certificate residual {cert_residual:.2e} above 1e-3")
    if is_unital(channel) and float(np.linalg.norm(sigma)) > 1e-4:
        notes.append("unital channel but optimal sigma is off-center")

    return CapacityReport(
        channel_label=channel.label,
        r_star=r_star,
        optimizer=OptimizerStats(iterations, 1, cert_residual),
        notes=tuple(notes),
    )


def _unit_from_angles(angles) -> np.ndarray:
    theta, phi = float(angles[0]), float(angles[1])
    s = math.sin(theta)
    return np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])


def _env_matrix(kraus, m: np.ndarray) -> np.ndarray:
    n = len(kraus)
    env = np.empty((n, n), dtype=complex)
    half = [k @ m for k in kraus]
    for i in range(n):
        for j in range(i, n):
            val = np.trace(half[i] @ kraus[j].conj().T)
            env[i, j] = val
            env[j, i] = val.conjugate()
    return env


def _entropy_of(mat: np.ndarray) -> float:
    w = np.clip(np.linalg.eigvalsh(mat), 0.0, None)
    return -float(_plog2(w).sum())


def _ball_starts(rng: np.random.Generator, total: int):
    starts = [np.zeros(3)]
    for radius in (0.5, 0.9):
        for axis in range(3):
            for sign in (1.0, -1.0):
                e = np.zeros(3)
                e[axis] = sign * radius
                starts.append(e)
    while len(starts) < total:
        v = rng.standard_normal(3)
        starts.append(v / np.linalg.norm(v) * rng.uniform(0.0, 0.95))
    return starts[:total]


def _state_param_starts(d: int, rng: np.random.Generator, total: int):
    starts = []
    eye = np.eye(d).reshape(-1)
    starts.append(np.concatenate([eye, np.zeros(d * d)]))
    while len(starts) < total:
        starts.append(rng.standard_normal(2 * d * d))
    return starts


def _density_from_param(x: np.ndarray, d: int) -> np.ndarray:
    m = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    rho = m @ m.conj().T
    tr = float(np.trace(rho).real)
    if tr < 1e-12:
        return np.eye(d) / d
    return rho / tr


def _maximize_state_functional(
    channel: QuantumChannel, cfg: OptimizerConfig, value_of: Callable[[np.ndarray], float]
):
    """Maximize a functional of the input state (qubit ball or general)."""
    d = channel.dim_in
    rng = np.random.default_rng(cfg.seed)
    if d == 2:

        def neg(x):
            r = np.asarray(x, dtype=float)
            nrm = np.linalg.norm(r)
            if nrm > 1.0:
                r = r / nrm
            rho = np.array(
                [
                    [1.0 + r[2], r[0] - 1j * r[1]],
                    [r[0] + 1j * r[1], 1.0 - r[2]],
                ],
                dtype=complex,
            ) / 2.0
            val = value_of(rho)
            return -val + max(nrm - 1.0, 0.0)  # gentle pullback into the ball

        starts = _ball_starts(rng, cfg.restarts)
        options = {"xatol": 1e-10, "fatol": 1e-12, "maxiter": 1500}
    else:

        def neg(x):
            return -value_of(_density_from_param(np.asarray(x, dtype=float), d))

        starts = _state_param_starts(d, rng, cfg.restarts)
        options = {"xatol": 1e-9, "fatol": 1e-11, "maxiter": 4000}
    ms = _MultiStart(cfg).run(neg, starts, method="Nelder-Mead", options=options)
    return -ms.best_val, ms.stats()


def quantum_capacity_single_use(
    channel: QuantumChannel, cfg: Optional[OptimizerConfig] = None
) -> CapacityReport:
    """Single-use quantum capacity: max over inputs of the coherent information.

    Reports the clamped value Q1 = max(0, max I_coh) and keeps the raw
    optimum in Q1_raw.
    """
    cfg = cfg or DEFAULT_CONFIG
    _require_solvable(channel)
    kraus = channel.kraus

    def value_of(rho):
        out = sum(k @ rho @ k.conj().T for k in kraus)
        return _entropy_of(out) - _entropy_of(_env_matrix(kraus, rho))

    raw, stats = _maximize_state_functional(channel, cfg, value_of)
    return CapacityReport(
        channel_label=channel.label,
        Q1=max(raw, 0.0),
        Q1_raw=raw,
        optimizer=stats,
        notes=("single-letter value; lower bound on the regularized capacity",),
    )


def entanglement_assisted(
    channel: QuantumChannel, cfg: Optional[OptimizerConfig] = None
) -> CapacityReport:
    """Entanglement-assisted classical capacity.

    Maximizes the output mutual information S(rho) + S(N(rho)) - S_E over
    input states; for this quantity the single-use optimum already equals
    the capacity.
    """
    cfg = cfg or DEFAULT_CONFIG
    _require_solvable(channel)
    if channel.dim_in > 4:
        raise Unsupported("entanglement-assisted solver handles input dimension <= 4")
    kraus = channel.kraus

    def value_of(rho):
        out = sum(k @ rho @ k.conj().T for k in kraus)
        return (
            _entropy_of(rho)
            + _entropy_of(out)
            - _entropy_of(_env_matrix(kraus, rho))
        )

    best, stats = _maximize_state_functional(channel, cfg, value_of)
    return CapacityReport(
        channel_label=channel.label,
        C_E=max(best, 0.0),
        optimizer=stats,
        notes=("entanglement-assisted value; single-use equals asymptotic",),
    )


def private_information(
    channel: QuantumChannel, cfg: Optional[OptimizerConfig] = None
) -> CapacityReport:
    """Single-letter private information: max over ensembles of chi_AB - chi_AE."""
    cfg = cfg or DEFAULT_CONFIG
    _require_solvable(channel)
    if channel.dim_in > 4:
        raise Unsupported("private-information solver handles input dimension <= 4")
    kraus = channel.kraus
    comp = complementary(channel)
    kraus_e = comp.kraus
    d = channel.dim_in
    m = max(2, int(cfg.max_inputs))

    def neg_p(t):
        amps, w = _unpack_vector_ensemble(t, m, d)
        rhos = [np.outer(a, a.conj()) for a in amps]
        outs_b = [sum(k @ r @ k.conj().T for k in kraus) for r in rhos]
        outs_e = [sum(k @ r @ k.conj().T for k in kraus_e) for r in rhos]
        avg_b = sum(p * o for p, o in zip(w, outs_b))
        avg_e = sum(p * o for p, o in zip(w, outs_e))
        chi_b = _entropy_of(avg_b) - float(
            sum(p * _entropy_of(o) for p, o in zip(w, outs_b))
        )
        chi_e = _entropy_of(avg_e) - float(
            sum(p * _entropy_of(o) for p, o in zip(w, outs_e))
        )
        return -(chi_b - chi_e)

    rng = np.random.default_rng(cfg.seed)
    opts = {"maxiter": 200, "ftol": 1e-13, "gtol": 1e-8}
    ms = _MultiStart(cfg).run(
        neg_p, _basis_ensemble_starts(d, m, rng, cfg.restarts), options=opts
    )
    best = -ms.best_val
    return CapacityReport(
        channel_label=channel.label,
        P1=max(best, 0.0),
        optimizer=ms.stats(),
        notes=("single-letter value; lower bound on the regularized capacity",),
    )


def analytic_capacity(kind: str, **params) -> CapacityReport:
    """Closed-form capacities for the families that have them.

    Kinds: erasure(p, d=2), phase_erasure(q, d=2), mixed_erasure(p, q,
    d=2), amplitude_damping(gamma), depolarizing(p), bsc(p). Quantum
    values are reported with the raw (unclamped) optimum in Q1_raw.
    """

    def prob(name):
        v = float(params.pop(name))
        if not 0.0 <= v <= 1.0:
            raise InvalidParameter(f"{name} = {v} outside [0, 1]")
        return v

    if kind == "erasure":
        p = prob("p")
        d = int(params.pop("d", 2))
        _reject_extra(params)
        logd = math.log2(d)
        raw = (1.0 - 2.0 * p) * logd
        return CapacityReport(
            channel_label=f"analytic:erasure(p={p:g},d={d})",
            chi=(1.0 - p) * logd,
            C_hsw=(1.0 - p) * logd,
            Q1=max(raw, 0.0),
            Q1_raw=raw,
            notes=("closed form",),
        )
    if kind == "phase_erasure":
        q = prob("q")
        d = int(params.pop("d", 2))
        _reject_extra(params)
        logd = math.log2(d)
        return CapacityReport(
            channel_label=f"analytic:phase_erasure(q={q:g},d={d})",
            chi=logd,
            C_hsw=logd,
            Q1=(1.0 - q) * logd,
            Q1_raw=(1.0 - q) * logd,
            notes=("closed form",),
        )
    if kind == "mixed_erasure":
        p = prob("p")
        q = prob("q")
        d = int(params.pop("d", 2))
        _reject_extra(params)
        if p + q > 1.0 + 1e-12:
            raise InvalidParameter(f"p + q = {p + q:g} exceeds 1")
        logd = math.log2(d)
        raw = (1.0 - q - 2.0 * p) * logd
        return CapacityReport(
            channel_label=f"analytic:mixed_erasure(p={p:g},q={q:g},d={d})",
            chi=(1.0 - p) * logd,
            C_hsw=(1.0 - p) * logd,
            Q1=max(raw, 0.0),
            Q1_raw=raw,
            notes=("closed form",),
        )
    if kind == "amplitude_damping":
        gamma = prob("gamma") if "gamma" in params else 1.0 - prob("p")
        _reject_extra(params)

        def neg_q(tau):
            return -(
                float(binary_entropy((1.0 - gamma) * tau))
                - float(binary_entropy(gamma * tau))
            )

        res = minimize_scalar(
            neg_q, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-9}
        )
        raw = -float(res.fun)
        if gamma >= 0.5:
            raw = min(raw, 0.0)
        return CapacityReport(
            channel_label=f"analytic:amplitude_damping(gamma={gamma:g})",
            Q1=max(raw, 0.0),
            Q1_raw=raw,
            notes=("closed form; maximized over the population parameter",),
        )
    if kind == "depolarizing":
        p = prob("p")
        _reject_extra(params)
        c = 1.0 - float(binary_entropy(p / 2.0))
        return CapacityReport(
            channel_label=f"analytic:depolarizing(p={p:g})",
            chi=c,
            C_hsw=c,
            notes=("closed form",),
        )
    if kind == "bsc":
        p = prob("p")
        _reject_extra(params)
        return CapacityReport(
            channel_label=f"analytic:bsc(p={p:g})",
            chi=1.0 - float(binary_entropy(p)),
            C_hsw=1.0 - float(binary_entropy(p)),
            notes=("classical binary symmetric channel",),
        )
    raise Unsupported(f"no closed form for kind {kind!r}")


def _reject_extra(params: dict) -> None:
    if params:
        raise InvalidParameter(f"unexpected parameters {sorted(params)}")


_MEASURES = ("hsw", "hsw-geo", "qcap", "ea", "private", "minent")


def full_report(
    channel: QuantumChannel,
    cfg: Optional[OptimizerConfig] = None,
    measures=("hsw",),
) -> CapacityReport:
    """Run the requested solvers and merge their fields into one report."""
    from .channels import min_output_entropy

    cfg = cfg or DEFAULT_CONFIG
    if measures == "all" or "all" in measures:
        measures = _MEASURES
    merged: dict = {"channel_label": channel.label}
    notes: list = []
    stats = None
    for measure in measures:
        if measure == "hsw":
            rep = hsw_numeric(channel, cfg)
        elif measure == "hsw-geo":
            rep = hsw_geometric(channel, cfg)
        elif measure == "qcap":
            rep = quantum_capacity_single_use(channel, cfg)
        elif measure == "ea":
            rep = entanglement_assisted(channel, cfg)
        elif measure == "private":
            rep = private_information(channel, cfg)
        elif measure == "minent":
            merged["S_min"] = float(min_output_entropy(channel))
            continue
        else:
            raise InvalidParameter(f"unknown measure {measure!r}")
        for name in ("chi", "C_hsw", "Q1", "Q1_raw", "C_E", "P1", "r_star"):
            val = getattr(rep, name)
            if val is not None:
                merged[name] = val
        notes.extend(n for n in rep.notes if n not in notes)
        if rep.optimizer is not None:
            stats = rep.optimizer if stats is None else OptimizerStats(
                stats.iterations + rep.optimizer.iterations,
                stats.restarts + rep.optimizer.restarts,
                max(stats.achieved_tolerance, rep.optimizer.achieved_tolerance),
            )
    report = CapacityReport(optimizer=stats, notes=tuple(notes), **merged)
    _check_orderings(report)
    return report


def _check_orderings(report: CapacityReport) -> None:
    if report.Q1 is not None and report.C_hsw is not None:
        if report.Q1 > report.C_hsw + 1e-6:
            raise InvalidChannel(
                f"ordering violated: Q1 = {report.Q1} exceeds C_hsw = {report.C_hsw}"
            )
