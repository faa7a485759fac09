"""Quantum channel representations, a constructor zoo, and classifiers.

Channels are immutable Kraus-operator lists (plus one affine-only map
used as a non-completely-positive witness). The module provides Choi and
affine/Bloch representations, composition and tensoring, complementary
channels, minimum output entropy, and structural classifiers: CPTP,
unital, Pauli-distortion tetrahedron membership, degradability and
entanglement breaking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .entropy import EntropyScalar, binary_entropy, von_neumann
from .errors import (
    DimensionMismatch,
    InvalidChannel,
    InvalidParameter,
    Unsupported,
)
from .qmath import (
    COMPLETENESS_TOL,
    DensityMatrix,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    _as_matrix,
    from_bloch,
    to_bloch,
)

_PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)

CP_TOL = 1e-9


@dataclass(frozen=True)
class AffineMap:
    """Bloch-ball action r -> A r + b of a qubit channel."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.A, dtype=float).reshape(3, 3)
        b = np.asarray(self.b, dtype=float).reshape(3)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", b)

    def __call__(self, r) -> np.ndarray:
        return self.A @ np.asarray(tuple(r), dtype=float) + self.b

    @property
    def distortion(self) -> np.ndarray:
        """Diagonal of A; the distortion vector for Pauli-diagonal maps."""
        return np.diag(self.A)


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi state (I (x) N) applied to the normalized maximally entangled state.

    Indices are grouped as (reference, output); the matrix has unit trace
    for a trace-preserving channel and is PSD iff the channel is CP.
    """

    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True)
class CptpReport:
    """Diagnostics from is_cptp; truthy iff the channel is CPTP."""

    trace_preserving: bool
    completely_positive: bool
    completeness_residual: float
    choi_min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.trace_preserving and self.completely_positive


@dataclass(frozen=True)
class DegradabilityReport:
    """Outcome of the degradability test.

    status is "degradable", "not_degradable" or "undetermined" (the
    last when the channel superoperator is too ill-conditioned to invert
    reliably). degrading_map carries the recovered map when degradable.
    """

    status: str
    degrading_map: Optional["QuantumChannel"]
    condition_number: float
    residual: float


class QuantumChannel:
    """A channel N given by Kraus operators {N_i}, or affine-only.

    Parameters
    ----------
    kraus : sequence of arrays, or None
        dim_out x dim_in complex Kraus operators. None is reserved for
        affine-only maps (the non-CP pancake witness), which must supply
        `affine` instead.
    dim_in, dim_out : int
        Input and output dimensions.
    label : str
        Human-readable name used in reports.
    kind : str
        Constructor kind ("custom" for explicit Kraus lists).
    params : dict
        Constructor parameters, kept for reporting.
    trace_preserving : bool
        When True (default) the Kraus completeness sum is validated
        within 1e-9 and InvalidChannel is raised on failure.
    """

    __slots__ = ("_kraus", "_affine", "dim_in", "dim_out", "label", "kind", "params")

    def __init__(
        self,
        kraus,
        dim_in: int,
        dim_out: int,
        label: str = "",
        kind: str = "custom",
        params: Optional[dict] = None,
        affine: Optional[AffineMap] = None,
        trace_preserving: bool = True,
    ):
        self.dim_in = int(dim_in)
        self.dim_out = int(dim_out)
        self.label = label or kind
        self.kind = kind
        self.params = dict(params or {})
        self._affine = affine
        if kraus is None:
            if affine is None:
                raise InvalidChannel("channel needs Kraus operators or an affine map")
            self._kraus = None
            return
        ops = tuple(np.array(k, dtype=complex) for k in kraus)
        if not ops:
            raise InvalidChannel("empty Kraus list")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus shape {k.shape} differs from ({self.dim_out}, {self.dim_in})"
                )
            k.setflags(write=False)
        if trace_preserving:
            total = sum(k.conj().T @ k for k in ops)
            if np.max(np.abs(total - np.eye(self.dim_in))) > COMPLETENESS_TOL:
                raise InvalidChannel("Kraus operators do not sum to the identity")
        self._kraus = ops

    @property
    def kraus(self):
        """Tuple of Kraus operators, or None for affine-only maps."""
        return self._kraus

    @property
    def stored_affine(self) -> Optional[AffineMap]:
        return self._affine

    def __call__(self, rho) -> DensityMatrix:
        return apply(self, rho)

    def __repr__(self):
        nk = "affine" if self._kraus is None else len(self._kraus)
        return f"QuantumChannel({self.label!r}, {self.dim_in}->{self.dim_out}, kraus={nk})"


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameter(f"{name} = {value} outside [0, 1]")
    return value


def _embed(d: int) -> np.ndarray:
    """Isometry C^d -> C^(d+1) onto the first d levels."""
    v = np.zeros((d + 1, d), dtype=complex)
    v[:d, :] = np.eye(d)
    return v


def make_channel(kind: str, **params) -> QuantumChannel:
    """Construct a named channel.

    Supported kinds and parameters:

    - identity(d=2)
    - bit_flip(p), phase_flip(p), bit_phase_flip(p), dephasing(p)
    - depolarizing(p): N(rho) = p I/2 + (1-p) rho
    - amplitude_damping(p) or amplitude_damping(gamma): p is the
      probability the |0> component survives, gamma = 1 - p the damping
      rate; decay direction is toward |1>
    - erasure(p, d=2): output dimension d+1 with erasure flag |e>
    - phase_erasure(q): qubit only, output dimension 4 with a flag qubit
    - mixed_erasure(p, q): erase with probability p, phase-erase with
      probability q, p + q <= 1
    - measure_prepare: computational-basis measure-and-resend
    - pancake: affine-only (x, y, z) -> (x, y, 0), not completely positive
    """
    if kind == "identity":
        d = int(params.pop("d", 2))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        if d < 1:
            raise InvalidParameter(f"d = {d} must be positive")
        return QuantumChannel(
            [np.eye(d)], d, d, label=f"identity(d={d})", kind="identity", params={"d": d}
        )

    if kind in ("bit_flip", "phase_flip", "bit_phase_flip", "dephasing"):
        p = _check_prob("p", params.pop("p"))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        pauli = {
            "bit_flip": PAULI_X,
            "phase_flip": PAULI_Z,
            "dephasing": PAULI_Z,
            "bit_phase_flip": PAULI_Y,
        }[kind]
        ops = [np.sqrt(1.0 - p) * PAULI_I, np.sqrt(p) * pauli]
        return QuantumChannel(
            ops, 2, 2, label=f"{kind}(p={p:g})", kind=kind, params={"p": p}
        )

    if kind == "depolarizing":
        p = _check_prob("p", params.pop("p"))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        ops = [
            np.sqrt(1.0 - 0.75 * p) * PAULI_I,
            np.sqrt(0.25 * p) * PAULI_X,
            np.sqrt(0.25 * p) * PAULI_Y,
            np.sqrt(0.25 * p) * PAULI_Z,
        ]
        return QuantumChannel(
            ops, 2, 2, label=f"depolarizing(p={p:g})", kind=kind, params={"p": p}
        )

    if kind == "amplitude_damping":
        if "gamma" in params and "p" in params:
            raise InvalidParameter("give either p or gamma, not both")
        if "gamma" in params:
            p = 1.0 - _check_prob("gamma", params.pop("gamma"))
        else:
            p = _check_prob("p", params.pop("p"))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        a1 = np.array([[np.sqrt(p), 0.0], [0.0, 1.0]], dtype=complex)
        a2 = np.array([[0.0, 0.0], [np.sqrt(1.0 - p), 0.0]], dtype=complex)
        return QuantumChannel(
            [a1, a2], 2, 2, label=f"amplitude_damping(p={p:g})", kind=kind, params={"p": p}
        )

    if kind == "erasure":
        p = _check_prob("p", params.pop("p"))
        d = int(params.pop("d", 2))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        if d < 2:
            raise InvalidParameter(f"d = {d} must be at least 2")
        v = _embed(d)
        ops = [np.sqrt(1.0 - p) * v]
        for k in range(d):
            op = np.zeros((d + 1, d), dtype=complex)
            op[d, k] = np.sqrt(p)
            ops.append(op)
        return QuantumChannel(
            ops, d, d + 1, label=f"erasure(p={p:g},d={d})", kind=kind, params={"p": p, "d": d}
        )

    if kind == "phase_erasure":
        q = _check_prob("q", params.pop("q"))
        d = int(params.pop("d", 2))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        if d != 2:
            raise Unsupported("phase_erasure is defined for qubits only")
        flag0 = np.array([[1.0], [0.0]], dtype=complex)
        flag1 = np.array([[0.0], [1.0]], dtype=complex)
        ops = [
            np.sqrt(1.0 - q) * np.kron(PAULI_I, flag0),
            np.sqrt(q / 2.0) * np.kron(PAULI_I, flag1),
            np.sqrt(q / 2.0) * np.kron(PAULI_Z, flag1),
        ]
        return QuantumChannel(
            ops, 2, 4, label=f"phase_erasure(q={q:g})", kind=kind, params={"q": q, "d": 2}
        )

    if kind == "mixed_erasure":
        p = _check_prob("p", params.pop("p"))
        q = _check_prob("q", params.pop("q"))
        d = int(params.pop("d", 2))
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        if d != 2:
            raise Unsupported("mixed_erasure is defined for qubits only")
        if p + q > 1.0 + 1e-12:
            raise InvalidParameter(f"p + q = {p + q:g} exceeds 1")
        v = _embed(d)
        flag0 = np.array([[1.0], [0.0]], dtype=complex)
        flag1 = np.array([[0.0], [1.0]], dtype=complex)
        ops = [np.sqrt(max(1.0 - p - q, 0.0)) * np.kron(v, flag0)]
        ops.append(np.sqrt(q / 2.0) * np.kron(v, flag1))
        ops.append(np.sqrt(q / 2.0) * np.kron(v @ PAULI_Z, flag1))
        for k in range(d):
            op = np.zeros((d + 1, d), dtype=complex)
            op[d, k] = np.sqrt(p)
            ops.append(np.kron(op, flag0))
        return QuantumChannel(
            ops,
            d,
            2 * (d + 1),
            label=f"mixed_erasure(p={p:g},q={q:g})",
            kind=kind,
            params={"p": p, "q": q, "d": d},
        )

    if kind == "measure_prepare":
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        p0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        p1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
        return QuantumChannel(
            [p0, p1], 2, 2, label="measure_prepare", kind=kind, params={}
        )

    if kind == "pancake":
        if params:
            raise InvalidParameter(f"unexpected parameters {sorted(params)}")
        aff = AffineMap(np.diag([1.0, 1.0, 0.0]), np.zeros(3))
        return QuantumChannel(
            None, 2, 2, label="pancake", kind=kind, params={}, affine=aff
        )

    raise Unsupported(f"unknown channel kind {kind!r}")


def from_kraus(kraus, dim_in=None, dim_out=None, label="custom") -> QuantumChannel:
    """Wrap an explicit Kraus list as a channel (completeness validated)."""
    ops = [np.asarray(k, dtype=complex) for k in kraus]
    if not ops:
        raise InvalidChannel("empty Kraus list")
    d_out, d_in = ops[0].shape
    dim_in = d_in if dim_in is None else int(dim_in)
    dim_out = d_out if dim_out is None else int(dim_out)
    return QuantumChannel(ops, dim_in, dim_out, label=label, kind="custom")


def _apply_matrix(channel: QuantumChannel, m: np.ndarray) -> np.ndarray:
    if channel.kraus is None:
        r = to_bloch(m)
        out = channel.stored_affine(r.r)
        x, y, z = out
        return 0.5 * (PAULI_I + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)
    return sum(k @ m @ k.conj().T for k in channel.kraus)


def apply(channel: QuantumChannel, rho) -> DensityMatrix:
    """Send a state through the channel."""
    m = _as_matrix(rho)
    if m.shape[0] != channel.dim_in:
        raise DimensionMismatch(
            f"state dim {m.shape[0]} differs from channel input {channel.dim_in}"
        )
    return DensityMatrix(_apply_matrix(channel, m), repair=True)


def _superoperator(channel: QuantumChannel) -> np.ndarray:
    """Row-major-vec superoperator M with vec(N(rho)) = M vec(rho)."""
    if channel.kraus is None:
        raise InvalidChannel("affine-only channel has no Kraus superoperator")
    d_in, d_out = channel.dim_in, channel.dim_out
    m = np.zeros((d_out * d_out, d_in * d_in), dtype=complex)
    for k in channel.kraus:
        m += np.kron(k, k.conj())
    return m


def _choi_from_superop(m: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    t = m.reshape(d_out, d_out, d_in, d_in)
    return t.transpose(2, 0, 3, 1).reshape(d_in * d_out, d_in * d_out) / d_in


def choi(channel: QuantumChannel) -> ChoiMatrix:
    """Choi state of the channel (unit trace for trace-preserving maps)."""
    d_in, d_out = channel.dim_in, channel.dim_out
    if channel.kraus is not None:
        c = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
        for k in channel.kraus:
            v = k.T.reshape(-1) / np.sqrt(d_in)
            c += np.outer(v, v.conj())
        return ChoiMatrix(c, d_in, d_out)
    if d_in != 2 or d_out != 2:
        raise Unsupported("affine-only channels are qubit maps")
    aff = channel.stored_affine
    c = np.zeros((4, 4), dtype=complex)
    images = [
        PAULI_I + aff.b[0] * PAULI_X + aff.b[1] * PAULI_Y + aff.b[2] * PAULI_Z,
        sum(aff.A[j, 0] * _PAULIS[j + 1] for j in range(3)),
        sum(aff.A[j, 1] * _PAULIS[j + 1] for j in range(3)),
        sum(aff.A[j, 2] * _PAULIS[j + 1] for j in range(3)),
    ]
    for sigma, image in zip(_PAULIS, images):
        c += np.kron(sigma.T, image)
    return ChoiMatrix(c / 4.0, 2, 2)


def is_cptp(channel: QuantumChannel) -> CptpReport:
    """Trace preservation and complete positivity with diagnostics."""
    c = choi(channel)
    d_in = channel.dim_in
    if channel.kraus is not None:
        total = sum(k.conj().T @ k for k in channel.kraus)
        residual = float(np.max(np.abs(total - np.eye(d_in))))
    else:
        # partial trace of the Choi state over the output leg
        t = c.matrix.reshape(d_in, channel.dim_out, d_in, channel.dim_out)
        reduced = np.trace(t, axis1=1, axis2=3) * d_in
        residual = float(np.max(np.abs(reduced - np.eye(d_in))))
    min_eig = c.min_eigenvalue
    return CptpReport(
        trace_preserving=residual <= COMPLETENESS_TOL,
        completely_positive=min_eig >= -CP_TOL,
        completeness_residual=residual,
        choi_min_eigenvalue=min_eig,
    )


def is_unital(channel: QuantumChannel) -> bool:
    """True when the maximally mixed input maps to the maximally mixed output."""
    d_in, d_out = channel.dim_in, channel.dim_out
    out = _apply_matrix(channel, np.eye(d_in) / d_in)
    return bool(np.max(np.abs(out - np.eye(d_out) / d_out)) <= COMPLETENESS_TOL)


def complementary(channel: QuantumChannel) -> QuantumChannel:
    """The channel into the environment.

    For Kraus operators {N_i} the environment output has entries
    Tr(N_i rho N_j^dag); the returned map sends the input to that
    environment state, with one Kraus operator per output basis index.
    """
    if channel.kraus is None:
        raise InvalidChannel("affine-only channel has no complementary map")
    kraus = channel.kraus
    n_env = len(kraus)
    ops = []
    for b in range(channel.dim_out):
        op = np.empty((n_env, channel.dim_in), dtype=complex)
        for i, k in enumerate(kraus):
            op[i, :] = k[b, :]
        ops.append(op)
    return QuantumChannel(
        ops,
        channel.dim_in,
        n_env,
        label=f"comp({channel.label})",
        kind="complementary",
        params=dict(channel.params),
    )


def affine_representation(channel: QuantumChannel) -> AffineMap:
    """Bloch-ball affine action r -> A r + b of a qubit channel."""
    if channel.dim_in != 2 or channel.dim_out != 2:
        raise DimensionMismatch("affine representation needs a qubit channel")
    if channel.kraus is None:
        return channel.stored_affine
    b = to_bloch(_apply_matrix(channel, PAULI_I / 2.0)).r
    cols = []
    for sigma in (PAULI_X, PAULI_Y, PAULI_Z):
        image = to_bloch(
            DensityMatrix(_apply_matrix(channel, (PAULI_I + sigma) / 2.0), repair=True)
        ).r
        cols.append(image - b)
    aff = AffineMap(np.column_stack(cols), b)
    # sanity on a fourth state: the map must be affine to 1e-9
    probe = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    direct = to_bloch(
        DensityMatrix(_apply_matrix(channel, from_bloch(probe).matrix), repair=True)
    ).r
    if np.max(np.abs(aff(probe) - direct)) > 1e-9:
        raise InvalidChannel("channel action is not affine on the Bloch ball")
    return aff


def tetrahedron_check(eta) -> bool:
    """Whether a Pauli distortion vector (eta_x, eta_y, eta_z) is CP-compatible.

    Checks the four Choi vertex weights (1 +- eta_x +- eta_y +- eta_z)/4
    with an even number of minus signs; all must be non-negative.
    """
    x, y, z = (float(v) for v in tuple(eta))
    weights = (
        1.0 + x + y + z,
        1.0 + x - y - z,
        1.0 - x + y - z,
        1.0 - x - y + z,
    )
    return all(w >= -4.0 * CP_TOL for w in weights)


def compose(first: QuantumChannel, second: QuantumChannel) -> QuantumChannel:
    """The channel `second after first` with Kraus set {S_j F_i}."""
    if first.kraus is None or second.kraus is None:
        raise InvalidChannel("composition needs Kraus representations")
    if second.dim_in != first.dim_out:
        raise DimensionMismatch(
            f"cannot compose: {first.dim_out} -> into input {second.dim_in}"
        )
    ops = [s @ f for s in second.kraus for f in first.kraus]
    return QuantumChannel(
        ops,
        first.dim_in,
        second.dim_out,
        label=f"({second.label} o {first.label})",
        kind="composition",
    )


def tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """The parallel channel a (x) b."""
    if a.kraus is None or b.kraus is None:
        raise InvalidChannel("tensoring needs Kraus representations")
    ops = [np.kron(ka, kb) for ka in a.kraus for kb in b.kraus]
    return QuantumChannel(
        ops,
        a.dim_in * b.dim_in,
        a.dim_out * b.dim_out,
        label=f"({a.label} x {b.label})",
        kind="tensor",
    )


def _fibonacci_directions(n: int) -> np.ndarray:
    """n roughly uniform unit vectors on the sphere, deterministic."""
    i = np.arange(n, dtype=float) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
    return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))


def _angles_to_unit(theta: float, phi: float) -> np.ndarray:
    s = math.sin(theta)
    return np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])


def _max_output_radius(aff: AffineMap) -> float:
    """max_u |A u + b| over the unit sphere, grid plus local polish."""
    dirs = _fibonacci_directions(512)
    radii = np.linalg.norm(dirs @ aff.A.T + aff.b, axis=1)
    order = np.argsort(radii)[::-1]

    def neg_radius(x):
        return -float(np.linalg.norm(aff(_angles_to_unit(x[0], x[1]))))

    best = float(radii[order[0]])
    for idx in order[:8]:
        u = dirs[idx]
        theta = math.acos(max(-1.0, min(1.0, u[2])))
        phi = math.atan2(u[1], u[0])
        res = minimize(
            neg_radius,
            np.array([theta, phi]),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 400},
        )
        best = max(best, -float(res.fun))
    return min(best, 1.0)


def min_output_entropy(channel: QuantumChannel) -> EntropyScalar:
    """Minimum output entropy min_psi S(N(|psi><psi|)).

    The minimum over all inputs is attained on a pure state. Qubit-to-
    qubit channels reduce to maximizing the output Bloch radius; other
    dimensions run a deterministic multi-start search over pure inputs.
    """
    report = is_cptp(channel)
    if not report:
        raise InvalidChannel("minimum output entropy needs a CPTP channel")
    if channel.dim_in == 2 and channel.dim_out == 2 and channel.kraus is not None:
        radius = _max_output_radius(affine_representation(channel))
        return EntropyScalar(float(binary_entropy((1.0 + radius) / 2.0)), "von_neumann")

    d = channel.dim_in

    def objective(x):
        amp = x[:d] + 1j * x[d:]
        nrm = np.linalg.norm(amp)
        if nrm < 1e-9:
            return float(math.log2(channel.dim_out))
        amp = amp / nrm
        out = _apply_matrix(channel, np.outer(amp, amp.conj()))
        return float(von_neumann(out))

    starts = []
    for i in range(d):
        e = np.zeros(2 * d)
        e[i] = 1.0
        starts.append(e)
    starts.append(np.ones(2 * d) / math.sqrt(2 * d))
    rng = np.random.default_rng(0)
    for _ in range(12):
        starts.append(rng.standard_normal(2 * d))
    best = math.inf
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000},
        )
        best = min(best, float(res.fun))
    return EntropyScalar(max(best, 0.0), "von_neumann")


def is_degradable(channel: QuantumChannel, cond_limit: float = 1e12) -> DegradabilityReport:
    """Test whether the environment output can be produced from the channel output.

    Solves D o N = N_complementary for the degrading map D on
    superoperators and classifies D: if it is CPTP the channel is
    degradable. When the channel superoperator cannot be inverted
    reliably (condition number beyond cond_limit, or no exact linear
    solution in the non-square case) the status is "undetermined".
    """
    if channel.kraus is None:
        raise InvalidChannel("degradability needs a Kraus representation")
    comp = complementary(channel)
    m_n = _superoperator(channel)
    m_c = _superoperator(comp)
    n_env = comp.dim_out
    d_out = channel.dim_out

    sv = np.linalg.svd(m_n, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0.0 else math.inf
    square = m_n.shape[0] == m_n.shape[1]
    if square and cond > cond_limit:
        return DegradabilityReport("undetermined", None, cond, math.inf)

    if square:
        d_mat = np.linalg.solve(m_n.conj().T, m_c.conj().T).conj().T
    else:
        d_mat = m_c @ np.linalg.pinv(m_n, rcond=1e-12)
    residual = float(np.max(np.abs(d_mat @ m_n - m_c)))
    solve_tol = max(1e-9, cond * 1e-13)
    if residual > solve_tol:
        # no linear map sends the outputs to the environment outputs
        status = "not_degradable" if square else "undetermined"
        return DegradabilityReport(status, None, cond, residual)

    choi_d = _choi_from_superop(d_mat, d_out, n_env)
    eig_min = float(np.linalg.eigvalsh((choi_d + choi_d.conj().T) / 2.0)[0])
    t = choi_d.reshape(d_out, n_env, d_out, n_env)
    reduced = np.trace(t, axis1=1, axis2=3) * d_out
    tp_residual = float(np.max(np.abs(reduced - np.eye(d_out))))
    tol = max(1e-9, cond * 1e-13)
    if eig_min < -tol or tp_residual > max(1e-7, tol):
        return DegradabilityReport("not_degradable", None, cond, residual)

    w, v = np.linalg.eigh((choi_d + choi_d.conj().T) / 2.0)
    ops = []
    for idx in range(w.size):
        if w[idx] <= 1e-12:
            continue
        vec = v[:, idx].reshape(d_out, n_env)
        ops.append(math.sqrt(float(w[idx]) * d_out) * vec.T)
    degrading = QuantumChannel(
        ops,
        d_out,
        n_env,
        label=f"degrading({channel.label})",
        kind="degrading",
        trace_preserving=False,
    )
    return DegradabilityReport("degradable", degrading, cond, residual)


def is_entanglement_breaking(channel: QuantumChannel) -> bool:
    """PPT test on the Choi state; decisive for qubit-to-qubit channels."""
    if channel.dim_in != 2 or channel.dim_out != 2:
        raise Unsupported("entanglement-breaking test implemented for qubit channels")
    c = choi(channel).matrix
    t = c.reshape(2, 2, 2, 2)
    pt = t.transpose(2, 1, 0, 3).reshape(4, 4)  # transpose the reference leg
    return float(np.linalg.eigvalsh(pt)[0]) >= -CP_TOL


def channel_to_json(channel: QuantumChannel) -> dict:
    """JSON-ready dict with the explicit Kraus representation."""
    if channel.kraus is None:
        raise InvalidChannel("affine-only channel has no Kraus JSON form")
    return {
        "label": channel.label,
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [
            {"re": k.real.tolist(), "im": k.imag.tolist()} for k in channel.kraus
        ],
    }


def channel_from_json(data: dict, strict: bool = True) -> QuantumChannel:
    """Build a channel from a JSON dict.

    Accepts either {"kind": ..., <params>} for the constructor zoo or an
    explicit {"label", "dim_in", "dim_out", "kraus": [{"re", "im"}, ...]}
    form. In strict mode the explicit form must be CPTP.
    """
    if "kind" in data:
        params = {k: v for k, v in data.items() if k not in ("kind", "label")}
        return make_channel(data["kind"], **params)
    try:
        ops = [
            np.asarray(k["re"], dtype=float) + 1j * np.asarray(k["im"], dtype=float)
            for k in data["kraus"]
        ]
        dim_in = int(data["dim_in"])
        dim_out = int(data["dim_out"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidChannel(f"malformed channel JSON: {exc}") from exc
    ch = QuantumChannel(
        ops,
        dim_in,
        dim_out,
        label=str(data.get("label", "custom")),
        kind="custom",
        trace_preserving=strict,
    )
    if strict and not is_cptp(ch):
        raise InvalidChannel("channel JSON is not CPTP in strict mode")
    return ch


def random_cptp_channel(
    dim_in: int, dim_out: int, kraus_count: int, rng: np.random.Generator
) -> QuantumChannel:
    """A Haar-ish random CPTP channel from a random isometry."""
    rows = dim_out * kraus_count
    if rows < dim_in:
        raise InvalidParameter("dim_out * kraus_count must be at least dim_in")
    g = rng.standard_normal((rows, dim_in)) + 1j * rng.standard_normal((rows, dim_in))
    v, _ = np.linalg.qr(g)
    ops = [v[e * dim_out : (e + 1) * dim_out, :] for e in range(kraus_count)]
    return QuantumChannel(ops, dim_in, dim_out, label="random", kind="custom")
