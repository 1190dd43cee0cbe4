"""Catalog of network elements: pipes, joints, branches, series runs, gains.

Joints and branches absorb the index-1 algebraic interconnection
constraints into a single unconstrained LTI model. All composites use the
isothermal 2D pipe model and assume positive nominal flow entering at the
left flange of every member pipe ('l' is the steady-flow entry side);
reversed steady flow must be modeled by reversing pipe orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import GasProperties, OperatingPoint, PipeParams, SignalLabel, StateSpaceModel
from .errors import ConfigurationError
from .pipe_dynamics import iso_coefficients, linearize_2d

NOMINAL_RTOL = 1e-9


@dataclass(frozen=True)
class Port:
    """One flange of an element: an input signal paired with an output signal.

    A left flange accepts pressure and emits flow; a right flange accepts
    flow and emits pressure.
    """

    name: str
    flange: str  # 'l' or 'r'
    input_label: SignalLabel
    output_label: SignalLabel


@dataclass(frozen=True)
class CompositeModel:
    """An element model plus its port table and bookkeeping.

    kind is one of pipe/joint/branch/series/gain; delta is the nominal
    flow-split parameter (joints only).
    """

    model: StateSpaceModel
    kind: str
    member_ids: tuple[str, ...]
    ports: dict[str, Port] = field(default_factory=dict)
    delta: float | None = None


def _left_port(name: str, element_id: str) -> Port:
    return Port(name, "l",
                SignalLabel(element_id, "l", "p"),
                SignalLabel(element_id, "l", "q"))


def _right_port(name: str, element_id: str) -> Port:
    return Port(name, "r",
                SignalLabel(element_id, "r", "q"),
                SignalLabel(element_id, "r", "p"))


def _require_positive_flow(ops):
    for op in ops:
        if not op.q_ss > 0.0:
            raise ConfigurationError("composite requires positive nominal flow")


def _rel_close(a, b, tol=NOMINAL_RTOL):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def make_pipe(params: PipeParams, op: OperatingPoint, gas: GasProperties,
              element_id: str = "P") -> CompositeModel:
    """Single isothermal pipe wrapped as a network element."""
    model = linearize_2d(params, op, gas, element_id)
    ports = {"l": _left_port("l", element_id), "r": _right_port("r", element_id)}
    return CompositeModel(model, "pipe", (element_id,), ports)


def make_joint(pipe0, pipe1, pipe2, gas: GasProperties,
               member_ids=("P0", "P1", "P2"),
               check_nominal: bool = True) -> CompositeModel:
    """Two feeder pipes (1, 2) merging into pipe 0; five-state model.

    Each pipeX argument is a (PipeParams, OperatingPoint) pair. The
    pressure constraint p_1r = p_2r = p_0l removes one state; delta is the
    nominal share of the merged flow attributed to feeder 1. The second
    state row carries alpha_1*(1-delta), which equals the parallel
    combination alpha_1*alpha_2/(alpha_1+alpha_2) (= alpha_2*delta).

    States [p_0r, p_1r, q_0l, q_1l, q_2l]; inputs [p_1l, p_2l, q_0r];
    outputs [p_0r, q_1l, q_2l].
    """
    (par0, op0), (par1, op1), (par2, op2) = pipe0, pipe1, pipe2
    _require_positive_flow((op0, op1, op2))
    if check_nominal:
        if not _rel_close(op0.q_ss, op1.q_ss + op2.q_ss):
            raise ConfigurationError(
                "inconsistent nominals: joint requires q0_ss = q1_ss + q2_ss")
        if not _rel_close(op1.p_r_ss, op2.p_r_ss):
            raise ConfigurationError(
                "inconsistent nominals: joint requires p1_r_ss = p2_r_ss")
    c0 = iso_coefficients(par0, op0, gas)
    c1 = iso_coefficients(par1, op1, gas)
    c2 = iso_coefficients(par2, op2, gas)
    delta = c1.alpha / (c1.alpha + c2.alpha)
    a1d = c1.alpha * (1.0 - delta)

    A = np.array([
        [0.0, 0.0, -c0.alpha, 0.0, 0.0],
        [0.0, 0.0, a1d, -a1d, -a1d],
        [c0.beta_pr, c0.beta_pl, c0.gamma, 0.0, 0.0],
        [0.0, c1.beta_pr, 0.0, c1.gamma, 0.0],
        [0.0, c2.beta_pr, 0.0, 0.0, c2.gamma],
    ])
    B = np.array([
        [0.0, 0.0, c0.alpha],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [c1.beta_pl, 0.0, 0.0],
        [0.0, c2.beta_pl, 0.0],
    ])
    C = np.zeros((3, 5))
    C[0, 0] = C[1, 3] = C[2, 4] = 1.0
    D = np.zeros((3, 3))

    id0, id1, id2 = member_ids
    states = (
        SignalLabel(id0, "r", "p"), SignalLabel(id1, "r", "p"),
        SignalLabel(id0, "l", "q"), SignalLabel(id1, "l", "q"),
        SignalLabel(id2, "l", "q"),
    )
    inputs = (SignalLabel(id1, "l", "p"), SignalLabel(id2, "l", "p"),
              SignalLabel(id0, "r", "q"))
    outputs = (states[0], states[3], states[4])
    model = StateSpaceModel(A, B, C, D, states, inputs, outputs)
    ports = {
        "l1": _left_port("l1", id1),
        "l2": _left_port("l2", id2),
        "r": _right_port("r", id0),
    }
    return CompositeModel(model, "joint", tuple(member_ids), ports, delta=delta)


def make_branch(pipe0, pipe1, pipe2, gas: GasProperties,
                member_ids=("P0", "P1", "P2"),
                check_nominal: bool = True) -> CompositeModel:
    """Pipe 0 splitting into pipes 1 and 2; six-state model (no reduction).

    States [p_0r, p_1r, p_2r, q_0l, q_1l, q_2l]; inputs [p_0l, q_1r, q_2r];
    outputs [p_1r, p_2r, q_0l].
    """
    (par0, op0), (par1, op1), (par2, op2) = pipe0, pipe1, pipe2
    _require_positive_flow((op0, op1, op2))
    if check_nominal and not _rel_close(op0.q_ss, op1.q_ss + op2.q_ss):
        raise ConfigurationError(
            "inconsistent nominals: branch requires q0_ss = q1_ss + q2_ss")
    c0 = iso_coefficients(par0, op0, gas)
    c1 = iso_coefficients(par1, op1, gas)
    c2 = iso_coefficients(par2, op2, gas)

    A = np.array([
        [0.0, 0.0, 0.0, -c0.alpha, c0.alpha, c0.alpha],
        [0.0, 0.0, 0.0, 0.0, -c1.alpha, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -c2.alpha],
        [c0.beta_pr, 0.0, 0.0, c0.gamma, 0.0, 0.0],
        [c1.beta_pl, c1.beta_pr, 0.0, 0.0, c1.gamma, 0.0],
        [c2.beta_pl, 0.0, c2.beta_pr, 0.0, 0.0, c2.gamma],
    ])
    B = np.array([
        [0.0, 0.0, 0.0],
        [0.0, c1.alpha, 0.0],
        [0.0, 0.0, c2.alpha],
        [c0.beta_pl, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ])
    C = np.zeros((3, 6))
    C[0, 1] = C[1, 2] = C[2, 3] = 1.0
    D = np.zeros((3, 3))

    id0, id1, id2 = member_ids
    states = (
        SignalLabel(id0, "r", "p"), SignalLabel(id1, "r", "p"),
        SignalLabel(id2, "r", "p"), SignalLabel(id0, "l", "q"),
        SignalLabel(id1, "l", "q"), SignalLabel(id2, "l", "q"),
    )
    inputs = (SignalLabel(id0, "l", "p"), SignalLabel(id1, "r", "q"),
              SignalLabel(id2, "r", "q"))
    outputs = (states[1], states[2], states[3])
    model = StateSpaceModel(A, B, C, D, states, inputs, outputs)
    ports = {
        "l": _left_port("l", id0),
        "r1": _right_port("r1", id1),
        "r2": _right_port("r2", id2),
    }
    return CompositeModel(model, "branch", tuple(member_ids), ports)


def make_series(pipes, gas: GasProperties, member_ids=None,
                check_nominal: bool = True) -> CompositeModel:
    """N pipes chained left to right; 2N-state model.

    pipes is an ordered list of (PipeParams, OperatingPoint). States are
    [p_0r .. p_{N-1}r, q_0l .. q_{N-1}l]; inputs [p_0l, q_{N-1}r];
    outputs [p_{N-1}r, q_0l].
    """
    pipes = list(pipes)
    if not pipes:
        raise ConfigurationError("series requires at least one pipe")
    N = len(pipes)
    if member_ids is None:
        member_ids = tuple(f"P{i}" for i in range(N))
    member_ids = tuple(member_ids)
    if len(member_ids) != N:
        raise ConfigurationError("series needs one id per member pipe")
    ops = [op for _, op in pipes]
    _require_positive_flow(ops)
    if check_nominal:
        for i in range(N - 1):
            if not _rel_close(ops[i].q_ss, ops[i + 1].q_ss):
                raise ConfigurationError("inconsistent nominals: series requires equal flow")
            if not _rel_close(ops[i].p_r_ss, ops[i + 1].p_l_ss):
                raise ConfigurationError(
                    "inconsistent nominals: series requires chained pressures")
    cs = [iso_coefficients(par, op, gas) for par, op in pipes]

    A12 = np.zeros((N, N))
    A21 = np.zeros((N, N))
    for i, c in enumerate(cs):
        A12[i, i] = -c.alpha
        if i + 1 < N:
            A12[i, i + 1] = c.alpha
        A21[i, i] = c.beta_pr
        if i >= 1:
            A21[i, i - 1] = c.beta_pl
    A22 = np.diag([c.gamma for c in cs])
    A = np.block([[np.zeros((N, N)), A12], [A21, A22]])
    B = np.zeros((2 * N, 2))
    B[N - 1, 1] = cs[-1].alpha
    B[N, 0] = cs[0].beta_pl
    C = np.zeros((2, 2 * N))
    C[0, N - 1] = 1.0
    C[1, N] = 1.0
    D = np.zeros((2, 2))

    states = tuple(SignalLabel(mid, "r", "p") for mid in member_ids) + \
        tuple(SignalLabel(mid, "l", "q") for mid in member_ids)
    inputs = (SignalLabel(member_ids[0], "l", "p"),
              SignalLabel(member_ids[-1], "r", "q"))
    outputs = (states[N - 1], states[N])
    model = StateSpaceModel(A, B, C, D, states, inputs, outputs)
    ports = {
        "l": _left_port("l", member_ids[0]),
        "r": _right_port("r", member_ids[-1]),
    }
    return CompositeModel(model, "series", member_ids, ports)


def make_gain(k: float, element_id: str = "G") -> CompositeModel:
    """Static two-port gain (compressor or valve): p_r = k p_l, q_l = q_r."""
    if k == 0.0:
        raise ConfigurationError("gain k must be nonzero")
    D = np.array([[k, 0.0], [0.0, 1.0]])
    inputs = (SignalLabel(element_id, "l", "p"), SignalLabel(element_id, "r", "q"))
    outputs = (SignalLabel(element_id, "r", "p"), SignalLabel(element_id, "l", "q"))
    model = StateSpaceModel(np.zeros((0, 0)), np.zeros((0, 2)),
                            np.zeros((2, 0)), D, (), inputs, outputs)
    ports = {"l": _left_port("l", element_id), "r": _right_port("r", element_id)}
    return CompositeModel(model, "gain", (element_id,), ports)
