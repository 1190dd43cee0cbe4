"""Block-diagonal stacking and closure of element models into one network.

Element models are stacked block-diagonally; 0/1 connection matrices F
(component outputs -> component inputs) and G (external inputs ->
component inputs) route every component input from exactly one source;
the interconnection is then eliminated in closed form:

    A_cl = A + B F (I - D F)^-1 C
    B_cl = B [I + F (I - D F)^-1 D] G
    C_cl = (I - D F)^-1 C
    D_cl = (I - D F)^-1 D G
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .composites import Port
from .core import StateSpaceModel
from .errors import ConfigurationError, NumericalError

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ComponentRange:
    """Index ranges of one element inside the stacked system."""

    states: range
    inputs: range
    outputs: range


@dataclass(frozen=True)
class StackedSystem:
    """Block-diagonal aggregation of element models, in declaration order."""

    model: StateSpaceModel
    component_boundaries: tuple[ComponentRange, ...]


@dataclass(frozen=True)
class ConnectionMatrices:
    """Sparse 0/1 routing: w = F y + G u_ext.

    Every row of [F G] contains exactly one 1: each component input is fed
    by exactly one component output or one external input.
    """

    F: np.ndarray
    G: np.ndarray


def stack(models: list[StateSpaceModel]) -> StackedSystem:
    """Stack element models block-diagonally, concatenating their labels."""
    if not models:
        raise ConfigurationError("cannot stack an empty model list")
    A = scipy.linalg.block_diag(*[m.A for m in models])
    B = scipy.linalg.block_diag(*[m.B for m in models])
    C = scipy.linalg.block_diag(*[m.C for m in models])
    D = scipy.linalg.block_diag(*[m.D for m in models])
    states, inputs, outputs = [], [], []
    boundaries = []
    for m in models:
        boundaries.append(ComponentRange(
            range(len(states), len(states) + m.n_states),
            range(len(inputs), len(inputs) + m.n_inputs),
            range(len(outputs), len(outputs) + m.n_outputs),
        ))
        states.extend(m.state_labels)
        inputs.extend(m.input_labels)
        outputs.extend(m.output_labels)
    model = StateSpaceModel(A, B, C, D, tuple(states), tuple(inputs), tuple(outputs))
    return StackedSystem(model, tuple(boundaries))


def build_FG(stacked: StackedSystem, links: list[tuple[Port, Port]],
             externals: list[tuple[str, Port]]) -> ConnectionMatrices:
    """Derive the connection matrices from port links and external inputs.

    Each link (right_port, left_port) expands to two signal identities:
    the right port's pressure output feeds the left port's pressure input,
    and the left port's flow output feeds the right port's flow input.
    Each external (name, port) drives the port's input signal. External
    columns follow declaration order.
    """
    model = stacked.model
    n_w = model.n_inputs
    F = np.zeros((n_w, model.n_outputs))
    G = np.zeros((n_w, len(externals)))
    driven = [None] * n_w

    def drive(input_label, source_desc, matrix, col):
        i = model.input_index(input_label)
        if driven[i] is not None:
            raise ConfigurationError(f"conflicting drivers for {input_label}")
        driven[i] = source_desc
        matrix[i, col] = 1.0

    for right, left in links:
        if right.flange != "r" or left.flange != "l":
            raise ConfigurationError(
                f"incompatible flanges: link must connect a right flange to a left flange "
                f"(got {right.flange!r}-{left.flange!r})")
        drive(left.input_label, str(right.output_label), F,
              model.output_index(right.output_label))
        drive(right.input_label, str(left.output_label), F,
              model.output_index(left.output_label))
    for col, (name, port) in enumerate(externals):
        drive(port.input_label, name, G, col)

    for i, src in enumerate(driven):
        if src is None:
            raise ConfigurationError(
                f"unconnected component input {model.input_labels[i]}")
    return ConnectionMatrices(F, G)


def close(stacked: StackedSystem, conn: ConnectionMatrices,
          external_labels: tuple | None = None) -> StateSpaceModel:
    """Eliminate internal signals, closing the network into one model.

    Outputs are all component outputs; inputs are the declared externals.
    """
    m = stacked.model
    F, G = conn.F, conn.G
    IDF = np.eye(m.n_outputs) - m.D @ F
    if np.linalg.cond(IDF) > CONDITION_LIMIT:
        raise NumericalError("algebraic loop ill-posed: I - D F is singular or ill-conditioned")
    M = np.linalg.inv(IDF)
    A_cl = m.A + m.B @ F @ M @ m.C
    B_cl = m.B @ (np.eye(m.n_inputs) + F @ M @ m.D) @ G
    C_cl = M @ m.C
    D_cl = M @ m.D @ G
    if external_labels is None:
        external_labels = tuple(f"u{j}" for j in range(G.shape[1]))
    return StateSpaceModel(A_cl, B_cl, C_cl, D_cl,
                           m.state_labels, external_labels, m.output_labels)


def select_outputs(model: StateSpaceModel, labels) -> StateSpaceModel:
    """Restrict and reorder the outputs to the requested labels."""
    rows = [model.output_index(lab) for lab in labels]
    return StateSpaceModel(model.A, model.B, model.C[rows, :], model.D[rows, :],
                           model.state_labels, model.input_labels,
                           tuple(model.output_labels[r] for r in rows))
