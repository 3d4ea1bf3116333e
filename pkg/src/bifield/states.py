"""Single-excitation states of the discretized field and their inner products.

A state carries one excitation distributed over the four mode branches
(s, polarization) with s = +1/-1 and polarization 1/2, plus an optional
vacuum amplitude. Every state remembers *which* basis family its amplitudes
were given in through a ``BasisTag``:

* ``photon``: amplitudes are momentum-space densities psi(k) directly.
* ``positional(f)``: amplitudes are position-space densities phi(x) of the
  family generated by weight f(k); the canonical momentum amplitudes are
  psi(k) = f(k)/sqrt(2*pi) * integral dx exp(-i*s*k*x) phi(x).

The canonical momentum amplitudes are computed once and cached; they are the
tag-independent content of the state.

The bio-association map S sends a state to its partner in the dual family:
photon states are fixed points, while a positional state keeps its position
amplitudes but trades its weight for the reciprocal one. The biorthogonal
inner product contracts a state against the association of the other,

    bio_inner(psi, phi) = sum_branches sum_j dk * conj(S(phi)(k_j)) * psi(k_j),

which makes the photon, local (f = sqrt|k|) and bio-local (f = 1/sqrt|k|)
families each orthonormal in the discrete-delta sense. The metric eta acts
diagonally on canonical amplitudes as multiplication by 1/|k| (its inverse by
|k|); on the vacuum block both act as the identity.

Superpositions of components with different positional tags are stored
componentwise; S acts on each component separately and such states are
flagged as mixed provenance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import GridMismatchError
from .grid import (
    Grid,
    WeightFunction,
    _check_amplitudes,
    inv_sqrt_abs_k,
    reciprocal,
    sqrt_abs_k,
    to_momentum,
    to_position,
    unit_weight,
)

PHOTON = "photon"
POSITIONAL = "positional"


@dataclass(frozen=True)
class ModeLabel:
    """One of the four field branches: propagation sign and polarization."""

    s: int
    polarization: int

    def __post_init__(self):
        if self.s not in (1, -1):
            raise ValueError(f"s must be +1 or -1, got {self.s!r}")
        if self.polarization not in (1, 2):
            raise ValueError(f"polarization must be 1 or 2, got {self.polarization!r}")


MODE_LABELS = (
    ModeLabel(1, 1),
    ModeLabel(1, 2),
    ModeLabel(-1, 1),
    ModeLabel(-1, 2),
)


@dataclass(frozen=True)
class BasisTag:
    """Provenance of a component's amplitudes: photon or positional(weight)."""

    kind: str
    weight: WeightFunction | None = None

    def __post_init__(self):
        if self.kind not in (PHOTON, POSITIONAL):
            raise ValueError(f"unknown tag kind {self.kind!r}")
        if self.kind == POSITIONAL and self.weight is None:
            raise ValueError("positional tags need a weight function")
        if self.kind == PHOTON and self.weight is not None:
            raise ValueError("photon tags carry no weight function")


PHOTON_TAG = BasisTag(PHOTON)
LOCAL_TAG = BasisTag(POSITIONAL, sqrt_abs_k)
BIO_LOCAL_TAG = BasisTag(POSITIONAL, inv_sqrt_abs_k)
BLIP_TAG = BasisTag(POSITIONAL, unit_weight)


def positional_tag(weight: WeightFunction) -> BasisTag:
    return BasisTag(POSITIONAL, weight)


@dataclass(frozen=True)
class StateComponent:
    """Amplitudes of one provenance; keys are ModeLabel, values are arrays."""

    tag: BasisTag
    amplitudes: Mapping[ModeLabel, np.ndarray]


class SingleExcitationState:
    """A (vacuum + single excitation) state of the four-branch field."""

    def __init__(self, grid: Grid, components, vacuum_amplitude: complex = 0.0):
        self.grid = grid
        cleaned = []
        for comp in components:
            amps = {}
            for mode, values in comp.amplitudes.items():
                if not isinstance(mode, ModeLabel):
                    raise TypeError(f"amplitude keys must be ModeLabel, got {mode!r}")
                arr = _check_amplitudes(values, grid, f"amplitudes[{mode}]").copy()
                arr.setflags(write=False)
                amps[mode] = arr
            cleaned.append(StateComponent(comp.tag, amps))
        self.components = tuple(cleaned)
        self.vacuum_amplitude = complex(vacuum_amplitude)

    @cached_property
    def canonical(self) -> dict[ModeLabel, np.ndarray]:
        """Momentum-space densities psi(k) per branch, summed over components."""
        out: dict[ModeLabel, np.ndarray] = {}
        for comp in self.components:
            for mode, values in comp.amplitudes.items():
                if comp.tag.kind == PHOTON:
                    psi = np.array(values, dtype=complex)
                else:
                    psi = to_momentum(values, comp.tag.weight, mode.s, self.grid)
                if mode in out:
                    out[mode] = out[mode] + psi
                else:
                    out[mode] = psi
        for arr in out.values():
            arr.setflags(write=False)
        return out

    @property
    def populated_modes(self) -> tuple[ModeLabel, ...]:
        return tuple(m for m in MODE_LABELS if m in self.canonical)

    @property
    def is_photon_tagged(self) -> bool:
        return all(c.tag.kind == PHOTON for c in self.components)

    @property
    def is_mixed_provenance(self) -> bool:
        return len({c.tag for c in self.components}) > 1

    def canonical_for(self, mode: ModeLabel) -> np.ndarray:
        if mode in self.canonical:
            return self.canonical[mode]
        return np.zeros(self.grid.n_modes, dtype=complex)

    def __repr__(self):
        tags = ", ".join(sorted({_tag_name(c.tag, strict=False) for c in self.components}))
        return (
            f"SingleExcitationState(n_modes={self.grid.n_modes}, "
            f"components={len(self.components)}, tags=[{tags}])"
        )


def make_state(grid, tag: BasisTag, amplitudes, vacuum_amplitude=0.0) -> SingleExcitationState:
    """Build a single-component state from amplitudes in the tagged basis."""
    comp = StateComponent(tag, dict(amplitudes))
    return SingleExcitationState(grid, [comp], vacuum_amplitude)


def superpose(states, coefficients) -> SingleExcitationState:
    """Linear combination sum_i c_i |state_i>, componentwise by tag."""
    states = list(states)
    coefficients = [complex(c) for c in coefficients]
    if len(states) != len(coefficients):
        raise ValueError("need one coefficient per state")
    if not states:
        raise ValueError("need at least one state")
    grid = states[0].grid
    merged: dict[BasisTag, dict[ModeLabel, np.ndarray]] = {}
    vacuum = 0.0 + 0.0j
    for state, c in zip(states, coefficients):
        if state.grid != grid:
            raise GridMismatchError("cannot superpose states on different grids")
        vacuum += c * state.vacuum_amplitude
        for comp in state.components:
            bucket = merged.setdefault(comp.tag, {})
            for mode, values in comp.amplitudes.items():
                if mode in bucket:
                    bucket[mode] = bucket[mode] + c * values
                else:
                    bucket[mode] = c * values
    components = [StateComponent(tag, amps) for tag, amps in merged.items()]
    return SingleExcitationState(grid, components, vacuum)


def bio_associate(state: SingleExcitationState) -> SingleExcitationState:
    """The association map S (an involution).

    Photon components are fixed; a positional component keeps its position
    amplitudes and swaps its weight for the reciprocal one. Acts per
    component on superpositions.
    """
    components = []
    for comp in state.components:
        if comp.tag.kind == PHOTON:
            components.append(comp)
        else:
            components.append(
                StateComponent(positional_tag(reciprocal(comp.tag.weight)), comp.amplitudes)
            )
    return SingleExcitationState(state.grid, components, state.vacuum_amplitude)


def _check_same_grid(a: SingleExcitationState, b: SingleExcitationState):
    if a.grid != b.grid:
        raise GridMismatchError(
            f"states live on different grids: {a.grid!r} vs {b.grid!r}"
        )


def bio_inner(psi: SingleExcitationState, phi: SingleExcitationState) -> complex:
    """Biorthogonal inner product; linear in psi, antilinear in phi."""
    _check_same_grid(psi, phi)
    dk = psi.grid.delta_k
    phi_assoc = bio_associate(phi)
    total = np.conj(phi_assoc.vacuum_amplitude) * psi.vacuum_amplitude
    for mode, psi_k in psi.canonical.items():
        other = phi_assoc.canonical.get(mode)
        if other is not None:
            total += dk * np.vdot(other, psi_k)
    return complex(total)


def _weighted_inner(psi, phi, kernel_values) -> complex:
    _check_same_grid(psi, phi)
    dk = psi.grid.delta_k
    total = np.conj(phi.vacuum_amplitude) * psi.vacuum_amplitude
    for mode, psi_k in psi.canonical.items():
        other = phi.canonical.get(mode)
        if other is not None:
            total += dk * np.vdot(other, kernel_values * psi_k)
    return complex(total)


def eta_inner(psi: SingleExcitationState, phi: SingleExcitationState) -> complex:
    """<phi|eta|psi>: the metric weights each mode by 1/|k|."""
    return _weighted_inner(psi, phi, 1.0 / np.abs(psi.grid.k_values))


def eta_inv_inner(psi: SingleExcitationState, phi: SingleExcitationState) -> complex:
    """<phi|eta^-1|psi>: the inverse metric weights each mode by |k|."""
    return _weighted_inner(psi, phi, np.abs(psi.grid.k_values))


def standard_inner(psi: SingleExcitationState, phi: SingleExcitationState) -> complex:
    """The conventional product of canonical amplitudes."""
    return _weighted_inner(psi, phi, np.ones(psi.grid.n_modes))


def eta_apply(state: SingleExcitationState) -> SingleExcitationState:
    """Apply the metric: psi(k) -> psi(k)/|k|.

    The result is returned in the bio-local family (the metric maps each
    basis vector onto its dual partner; in particular it sends local deltas
    to bio-local deltas). The vacuum block is untouched.
    """
    return _diagonal_metric_action(state, inv_power=+1)


def eta_inv_apply(state: SingleExcitationState) -> SingleExcitationState:
    """Apply the inverse metric: psi(k) -> psi(k)*|k|; returns a local-family state."""
    return _diagonal_metric_action(state, inv_power=-1)


def _diagonal_metric_action(state, inv_power: int) -> SingleExcitationState:
    grid = state.grid
    absk = np.abs(grid.k_values)
    factor = absk ** float(-inv_power)
    weight = inv_sqrt_abs_k if inv_power > 0 else sqrt_abs_k
    amplitudes = {}
    for mode, psi_k in state.canonical.items():
        scaled = psi_k * factor
        amplitudes[mode] = to_position(scaled, weight, mode.s, grid)
    return make_state(grid, positional_tag(weight), amplitudes, state.vacuum_amplitude)


_PRODUCTS = {
    "bio": bio_inner,
    "eta": eta_inner,
    "eta_inv": eta_inv_inner,
    "standard": standard_inner,
}


def _auto_product(state: SingleExcitationState) -> str:
    tags = {c.tag for c in state.components}
    if tags == {LOCAL_TAG}:
        return "eta"
    if tags == {BIO_LOCAL_TAG}:
        return "eta_inv"
    return "bio"


def norm(state: SingleExcitationState, product: str = "auto") -> float:
    """Norm of the state.

    ``product`` defaults to the inner product matching the state's tag
    family: the eta product for local states, the inverse-eta product for
    bio-local states, and the biorthogonal product otherwise (which
    coincides with the conventional one on photon-tagged states). Any of
    "bio", "eta", "eta_inv", "standard" can be forced explicitly.
    """
    if product == "auto":
        product = _auto_product(state)
    try:
        inner = _PRODUCTS[product]
    except KeyError:
        raise ValueError(f"unknown inner product {product!r}") from None
    value = inner(state, state)
    return float(np.sqrt(max(value.real, 0.0)))


def normalized(state: SingleExcitationState, product: str = "bio") -> SingleExcitationState:
    """Rescale the state to unit norm in the chosen product."""
    n = norm(state, product)
    if n == 0.0:
        raise ValueError("cannot normalize the zero state")
    scale = 1.0 / n
    components = [
        StateComponent(c.tag, {m: scale * a for m, a in c.amplitudes.items()})
        for c in state.components
    ]
    return SingleExcitationState(state.grid, components, scale * state.vacuum_amplitude)


def positional_amplitudes(state: SingleExcitationState, weight: WeightFunction) -> dict:
    """Position-space densities of the state in the family of ``weight``."""
    return {
        mode: to_position(psi_k, weight, mode.s, state.grid)
        for mode, psi_k in state.canonical.items()
    }


# --- JSON import/export ----------------------------------------------------

_TAG_NAMES = {
    PHOTON_TAG: "photon",
    BLIP_TAG: "blip",
    LOCAL_TAG: "local",
    BIO_LOCAL_TAG: "bio_local",
}
_NAMES_TO_TAGS = {v: k for k, v in _TAG_NAMES.items()}


def _tag_name(tag: BasisTag, strict: bool = True) -> str:
    if tag in _TAG_NAMES:
        return _TAG_NAMES[tag]
    if strict:
        raise ValueError(f"tag {tag!r} has no serialized name (custom weight?)")
    return f"positional({tag.weight.label})" if tag.kind == POSITIONAL else tag.kind


def state_to_records(state: SingleExcitationState) -> list[dict]:
    """Serialize to a list of JSON records.

    Each record is ``{tag, s, lambda, basis, re, im}`` with ``basis`` "k" for
    photon components (momentum densities) and "x" for positional ones
    (position densities). Only the named tag families serialize; a nonzero
    vacuum amplitude has no record form and raises.
    """
    if state.vacuum_amplitude != 0.0:
        raise ValueError("states with a vacuum amplitude have no record form")
    records = []
    for comp in state.components:
        name = _tag_name(comp.tag)
        basis = "k" if comp.tag.kind == PHOTON else "x"
        for mode in MODE_LABELS:
            if mode not in comp.amplitudes:
                continue
            values = comp.amplitudes[mode]
            if not np.any(values):
                continue
            records.append(
                {
                    "tag": name,
                    "s": mode.s,
                    "lambda": mode.polarization,
                    "basis": basis,
                    "re": [float(v) for v in values.real],
                    "im": [float(v) for v in values.imag],
                }
            )
    return records


def state_from_records(grid: Grid, records) -> SingleExcitationState:
    """Rebuild a state from ``state_to_records`` output (one component per record)."""
    components = []
    for rec in records:
        try:
            tag = _NAMES_TO_TAGS[rec["tag"]]
            mode = ModeLabel(int(rec["s"]), int(rec["lambda"]))
            basis = rec["basis"]
            values = np.asarray(rec["re"], dtype=float) + 1j * np.asarray(rec["im"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed state record: {exc}") from exc
        expected = "k" if tag.kind == PHOTON else "x"
        if basis != expected:
            raise ValueError(
                f"tag {rec['tag']!r} stores amplitudes in basis {expected!r}, got {basis!r}"
            )
        components.append(StateComponent(tag, {mode: values}))
    return SingleExcitationState(grid, components)


# --- packet constructors ----------------------------------------------------


def _periodic_offsets(grid: Grid, center: float) -> np.ndarray:
    d = grid.x_values - center
    L = grid.domain_length
    return (d + L / 2.0) % L - L / 2.0


def gaussian_position_packet(
    grid: Grid,
    tag: BasisTag,
    mode: ModeLabel,
    center: float,
    width: float,
    amplitude: complex = 1.0,
) -> SingleExcitationState:
    """Gaussian position-space packet in one branch of a positional family."""
    if tag.kind != POSITIONAL:
        raise ValueError("gaussian position packets need a positional tag")
    if width <= 0:
        raise ValueError(f"width must be positive, got {width!r}")
    d = _periodic_offsets(grid, center)
    phi = amplitude * np.exp(-(d**2) / (2.0 * width**2)).astype(complex)
    return make_state(grid, tag, {mode: phi})


def gaussian_momentum_packet(
    grid: Grid,
    mode: ModeLabel,
    center_k: float,
    width_k: float,
    amplitude: complex = 1.0,
) -> SingleExcitationState:
    """Gaussian momentum-space packet, photon tagged."""
    if width_k <= 0:
        raise ValueError(f"width_k must be positive, got {width_k!r}")
    k = grid.k_values
    psi = amplitude * np.exp(-((k - center_k) ** 2) / (2.0 * width_k**2)).astype(complex)
    return make_state(grid, PHOTON_TAG, {mode: psi})
