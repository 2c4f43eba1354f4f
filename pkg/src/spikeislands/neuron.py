"""Behavioral model of a fast-mode sodium-potassium silicon neuron.

The neuron is a two-variable switched-current system advanced by explicit
forward Euler at a fixed time step:

    dv_m/dt = (i_in + i_na - i_k - i_r) / c_m
    dv_n/dt = mirror_ratio * i_na / c_n - v_n / tau_n

where
    i_na = i_na_max  while v_m > v_th        (regenerative up-swing),
    i_k  = i_k_max   while v_n > v_gate_th   (down-swing),
    i_r  = i_r       while v_n > v_gate_th   (refractory sink),

and v_m is clamped to [v_rest - 0.1 V, v_spike + 0.1 V].  v_n is the voltage
on the potassium-gate capacitor; it is charged by a mirror copy of the sodium
current and leaks linearly with time constant tau_n, which sets the
refractory period together with i_r.

The only exponential mode in the system is the v_n leak, so the stability
bound for the explicit integrator is dt <= tau_n / 10 (the switched membrane
currents are piecewise-constant slews and unconditionally stable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CLAMP_MARGIN_V",
    "NeuronParams",
    "NeuronState",
    "NoFiringError",
    "neuron_step",
    "natural_period",
    "rest_state",
    "stability_dt_max",
]

# Membrane clamp margin around [v_rest, v_spike], volts.
CLAMP_MARGIN_V = 0.1


class NoFiringError(RuntimeError):
    """Raised when a drive expected to cause firing produces no spikes."""


@dataclass(frozen=True)
class NeuronParams:
    """Component values and bias points of the fast-mode neuron.

    Parameters
    ----------
    c_m : float
        Membrane capacitance, farads.
    v_th : float
        Firing threshold of the sodium conductance, volts.
    i_na_max : float
        Peak sodium current (sets the pulse width), amperes.
    c_n : float
        Potassium-gate capacitance, farads.
    i_k_max : float
        Peak potassium sink current, amperes.
    i_r : float
        Refractory sink current, amperes.
    v_gate_th : float
        Potassium-gate activation threshold, volts.
    tau_n : float
        Linear discharge time constant of the gate voltage, seconds.
    v_spike : float
        Nominal spike peak amplitude, volts.
    v_rest : float
        Resting potential, volts.
    mirror_ratio : float
        Ratio of the gate charging current to the sodium current.
    """

    c_m: float
    v_th: float
    i_na_max: float
    c_n: float
    i_k_max: float
    i_r: float
    v_gate_th: float
    tau_n: float
    v_spike: float = 2.5
    v_rest: float = 0.0
    mirror_ratio: float = 1.0

    def __post_init__(self) -> None:
        for name in ("c_m", "c_n", "i_na_max", "i_k_max", "i_r", "tau_n", "mirror_ratio"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not (self.v_rest < self.v_gate_th < self.v_th < self.v_spike):
            raise ValueError("require v_rest < v_gate_th < v_th < v_spike")

    @property
    def v_clamp_lo(self) -> float:
        return self.v_rest - CLAMP_MARGIN_V

    @property
    def v_clamp_hi(self) -> float:
        return self.v_spike + CLAMP_MARGIN_V


@dataclass(frozen=True)
class NeuronState:
    """Instantaneous neuron state: membrane and gate voltages, volts."""

    v_m: float
    v_n: float
    refractory: bool = False


def rest_state(params: NeuronParams) -> NeuronState:
    """State with the membrane at rest and the potassium gate discharged."""
    return NeuronState(v_m=params.v_rest, v_n=0.0, refractory=False)


def stability_dt_max(params: NeuronParams) -> float:
    """Largest admissible Euler step: one tenth of the fastest time constant."""
    return params.tau_n / 10.0


def _advance(v_m: float, v_n: float, i_in: float, dt: float, p: NeuronParams) -> tuple[float, float]:
    """One unvalidated Euler step on plain floats (shared fast path)."""
    i_na = p.i_na_max if v_m > p.v_th else 0.0
    if v_n > p.v_gate_th:
        i_sink = p.i_k_max + p.i_r
    else:
        i_sink = 0.0
    v_m = v_m + dt * ((i_in + i_na - i_sink) / p.c_m)
    lo = p.v_rest - CLAMP_MARGIN_V
    hi = p.v_spike + CLAMP_MARGIN_V
    if v_m < lo:
        v_m = lo
    elif v_m > hi:
        v_m = hi
    v_n = v_n + dt * (p.mirror_ratio * i_na / p.c_n - v_n / p.tau_n)
    return v_m, v_n


def neuron_step(state: NeuronState, params: NeuronParams, i_in: float, dt: float) -> NeuronState:
    """Advance the neuron by one Euler step of length ``dt``.

    Parameters
    ----------
    state : NeuronState
    params : NeuronParams
    i_in : float
        Total injected current (noise plus net synaptic), amperes.
    dt : float
        Step length, seconds; must satisfy ``dt <= stability_dt_max(params)``.

    Returns
    -------
    NeuronState
        The state dt later.  The input state is not modified.
    """
    if not math.isfinite(i_in):
        raise ValueError(f"i_in must be finite, got {i_in!r}")
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if dt > stability_dt_max(params):
        raise ValueError(
            f"dt={dt:g} exceeds stability bound tau_n/10 = {stability_dt_max(params):g}"
        )
    v_m, v_n = _advance(state.v_m, state.v_n, i_in, dt, params)
    return NeuronState(v_m=v_m, v_n=v_n, refractory=v_n >= params.v_gate_th)


def natural_period(
    params: NeuronParams,
    i_const: float,
    dt: float,
    n_discard: int = 3,
    n_average: int = 8,
    detect_threshold: float = 1.0,
) -> float:
    """Steady inter-spike period under a constant drive ``i_const``.

    The neuron is simulated from rest; the first ``n_discard`` spikes are
    discarded and the next ``n_average`` inter-spike intervals are averaged.
    Spikes are rising crossings of ``detect_threshold`` with re-arm below it.

    Raises
    ------
    NoFiringError
        If the required number of spikes does not occur within 100 expected
        periods (the expectation is the charge time to threshold plus a
        microsecond of spike overhead).
    """
    if not math.isfinite(i_const) or i_const <= 0.0:
        raise NoFiringError(f"constant drive {i_const!r} cannot cause firing")
    if dt > stability_dt_max(params):
        raise ValueError("dt exceeds stability bound tau_n/10")

    t_expect = params.c_m * (params.v_th - params.v_rest) / i_const + 1e-6
    max_steps = int(math.ceil(100.0 * t_expect * (n_discard + n_average + 1) / dt))

    v_m = params.v_rest
    v_n = 0.0
    armed = True
    needed = n_discard + n_average + 1
    spike_steps: list[int] = []
    for k in range(max_steps):
        v_m, v_n = _advance(v_m, v_n, i_const, dt, params)
        if armed:
            if v_m >= detect_threshold:
                spike_steps.append(k + 1)
                armed = False
                if len(spike_steps) >= needed:
                    break
        elif v_m < detect_threshold:
            armed = True
    if len(spike_steps) < needed:
        raise NoFiringError(
            f"only {len(spike_steps)} spikes within {max_steps} steps at i_const={i_const:g}"
        )
    first = spike_steps[n_discard]
    last = spike_steps[n_discard + n_average]
    return (last - first) * dt / n_average
