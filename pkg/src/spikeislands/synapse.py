"""Current-mode low-pass synapse models.

Two models are provided:

* ``linear_step`` — the first-order reference filter
      tau * dI/dt = -I + I_in
* ``dpi_step`` — the log-domain differential-pair integrator (DPI)
      tau * dI_out/dt = -I_out + I_in * (I_out / I_tau) / (1 + I_out / I_tau)
  with time constant tau = C_s * U_T / (kappa * I_tau).

The DPI equation has I_out = 0 as an absorbing state (the multiplicative
gain term vanishes), so the output is floored at ``i_tau * 1e-6``,
representing device leakage, which lets the gain term lift the output when
an input pulse arrives.

Presynaptic voltage spikes act on the input transistor as a switch, so a
spike train converts to a rectangular current drive of amplitude ``i_pulse``
lasting ``pulse_width`` after each spike; overlapping pulses do not stack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SynapseParams",
    "SynapseState",
    "time_constant",
    "dpi_step",
    "linear_step",
    "presynaptic_pulse",
    "FLOOR_RATIO",
]

# Output floor as a fraction of i_tau (device leakage).
FLOOR_RATIO = 1e-6

# Thermal voltage at 300 K, volts.
U_T_300K = 25.85e-3


@dataclass(frozen=True)
class SynapseParams:
    """DPI synapse component values and spike-to-current conversion.

    Parameters
    ----------
    c_s : float
        Synapse capacitance, farads.
    i_tau : float
        Leak bias current, amperes.
    kappa : float
        Sub-threshold slope factor, dimensionless, in (0, 1].
    u_t : float
        Thermal voltage, volts (default 25.85 mV at 300 K).
    polarity : str
        "exc" or "inh"; the sign is applied where the output current is
        injected into the target membrane, not inside the synapse.
    i_pulse : float
        Input current amplitude per presynaptic spike, amperes.
    pulse_width : float
        Duration of the input current pulse per spike, seconds.
    """

    c_s: float
    i_tau: float
    i_pulse: float
    pulse_width: float
    kappa: float = 0.7
    u_t: float = U_T_300K
    polarity: str = "exc"

    def __post_init__(self) -> None:
        for name in ("c_s", "i_tau", "u_t", "i_pulse", "pulse_width"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError("kappa must be in (0, 1]")
        if self.polarity not in ("exc", "inh"):
            raise ValueError(f"polarity must be 'exc' or 'inh', got {self.polarity!r}")

    @property
    def i_floor(self) -> float:
        return self.i_tau * FLOOR_RATIO


@dataclass(frozen=True)
class SynapseState:
    """Output current magnitude, amperes (polarity applied at injection)."""

    i_out: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.i_out) and self.i_out >= 0.0):
            raise ValueError("i_out must be finite and non-negative")


def time_constant(params: SynapseParams) -> float:
    """Synapse time constant C_s * U_T / (kappa * I_tau), seconds."""
    return params.c_s * params.u_t / (params.kappa * params.i_tau)


def dpi_step(state: SynapseState, params: SynapseParams, i_in: float, dt: float) -> SynapseState:
    """One explicit Euler step of the DPI dynamics.

    ``i_in`` is the (non-negative) input current; ``dt`` must satisfy
    ``dt <= tau / 10``.  The result is floored at ``params.i_floor``.
    """
    if not math.isfinite(i_in) or i_in < 0.0:
        raise ValueError(f"i_in must be finite and >= 0, got {i_in!r}")
    tau = time_constant(params)
    if not 0.0 < dt <= tau / 10.0:
        raise ValueError(f"dt={dt:g} outside (0, tau/10] with tau={tau:g}")
    i = state.i_out
    di = (-i + i_in * (i / (params.i_tau + i))) / tau
    i2 = i + dt * di
    floor = params.i_floor
    if i2 < floor:
        i2 = floor
    return SynapseState(i_out=i2)


def linear_step(state: SynapseState, tau: float, i_in: float, dt: float) -> SynapseState:
    """One Euler step of the linear first-order filter tau*dI/dt = -I + I_in."""
    if not 0.0 < dt <= tau / 10.0:
        raise ValueError(f"dt={dt:g} outside (0, tau/10]")
    i = state.i_out
    i2 = i + dt * ((i_in - i) / tau)
    return SynapseState(i_out=i2)


def presynaptic_pulse(spike_times, params: SynapseParams, t):
    """Rectangular input-current drive produced by a presynaptic spike train.

    Returns ``i_pulse`` wherever ``t`` lies within ``pulse_width`` after any
    spike time, else 0.  Overlapping pulses do not stack (the input
    transistor is a switch: on or off).

    Parameters
    ----------
    spike_times : array_like
        Spike times in seconds, sorted ascending.
    params : SynapseParams
    t : float or array_like
        Query time(s), seconds.

    Returns
    -------
    float or ndarray
        Drive current, same shape as ``t``.
    """
    times = np.asarray(spike_times, dtype=float)
    if times.ndim != 1:
        raise ValueError("spike_times must be one-dimensional")
    if times.size > 1 and np.any(np.diff(times) < 0.0):
        raise ValueError("spike_times must be sorted ascending")

    scalar = np.isscalar(t) or np.ndim(t) == 0
    tq = np.atleast_1d(np.asarray(t, dtype=float))
    if times.size == 0:
        out = np.zeros_like(tq)
        return float(out[0]) if scalar else out

    idx = np.searchsorted(times, tq, side="right") - 1
    has_prev = idx >= 0
    last = times[np.clip(idx, 0, times.size - 1)]
    active = has_prev & (tq - last < params.pulse_width)
    out = np.where(active, params.i_pulse, 0.0)
    return float(out[0]) if scalar else out
