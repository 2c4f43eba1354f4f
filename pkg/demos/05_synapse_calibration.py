"""Calibration measurements behind the shipped presets.

Documents how the default neuron and synapse constants were chosen:

1. tonic-rate calibration of the fast-mode neuron (~1 MHz at 1.5 uA);
2. DPI step response and time constant;
3. per-spike postsynaptic membrane lift ("kick") for 1..3 parallel
   synapses, measured with a raised-threshold observer neuron so the
   charge accumulates without firing;
4. relay latency from a presynaptic spike to the postsynaptic spike for a
   tripled synapse onto a quiet neuron.

The kick is deliberately sub-threshold for a single synapse (a lone
point-to-point connection fires its target only when background noise has
pre-charged it) and supra-threshold for two or more stacked synapses,
which is what makes multi-synapse interneuron connections markedly more
effective at coupling islands.
"""

from dataclasses import replace

import numpy as np

import spikeislands.presets as presets
from spikeislands import (
    InterIslandLink,
    IslandSpec,
    NetworkSpec,
    NoiseSpec,
    SimConfig,
    SynapseState,
    dpi_step,
    natural_period,
    run,
    time_constant,
)

neuron = presets.neuron_preset("fast-mode")
syn = presets.synapse_preset("fast-dpi")
DT = 1e-8

# --- 1. tonic-rate calibration ---------------------------------------------
print("tonic firing under constant drive:")
for i_const in (1.2e-6, 1.5e-6, 2e-6, 3e-6):
    period = natural_period(neuron, i_const, DT)
    print(f"  {i_const * 1e6:4.1f} uA -> {period * 1e9:6.0f} ns ({1e-6 / period:.2f} MHz)")

# --- 2. DPI response --------------------------------------------------------
tau = time_constant(syn)
print(f"\nDPI time constant: {tau * 1e9:.1f} ns "
      f"(C_s {syn.c_s * 1e12:.2f} pF, I_tau {syn.i_tau * 1e9:.0f} nA, kappa {syn.kappa})")
state = SynapseState(i_out=syn.i_floor)
dt_sub = tau / 20
peak = 0.0
for k in range(int(round(3 * syn.pulse_width / dt_sub))):
    drive = syn.i_pulse if k * dt_sub < syn.pulse_width else 0.0
    state = dpi_step(state, syn, drive, dt_sub)
    peak = max(peak, state.i_out)
print(f"single {syn.pulse_width * 1e9:.0f} ns pulse of {syn.i_pulse * 1e6:.1f} uA: "
      f"output peaks at {peak * 1e6:.2f} uA (steady state would be "
      f"{(syn.i_pulse - syn.i_tau) * 1e6:.2f} uA)")

# --- 3. per-spike membrane kick ---------------------------------------------
observer = replace(neuron, v_th=2.2, v_gate_th=2.1)
presets.NEURON_PRESETS["_observer"] = observer
try:
    print("\npostsynaptic membrane lift per presynaptic spike:")
    for mult in (1, 2, 3):
        net = NetworkSpec(
            islands=(IslandSpec(2, ()), IslandSpec(2, (), neuron_preset="_observer")),
            noise=(
                NoiseSpec("white", 2e-10, (10.0, 5e6), seed=0, stream_id=0),
                NoiseSpec("white", 1e-30, (10.0, 5e6), seed=0, stream_id=1),
            ),
            links=(InterIslandLink(0, 1, 0, (0,), multiplicity=mult),),
        )
        rec = run(net, SimConfig(duration=4e-5, dt=DT, master_seed=2,
                                 record_traces=[2], trace_decimation=1))
        src = rec.times[0]
        t, by_id = rec.traces
        t_stop = min(src[1] if len(src) > 1 else np.inf, src[0] + 2e-6)
        kick = by_id[2][np.searchsorted(t, t_stop) - 1]
        marker = "fires a resting target" if kick > neuron.v_th else "sub-threshold"
        print(f"  multiplicity {mult}: dV = {kick:.3f} V ({marker}; "
              f"threshold {neuron.v_th} V from rest, {neuron.v_th + 0.1:.1f} V from the post-spike floor)")
finally:
    del presets.NEURON_PRESETS["_observer"]

# --- 4. relay latency --------------------------------------------------------
net = NetworkSpec(
    islands=(IslandSpec(2, ()), IslandSpec(2, ())),
    noise=(
        NoiseSpec("white", 2e-10, (10.0, 5e6), seed=0, stream_id=0),
        NoiseSpec("white", 1e-30, (10.0, 5e6), seed=0, stream_id=1),
    ),
    links=(InterIslandLink(0, 1, 0, (0,), multiplicity=3),),
)
rec = run(net, SimConfig(duration=4e-5, dt=DT, master_seed=2))
lag = rec.times[2][0] - rec.times[0][0]
print(f"\ntripled-synapse relay latency onto a quiet neuron: {lag * 1e9:.0f} ns")
