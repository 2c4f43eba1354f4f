"""Validate the white and pink noise sources against their spectral contract.

Averages Welch periodograms over many seeds, checks flatness of the white
source, the -10 dB/decade power slope of the pink source, and the
determinism of the (seed, stream) mapping.  Writes PSD CSVs into
out/02_noise_spectra/.
"""

from pathlib import Path

import numpy as np

from spikeislands import NoiseSpec, generate, psd_estimate
from spikeislands.io import write_psd_csv

OUT = Path("out/02_noise_spectra")
OUT.mkdir(parents=True, exist_ok=True)

BAND = (100.0, 5e5)
DT = 1e-6
DENSITY = 2e-10  # 200 pA/rtHz
N = 1 << 16
SEEDS = 50

acc = {}
for kind in ("white", "pink"):
    total = None
    for seed in range(SEEDS):
        x = generate(NoiseSpec(kind, DENSITY, BAND, seed=seed), N, DT)
        f, p = psd_estimate(x, DT, 8)
        total = p if total is None else total + p
    acc[kind] = total / SEEDS
    write_psd_csv(f, acc[kind], OUT / f"psd_{kind}.csv")

sel = (f >= BAND[0] * 10) & (f <= BAND[1] / 10)
flat_dev = np.abs(10 * np.log10(acc["white"][sel] / DENSITY**2)).max()
slope = np.polyfit(np.log10(f[sel]), 10 * np.log10(acc["pink"][sel]), 1)[0]
print(f"white: flat within {flat_dev:.2f} dB of density^2 over the decade-trimmed band")
print(f"pink : fitted slope {slope:.2f} dB/decade (target -10)")

pink_power = np.trapezoid(acc["pink"][(f >= BAND[0]) & (f <= BAND[1])],
                          f[(f >= BAND[0]) & (f <= BAND[1])])
print(f"pink : in-band rms {np.sqrt(pink_power) * 1e12:.1f} pA "
      f"(target {DENSITY * np.sqrt(BAND[1] - BAND[0]) * 1e12:.1f} pA)")

a = generate(NoiseSpec("pink", DENSITY, BAND, seed=7, stream_id=2), 4096, DT)
b = generate(NoiseSpec("pink", DENSITY, BAND, seed=7, stream_id=2), 4096, DT)
print(f"determinism: same (seed, stream) bit-identical -> {np.array_equal(a, b)}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    ax.loglog(f[1:], acc["white"][1:], lw=0.8, label="white")
    ax.loglog(f[1:], acc["pink"][1:], lw=0.8, label="pink")
    ax.axhline(DENSITY**2, color="k", ls=":", lw=0.8)
    ax.set_xlabel("f [Hz]")
    ax.set_ylabel("PSD [A$^2$/Hz]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "spectra.png", dpi=130)
    print(f"wrote {OUT}/spectra.png")
except ImportError:
    print("matplotlib not installed; skipped figures")
