"""Anatomy of one detection: from array samples to a decision.

Builds the default four-receiver scene, points a joint beam at the target,
synthesizes one block of raw array outputs under each hypothesis, and walks
the receive chain: combine, compensate, eigendecompose, decide. The printed
eigenvalues show what the detector actually looks at; under H1 one eigenvalue
of the full stack escapes the noise bulk, while the direct-only block looks
the same under both hypotheses.
"""

import numpy as np

from passive_isac.asymptotics import asymptotic_threshold
from passive_isac.beamform import optimize_max_pd
from passive_isac.detector import decide, glrt_statistic
from passive_isac.scenario import ScenarioConfig, build_channels, with_beamformer
from passive_isac.waveform import frontend_process, gen_symbols_gaussian, synth_received


def main():
    scen = ScenarioConfig(seed=1)
    ch = build_channels(scen)
    design = optimize_max_pd(ch, 10.0 ** 1.2, scen.p_t, n_candidates=100, rng=0)
    ch = with_beamformer(ch, design.w)
    print(f"scene: {scen.m} receivers, {scen.c} users, {scen.n_t} transmit antennas")
    print(f"design: power {design.power:.4f} W, worst SINR "
          f"{design.sinrs.min():.2f} (floor {10.0 ** 1.2:.2f}), "
          f"kappa {design.kappa_achieved:.2f}")

    rho = asymptotic_threshold(1e-2, 2 * scen.m * scen.c)
    print(f"threshold for false-alarm 1e-2: {rho:.3f} (on the raw statistic)")

    rng = np.random.default_rng(7)
    for hypothesis in ("h0", "h1"):
        block = gen_symbols_gaussian(rng, scen.c, scen.block_length)
        raw = synth_received(ch, design.w, block, hypothesis, rng)
        obs = frontend_process(raw, ch)
        res = glrt_statistic(obs, scen.sigma_r2, scen.c)
        top = ", ".join(f"{v:.3f}" for v in res.psi[:4])
        print(f"\n{hypothesis}: top stack eigenvalues [{top}, ...]")
        print(f"    direct-block eigenvalues "
              f"[{', '.join(f'{v:.3f}' for v in res.phi)}]")
        print(f"    kept components: {res.epsilon0} of the stack, "
              f"{res.zeta0} of the direct block")
        print(f"    statistic {res.statistic:.2f} -> "
              f"{'target declared' if decide(res.statistic, rho) else 'no target'}")


if __name__ == "__main__":
    main()
