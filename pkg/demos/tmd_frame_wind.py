"""Wind-excited frame with tuned mass dampers under competing damping laws.

A 20-story planar-pair frame carries one TMD on the x roof and two on the
y roof.  The true device law is a fractional power law; linear, cubic, and
hysteretic candidate laws are simulated side by side to show how different
their roof-acceleration signatures are under the same wind record.

Run:  python3 demos/tmd_frame_wind.py
"""

import numpy as np

from falsikit import (TmdFrameModel, TmdFrameSystem, band_limited_record,
                      integrate_rk4)


def main():
    frame = TmdFrameModel()
    wind = band_limited_record(60.0, 0.1, band=(0.05, 1.0), seed=5,
                               rms=200.0e3, label="wind")   # N, per-story shaping inside

    candidates = {
        "power_law_truth": dict(params=dict(power_coef=230.0, power_lin=5.0)),
        "linear": dict(params=dict(c1=40.0)),
        "cubic": dict(params=dict(c1=10.0, c3=800.0)),
        "boucwen": dict(params=dict(r_k=0.2, Q_y=8.0, k_pre=500.0)),
    }

    print(f"{'device law':18s} {'rms roof acc x':>16s} {'rms roof acc y':>16s} "
          f"{'peak x':>10s}")
    for law, cfg in candidates.items():
        system = TmdFrameSystem(frame, law, law, params_x=cfg["params"],
                                params_y=cfg["params"])
        h = integrate_rk4(system, wind, dt_int=0.01)[0]
        acc = h.reshape(-1, 2)
        rms = np.sqrt(np.mean(acc**2, axis=0))
        print(f"{law:18s} {rms[0]:14.4f} m/s^2 {rms[1]:14.4f} m/s^2 "
              f"{np.abs(acc[:, 0]).max():8.4f}")

    print("\nthe laws separate clearly in rms and peak response, which is what")
    print("makes the wrong ones falsifiable from roof acceleration data.")


if __name__ == "__main__":
    main()
