#!/usr/bin/env python3
"""Fit behavioral circuit parameters to the reference model curves.

The drain-efficiency model depends on the cell only through three ratios:
    zeta(d, fp) = d * a / (d + (1 - d) * b + fp * c)
with d = 2 alpha / 3, a = P_out / P_DC, b = P_leak / P_DC, c = V_DD^2 C_sw / P_DC.
Fixing V_DD, I_DD and R_L maps (a, b, c) back to v_pk, R_sw and C_sw.

Writes reference/circuit_fit.json. Requires numpy and scipy.
"""

import csv
import json
import math
import pathlib

import numpy as np
from scipy.optimize import least_squares

ROOT = pathlib.Path(__file__).resolve().parent.parent
SERIES = {"model_200MHz": 200e6, "model_2GHz": 2e9}
SUPPLY_VOLTAGE = 1.2
BIAS_CURRENT = 10e-3
LOAD_RESISTANCE = 50.0


def load_points():
    pts = []
    with open(ROOT / "reference" / "circuit_efficiency.csv", newline="") as f:
        for row in csv.DictReader(f):
            if row["series_label"] in SERIES:
                alpha = 10.0 ** (float(row["ten_log_alpha"]) / 10.0)
                pts.append((2.0 * alpha / 3.0, SERIES[row["series_label"]],
                            float(row["efficiency_percent"]) / 100.0))
    return np.array(pts)


def model(theta, duty, fp):
    a, b, c_ns = theta
    return duty * a / (duty + (1.0 - duty) * b + fp * c_ns * 1e-9)


def main():
    pts = load_points()
    duty, fp, zeta = pts[:, 0], pts[:, 1], pts[:, 2]
    fit = least_squares(lambda th: model(th, duty, fp) - zeta, x0=[0.3, 0.01, 0.05],
                        bounds=([0, 0, 0], [1, 1, 10]), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    a, b, c_ns = fit.x
    p_dc = SUPPLY_VOLTAGE * BIAS_CURRENT
    vdd2 = SUPPLY_VOLTAGE ** 2
    out = {
        "supply_voltage": SUPPLY_VOLTAGE,
        "bias_current": BIAS_CURRENT,
        "load_resistance": LOAD_RESISTANCE,
        "peak_voltage": math.sqrt(2.0 * LOAD_RESISTANCE * a * p_dc),
        "switch_resistance": vdd2 / (b * p_dc),
        "switch_capacitance": c_ns * 1e-9 * p_dc / vdd2,
        "fit_series": list(SERIES),
        "max_abs_residual_pp": float(np.max(np.abs(fit.fun)) * 100.0),
    }
    path = ROOT / "reference" / "circuit_fit.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
