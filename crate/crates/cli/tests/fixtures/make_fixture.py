"""Builds the analyze fixture pair and its expected index table.

The expected values come from a direct high-precision evaluation
(mpmath, 50 digits) of the metric definitions, independent of the Rust
implementation. Run from this directory:

    python3 make_fixture.py
"""

import json
import math
import random

from mpmath import mp, mpf, sqrt

mp.dps = 50

N = 101
EPS = mpf("1e-8")
CENTRAL = ["pelvis_tilt", "pelvis_list", "pelvis_rotation"]
BILATERAL = ["hip_flexion", "hip_adduction", "hip_rotation", "knee", "ankle", "subtalar"]
CHANNELS = CENTRAL + [f"{j}_{s}" for j in BILATERAL for s in ("l", "r")]
HUMAN_SPEEDS = [0.5, 0.6, 0.75, 1.0, 1.25, 1.5]
ROBOT_SPEEDS = [0.5, 0.75, 1.0, 1.25, 1.5, 1.75]


def waveform(rng, n, amp, harmonics=3, phase_shift=0.0, scale=1.0, offset=0.0):
    coeffs = [(rng.uniform(-1, 1) * amp / (h + 1), rng.uniform(0, 2 * math.pi)) for h in range(harmonics)]
    out = []
    for k in range(n):
        x = 2 * math.pi * (k / (n - 1) + phase_shift)
        v = offset + scale * sum(a * math.sin((h + 1) * x + p) for h, (a, p) in enumerate(coeffs))
        out.append(float(f"{v:.6f}"))
    return out


def build(entity, speeds, seed, perturb):
    rng = random.Random(seed)
    grids = {"pos_deg": [], "torque_nmkg": [], "power_wkg": []}
    for name in CHANNELS:
        rows = {q: [] for q in grids}
        for speed in speeds:
            for q, amp in (("pos_deg", 30.0), ("torque_nmkg", 1.2), ("power_wkg", 2.0)):
                # shared template per cell so human and robot are comparable
                t = random.Random(f"{name}|{speed}|{q}")
                if perturb:
                    shift = rng.uniform(-0.05, 0.05)
                    scale = rng.uniform(0.6, 1.4)
                    off = rng.uniform(-3, 3) if q == "pos_deg" else 0.0
                else:
                    shift, scale, off = 0.0, 1.0, 0.0
                rows[q].append(waveform(t, N, amp, phase_shift=shift, scale=scale, offset=off))
        for q in grids:
            grids[q].append(rows[q])
    durations = [round(1.6 - 0.4 * s + (0.05 if perturb else 0.0), 4) for s in speeds]
    return {
        "entity": entity,
        "channels": CHANNELS,
        "speeds_mps": speeds,
        "n_samples": N,
        **grids,
        "cycle_duration_s": durations,
        "provenance": {"source": "make_fixture.py"},
    }


def M(values):
    return [mpf(repr(v)) for v in values]


def pearson(x, y):
    mx = sum(x) / len(x)
    my = sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return None
    return sxy / sqrt(sxx * syy)


def work(power, T):
    dt = mpf(repr(T)) / (len(power) - 1)
    def trap(v):
        return sum((v[k] + v[k + 1]) / 2 * dt for k in range(len(v) - 1))
    return trap([max(p, 0) for p in power]), trap([min(p, 0) for p in power])


def si(lx, rx, hl, hr):
    num = 2 * (abs(max(lx) - max(rx)) + abs(min(lx) - min(rx)))
    den = abs(max(hl)) + abs(max(hr)) + abs(min(hl)) + abs(min(hr)) + EPS
    return num / den


def a_work(wl, wr, hl, hr):
    plus = 2 * abs(wl[0] - wr[0]) / (abs(hl[0]) + abs(hr[0]) + EPS)
    minus = 2 * abs(wl[1] - wr[1]) / (abs(hl[1]) + abs(hr[1]) + EPS)
    return (plus + minus) / 2


def d_work(wh, wr):
    return (abs(wh[0] - wr[0]) / (abs(wh[0]) + EPS) + abs(wh[1] - wr[1]) / (abs(wh[1]) + EPS)) / 2


def cell(doc, q, ch, speed):
    return M(doc[q][CHANNELS.index(ch)][doc["speeds_mps"].index(speed)])


def dur(doc, speed):
    return doc["cycle_duration_s"][doc["speeds_mps"].index(speed)]


def analyze(h, r):
    rows = []
    common = [s for s in h["speeds_mps"] if s in r["speeds_mps"]]
    for s in common:
        means = []
        for q in ("pos_deg", "torque_nmkg", "power_wkg"):
            vals = [pearson(cell(h, q, c, s), cell(r, q, c, s)) for c in CHANNELS]
            vals = [v for v in vals if v is not None]
            means.append(sum(vals) / len(vals))
        r_wav = mpf("0.5") * means[0] + mpf("0.3") * means[1] + mpf("0.2") * means[2]
        wh = {c: work(cell(h, "power_wkg", c, s), dur(h, s)) for c in CHANNELS}
        wr = {c: work(cell(r, "power_wkg", c, s), dur(r, s)) for c in CHANNELS}
        si_r, si_h, a_r, a_h = [], [], [], []
        for j in BILATERAL:
            hl, hr = cell(h, "pos_deg", j + "_l", s), cell(h, "pos_deg", j + "_r", s)
            rl, rr = cell(r, "pos_deg", j + "_l", s), cell(r, "pos_deg", j + "_r", s)
            si_r.append(si(rl, rr, hl, hr))
            si_h.append(si(hl, hr, hl, hr))
            a_r.append(a_work(wr[j + "_l"], wr[j + "_r"], wh[j + "_l"], wh[j + "_r"]))
            a_h.append(a_work(wh[j + "_l"], wh[j + "_r"], wh[j + "_l"], wh[j + "_r"]))
        mean = lambda v: sum(v) / len(v)
        d = mean([d_work(wh[c], wr[c]) for c in CHANNELS])
        S = mean(si_r) / 2 + mean(a_r) / 20
        H = ((1 - r_wav) + d / 10) / 2
        C = S / 2 + H / 2
        rows.append([s, mean(si_r), mean(si_h), mean(a_r), mean(a_h), S, r_wav, d, H, C])
    return rows


def main():
    human = build("human", HUMAN_SPEEDS, 1, perturb=False)
    robot = build("robot", ROBOT_SPEEDS, 2, perturb=True)
    for name, doc in (("human", human), ("robot", robot)):
        with open(f"{name}.gaitset.json", "w") as f:
            json.dump(doc, f, separators=(",", ":"))
            f.write("\n")
    header = "speed_mps,si_robot,si_human,a_work_robot,a_work_human,s_robot,r_wav,d_work,h,c"
    with open("expected_gdaf_table.csv", "w") as f:
        f.write(header + "\n")
        for row in analyze(human, robot):
            f.write(",".join([repr(row[0])] + [mp.nstr(v, 20) for v in row[1:]]) + "\n")


if __name__ == "__main__":
    main()
