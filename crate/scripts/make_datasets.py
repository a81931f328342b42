#!/usr/bin/env python3
"""Regenerate the bundled stand-in datasets under crates/core/data/.

The files follow the MOOT column-naming convention and the published shapes
of coc1000 (1001 rows, 20 x / 5 y), nasa93dem (93 rows, 24 x / 3 y) and
auto93 (205 rows). Values are drawn from COCOMO-II style process models and a
simple vehicle model, so the objectives depend on a subset of the inputs.
They are not the original MOOT files; any real MOOT CSV can be used instead.
"""
import math
import os

import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data")

SCALE = ["PREC", "FLEx", "ARCH", "TEAM", "PMAT"]
EFFORT = ["RELY", "DATA", "CPLx", "RUSE", "TIME", "STOR", "PVOL",
          "ACAP", "PCAP", "PCON", "APEx", "LTEx", "TOOL", "SITE", "SCED"]

# Per-level multipliers (levels 1..6); "up" drivers increase effort.
UP = {"RELY", "DATA", "CPLx", "RUSE", "TIME", "STOR", "PVOL"}
SF_WEIGHT = {"PREC": 1.24, "FLEx": 1.01, "ARCH": 1.41, "TEAM": 1.10, "PMAT": 1.56}


def em(name, level):
    step = 0.08 if name in {"CPLx", "TIME", "ACAP", "PCAP"} else 0.05
    delta = (level - 3) * step
    return 1.0 + delta if name in UP else 1.0 - delta


def cocomo(rng, rows, names, kloc):
    sf = sum(SF_WEIGHT[n] * (6 - rows[n]) for n in SCALE)
    e = 0.91 + 0.01 * sf
    mult = 1.0
    for n in names:
        if n in EFFORT:
            mult *= em(n, rows[n])
    effort = 2.94 * (kloc ** e) * mult * math.exp(rng.normal(0, 0.1))
    months = 3.67 * effort ** (0.28 + 0.2 * (e - 0.91)) * math.exp(rng.normal(0, 0.05))
    quality = (rows["RELY"] + rows["PMAT"] + rows["TOOL"] + rows["ACAP"]) / 4.0
    defects = kloc * 12.0 * math.exp(-0.35 * quality) * math.exp(rng.normal(0, 0.15))
    risk = 0
    if rows["SCED"] <= 2 and rows["CPLx"] >= 4:
        risk += 2
    if rows["TIME"] >= 5 and rows["STOR"] >= 5:
        risk += 1
    if rows["ACAP"] <= 2 and rows["PCAP"] <= 2:
        risk += 2
    if rows["PMAT"] <= 2 and rows["TEAM"] <= 2:
        risk += 1
    if rows["RELY"] >= 5 and rows["TOOL"] <= 2:
        risk += 1
    return effort, months, defects, risk


def fmt(v):
    if isinstance(v, str):
        return v
    if float(v).is_integer():
        return str(int(v))
    return f"{v:.2f}"


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(fmt(v) for v in r) + "\n")


def coc1000():
    rng = np.random.default_rng(1000)
    names = SCALE + EFFORT
    header = names + ["Effort-", "Months-", "Defects-", "Risk-", "Kloc+"]
    out = []
    for _ in range(1001):
        r = {n: int(rng.integers(1, 7)) for n in names}
        kloc = float(rng.integers(2, 500))
        effort, months, defects, risk = cocomo(rng, r, names, kloc)
        out.append([r[n] for n in names] + [round(effort, 2), round(months, 2),
                                             round(defects, 2), risk, kloc])
    write("coc1000.csv", header, out)


def nasa93dem():
    rng = np.random.default_rng(93)
    drivers = SCALE + EFFORT + ["DOCU", "PLEx"]
    header = ["idX", "mode"] + drivers + ["Kloc", "Effort-", "Defects-", "Months-"]
    out = []
    for i in range(93):
        r = {n: int(rng.integers(2, 6)) for n in drivers}
        mode = ["embedded", "organic", "semidetached"][int(rng.integers(0, 3))]
        kloc = round(float(np.exp(rng.normal(3.0, 1.1))), 1)
        effort, months, defects, _ = cocomo(rng, r, drivers, kloc)
        if mode == "embedded":
            effort *= 1.3
        row = [f"p{i + 1}", mode] + [r[n] for n in drivers] + [kloc, round(effort, 1),
                                                                 round(defects, 1), round(months, 1)]
        out.append(row)
    # A few unrecorded drivers, as in the historical records.
    for i, col in [(4, "TOOL"), (17, "SITE"), (40, "DOCU"), (71, "PLEx")]:
        out[i][header.index(col)] = "?"
    write("nasa93dem.csv", header, out)


def auto93():
    rng = np.random.default_rng(93_93)
    header = ["Clndrs", "Volume", "Hp", "Model", "origin", "Lbs-", "Acc+", "Mpg+"]
    out = []
    for _ in range(205):
        cyl = int(rng.choice([4, 4, 4, 6, 6, 8]))
        volume = int(cyl * rng.uniform(18, 45))
        hp = int(max(46, volume * rng.uniform(0.35, 0.6)))
        model = int(rng.integers(70, 83))
        origin = int(rng.choice([1, 1, 2, 3]))
        lbs = int(1600 + 5.5 * volume + rng.normal(0, 250))
        acc = round(max(8.0, 24 - hp / 12.0 + rng.normal(0, 1.2)), 1)
        mpg = round(max(9.0, 58 - 0.0075 * lbs + 0.6 * (model - 70) + rng.normal(0, 2.5)), 0)
        out.append([cyl, volume, hp, model, origin, lbs, acc, mpg])
    for i in (11, 58, 133):
        out[i][2] = "?"
    write("auto93.csv", header, out)


if __name__ == "__main__":
    coc1000()
    nasa93dem()
    auto93()
