#!/usr/bin/env python3
"""Regenerates the glyphpunks fixture deterministically.

The outputs are committed; rerun this only when the fixture itself needs to
change, then update the golden numbers in test_pipeline.cpp.
"""
import math
import os

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "glyphpunks")

MASK = (1 << 64) - 1


class SplitMix:
    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def unit(self):
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def open_unit(self):
        return ((self.next_u64() >> 11) + 1.0) * (2.0 ** -53)

    def gauss(self):
        u1 = self.open_unit()
        u2 = self.unit()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def main():
    rng = SplitMix(20210315)
    os.makedirs(OUT, exist_ok=True)

    start_date = 1615766400  # 2021-03-15
    t0 = start_date + 5 * 86400 + 21600  # trading picks up a few days post-mint
    n_tokens = 42
    n_trades = 1000

    # heavy-tailed token popularity
    weights = [(k + 1.0) ** -0.8 for k in range(n_tokens)]
    wsum = sum(weights)
    cum = []
    acc = 0.0
    for w in weights:
        acc += w / wsum
        cum.append(acc)

    def pick_token():
        u = rng.unit()
        for k, c in enumerate(cum):
            if u <= c:
                return k
        return n_tokens - 1

    # market-wide level and the SOL/USD rate both wander
    level = 0.0
    rate = 150.0
    tok_offset = [0.6 * rng.gauss() for _ in range(n_tokens)]

    trades = []
    t = float(t0)
    for _ in range(n_trades):
        # bursty arrivals: mostly quiet, occasionally rapid-fire
        gap = -math.log(rng.open_unit()) * (900.0 if rng.unit() < 0.25 else 6400.0)
        t += gap
        level += 0.03 * rng.gauss()
        rate *= math.exp(0.004 * rng.gauss())
        k = pick_token()
        price_sol = math.exp(0.7 + level + tok_offset[k] + 0.25 * rng.gauss())
        trades.append((int(t), "glyph%03d" % k, round(price_sol, 6),
                       round(price_sol * rate, 4)))

    with open(os.path.join(OUT, "trades.csv"), "w", newline="") as f:
        f.write("timestamp,token_id,price_sol,price_usd\n")
        for ts, tok, ps, pu in trades:
            f.write("%d,%s,%.6f,%.4f\n" % (ts, tok, ps, pu))

    # floor quotes on their own clock, same span
    floor = []
    t = float(t0) - 3600.0
    fl = 1.1
    frate = 150.0
    while t < trades[-1][0] and len(floor) < 820:
        t += -math.log(rng.open_unit()) * 6300.0
        fl *= math.exp(0.02 * rng.gauss())
        frate *= math.exp(0.004 * rng.gauss())
        floor.append((int(t), round(fl, 6), round(fl * frate, 4)))

    with open(os.path.join(OUT, "floor.csv"), "w", newline="") as f:
        f.write("timestamp,floor_sol,floor_usd\n")
        for ts, fs, fu in floor:
            f.write("%d,%.6f,%.4f\n" % (ts, fs, fu))

    with open(os.path.join(OUT, "manifest.json"), "w", newline="") as f:
        f.write(
            '{\n'
            '  "name": "glyphpunks",\n'
            '  "start_date": "2021-03-15",\n'
            '  "token_count": 42,\n'
            '  "trades_csv": "trades.csv",\n'
            '  "floor_csv": "floor.csv"\n'
            '}\n'
        )

    cfg = os.path.join(os.path.dirname(OUT), "config.json")
    with open(cfg, "w", newline="") as f:
        f.write(
            '{\n'
            '  "collections": [{"manifest": "glyphpunks/manifest.json"}],\n'
            '  "dt_seconds": 3600,\n'
            '  "trim_days": 7,\n'
            '  "threads": 2,\n'
            '  "tail": {"quantile": 0.9, "min_points": 10}\n'
            '}\n'
        )

    span_days = (trades[-1][0] - trades[0][0]) / 86400.0
    print("trades: %d spanning %.1f days, %d floor quotes" %
          (len(trades), span_days, len(floor)))


if __name__ == "__main__":
    main()
