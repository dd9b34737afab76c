#!/usr/bin/env python3
"""Regenerates data/prices_30.csv, the bundled 30-column closing-price fixture.

Daily percentage returns follow a three-factor model plus idiosyncratic
noise, so the returns matrix has the scale and rough spectral shape of a
large-cap equity index without shipping any market data.
"""
import argparse

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/prices_30.csv")
    parser.add_argument("--days", type=int, default=2031)
    parser.add_argument("--seed", type=int, default=20190131)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    n_assets, n_factors = 30, 3
    factor_sd = np.array([0.9, 0.5, 0.3])
    loadings = rng.uniform(0.4, 1.2, size=(n_assets, n_factors)) * np.array([1.0, 0.8, 0.6])
    loadings[:, 1:] *= rng.choice([-1.0, 1.0], size=(n_assets, n_factors - 1))
    idio_sd = rng.uniform(0.6, 1.4, size=n_assets)

    factors = rng.standard_normal((args.days - 1, n_factors)) * factor_sd
    returns = factors @ loadings.T + rng.standard_normal((args.days - 1, n_assets)) * idio_sd
    returns += 0.03  # small positive drift, in percent per day

    prices = np.empty((args.days, n_assets))
    prices[0] = rng.uniform(30.0, 300.0, size=n_assets)
    for i in range(1, args.days):
        prices[i] = prices[i - 1] * (1.0 + returns[i - 1] / 100.0)

    names = [f"S{j + 1:02d}" for j in range(n_assets)]
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(",".join(names) + "\n")
        for row in prices:
            f.write(",".join(f"{v:.4f}" for v in row) + "\n")


if __name__ == "__main__":
    main()
