#!/usr/bin/env python3
"""Regenerate data/basket_fixture.csv.

Synthetic daily adjusted closes for nine large-cap tickers over the first
half of 2024 (NYSE trading calendar). Each series is an independent GBM
path with a hand-picked start price, drift and volatility. The increments
of each path are recentred so its realized mean log return equals the
nominal (mu - sigma^2/2) dt; a half-year window otherwise estimates drift
with a standard error near sigma / sqrt(0.5). A few rows are
deliberately damaged or missing so the loader's drop-then-intersect rules
are exercised by the end-to-end runs.
"""

import datetime as dt
import pathlib

import numpy as np

# ticker, start price, annual drift, annual volatility
ASSETS = [
    ("AAPL", 185.64, 0.04, 0.22),
    ("GOOG", 139.56, 0.06, 0.27),
    ("MSFT", 370.87, 0.05, 0.20),
    ("NVDA", 48.17, 0.10, 0.48),
    ("AMZN", 149.93, 0.05, 0.30),
    ("TSLA", 248.42, -0.05, 0.55),
    ("V", 260.35, 0.02, 0.17),
    ("JNJ", 156.96, -0.02, 0.15),
    ("XOM", 100.74, 0.03, 0.21),
]

HOLIDAYS = {
    dt.date(2024, 1, 1),
    dt.date(2024, 1, 15),
    dt.date(2024, 2, 19),
    dt.date(2024, 3, 29),
    dt.date(2024, 5, 27),
    dt.date(2024, 6, 19),
}

# (ticker, date) rows left out of the file entirely
MISSING = {("GOOG", dt.date(2024, 3, 12)), ("JNJ", dt.date(2024, 4, 23))}
# (ticker, date) rows whose price field is unusable
DAMAGED = {("TSLA", dt.date(2024, 5, 8)): "null", ("XOM", dt.date(2024, 2, 2)): "0"}


def trading_days():
    day = dt.date(2024, 1, 2)
    end = dt.date(2024, 6, 28)
    out = []
    while day <= end:
        if day.weekday() < 5 and day not in HOLIDAYS:
            out.append(day)
        day += dt.timedelta(days=1)
    return out


def main():
    rng = np.random.default_rng(20240630)
    days = trading_days()
    dt_year = 1.0 / 252.0
    rows = []
    for ticker, s0, mu, sigma in ASSETS:
        shocks = rng.standard_normal(len(days) - 1)
        shocks -= shocks.mean()
        steps = (mu - 0.5 * sigma**2) * dt_year + sigma * np.sqrt(dt_year) * shocks
        path = s0 * np.exp(np.concatenate([[0.0], np.cumsum(steps)]))
        for day, price in zip(days, path):
            if (ticker, day) in MISSING:
                continue
            field = DAMAGED.get((ticker, day), f"{price:.4f}")
            rows.append((day.isoformat(), ticker, field))
    rows.sort()
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "basket_fixture.csv"
    with open(out, "w", newline="\n") as fh:
        fh.write("date,ticker,adj_close\n")
        for day, ticker, field in rows:
            fh.write(f"{day},{ticker},{field}\n")


if __name__ == "__main__":
    main()
