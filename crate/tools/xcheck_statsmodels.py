"""Reference values for the committed fixtures from statsmodels.

    python3 tools/xcheck_statsmodels.py

Prints full-sample Granger F-tests (ssr_ftest) in both directions at lags 1-4
and constant-only ADF results with AIC lag choice.
"""
import warnings

import numpy as np
import pandas as pd
from statsmodels.tsa.stattools import adfuller, grangercausalitytests

warnings.filterwarnings("ignore")
BASE = "crates/sentcause/tests/fixtures"

for name in ["moderate", "causal"]:
    y = pd.read_csv(f"{BASE}/{name}/close.csv").close.values
    x = pd.read_csv(f"{BASE}/{name}/sentiment.csv").score.values
    print(f"== {name} (n={len(y)})")
    for direction, (a, b) in {"XtoY": (y, x), "YtoX": (x, y)}.items():
        res = grangercausalitytests(np.column_stack([a, b]), maxlag=4, verbose=False)
        for lag in range(1, 5):
            f, p, df_den, df_num = res[lag][0]["ssr_ftest"]
            print(f"{direction} lag {lag}: F={f!r} p={p!r} df=({df_num}, {int(df_den)})")
    for label, v in [("close", y), ("score", x), ("cumsum(close)", np.cumsum(y))]:
        stat, _, lags, nobs, _, _ = adfuller(v, regression="c", autolag="AIC")
        print(f"ADF {label}: stat={stat!r} lags={lags} nobs={nobs}")
