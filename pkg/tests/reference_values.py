"""Reference values at n=9 for SDBV with cutoffs 4.5, 3.5 and 2.5 (rate 1/9)."""

CUTOFFS = ("4.5", "3.5", "2.5")

# drift per state, 5 decimals
DRIFT_N9 = {
    "4.5": ["0", "0.01235", "0.05898", "0.13489", "0.23572", "0.34683", "0.46822", "0.61454", "0.79012", "1"],
    "3.5": ["0", "0.01235", "0.05898", "0.13489", "0.24664", "0.34683", "0.46822", "0.61454", "0.79012", "1"],
    "2.5": ["0", "0.01235", "0.05898", "0.16442", "0.24664", "0.34683", "0.46822", "0.61454", "0.79012", "1"],
}

# expected hitting time of the optimum per start state, 4 decimals
HITTING_N9 = {
    "4.5": ["0", "30.1845", "41.2612", "47.1214", "50.7524", "53.3796", "55.3045", "56.7601", "57.8835",
            "58.7644"],
    "3.5": ["0", "30.1861", "41.2646", "47.1276", "50.7716", "53.3959", "55.3210", "56.7766", "57.9000",
            "58.7809"],
    "2.5": ["0", "30.0440", "40.9707", "46.3839", "50.1061", "52.7251", "54.6501", "56.1057", "57.2291",
            "58.1100"],
}

# uniform-start expected optimisation time, 4 decimals
TOTAL_N9 = {"4.5": "50.9855", "3.5": "50.9997", "2.5": "50.3553"}


def pad(value: str, digits: int) -> str:
    """Render a table entry such as ``1`` or ``0`` with a fixed number of decimals."""
    whole, _, frac = value.partition(".")
    return f"{whole}.{frac.ljust(digits, '0')}"
