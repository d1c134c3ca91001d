import numpy as np

#: Minimum adjacent relative gap enforced when generating random rate sets;
#: below this the signed weights blow up and cancellation dominates.
MIN_RELATIVE_GAP = 0.05


def random_rates(rng: np.random.Generator, n: int, low=1e-3, high=1e3):
    """Log-uniform distinct rates with an enforced adjacent relative gap."""
    while True:
        rates = np.sort(np.exp(rng.uniform(np.log(low), np.log(high), n)))
        gaps = (rates[1:] - rates[:-1]) / rates[1:]
        if np.all(gaps >= MIN_RELATIVE_GAP):
            return [float(r) for r in rates]


def random_scales(rng: np.random.Generator, n: int, spread=1e3):
    """Distinct positive scales with spread up to ``spread``."""
    return [1.0 / r for r in random_rates(rng, n, low=1.0, high=spread)]
