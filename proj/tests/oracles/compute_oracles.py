"""Reference values frozen into the C++ unit tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
import numpy as np
from scipy import stats


def conservation_score(h):
    h = np.asarray(h, dtype=float)
    return h.std(ddof=0) / (1.0 + abs(h.mean()))


def statmech(steps, ref, temperature):
    p = np.diff(steps, axis=0)
    v = np.linalg.norm(p, axis=1)
    w = v / v.sum()
    w = w[w > 0]
    entropy = -(w * np.log(w)).sum()
    kinetic = 0.5 * (p ** 2).sum(axis=1)
    q = steps[:-1]
    cos = q @ ref / (np.linalg.norm(q, axis=1) * np.linalg.norm(ref))
    potential = -np.clip(cos, -1.0, 1.0)
    return entropy, (kinetic + np.abs(potential)).mean() - temperature * entropy


def main():
    for h in ([1, 1, 1, 3], [-9.5, -9.4, -9.6]):
        print(f"conservation_score({h}) = {conservation_score(h):.17g}")

    r = stats.ttest_ind([1, 2, 3, 4, 5], [2, 3, 4, 5, 6], equal_var=False)
    print(f"welch t={r.statistic:.17g} p={r.pvalue:.17g}")

    rng = np.random.default_rng(7)
    steps = rng.normal(size=(5, 4))
    ref = rng.normal(size=4)
    print("seed-7 chain steps:")
    for row in steps:
        print("  {" + ", ".join(f"{x:.17g}" for x in row) + "}")
    print("  ref {" + ", ".join(f"{x:.17g}" for x in ref) + "}")
    entropy, free = statmech(steps, ref, 1.0)
    print(f"  entropy={entropy:.17g} free_energy(tau=1)={free:.17g}")

    print(f"logistic bias prior 0.3: {np.log(0.3 / 0.7):.17g}")


if __name__ == "__main__":
    main()
