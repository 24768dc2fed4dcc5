"""
Checking structural conditions by sampling
==========================================

The convergence theory needs f(x, x) = 0, pseudomonotonicity, convexity in the
second argument, a Lipschitz-type bound and, for the diminishing-step methods,
strong pseudomonotonicity. None of these can be proved numerically, but cheap
sampling catches transcription errors and false constants.
"""

import dataclasses

from golden_ep import BUILTINS, check_conditions

for name, build in BUILTINS.items():
    problem = build()
    print(f"-- {name}")
    for result in check_conditions(problem, n_samples=1000, seed=42):
        print("  ", result)

# Claiming a modulus that is too large is detected with a witness pair.
p = BUILTINS["example62"]()
bad = dataclasses.replace(p, bifunction=dataclasses.replace(p.bifunction, strong_modulus=5.0))
(a9,) = [r for r in check_conditions(bad, n_samples=300) if r.name.startswith("A9")]
print("\nfalse modulus:", a9)
