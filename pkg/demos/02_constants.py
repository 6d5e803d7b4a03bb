"""The constants behind every predicted main term.

The Landau-Ramanujan constant A is a slowly convergent Euler product over
primes 3 mod 4; successive truncations show the recorded tail bounds are
honest.  The log-derivative constants feeding A2 are fixed mathematical
constants computed once by accelerated series.
"""

from twosquares import landau_ramanujan_A, special_constants

print("Landau-Ramanujan A by truncation point:")
for bound in (10**2, 10**3, 10**4, 10**5, 10**6):
    est = landau_ramanujan_A(bound)
    print(
        f"  p <= {bound:>9,}: A = {est.value:.9f}  (tail bound {est.truncation_bound:.1e}, {est.bound_kind})"
    )

print("\nSpecial constants:")
for name, est in special_constants().items():
    print(f"  {name:>22s} = {est.value:+.12f}   ({est.parameters})")

consts = special_constants()
import math

assembled = (
    2 * consts["gamma_euler"].value
    - 1
    + 2 * consts["L_prime_ratio_at_1"].value
    - 2 * consts["zeta_prime_ratio_at_2"].value
    + 4 / 3 * math.log(2)
)
print(f"\nA2 assembly identity: |A2 - reassembled| = {abs(consts['A2'].value - assembled):.2e}")
