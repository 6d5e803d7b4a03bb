"""The second-moment certificate and the witness pipeline.

The certificate's left-hand side is computed two independent ways: a
direct scan of the window, and an assembly from the S-sums -- the two
agree to machine precision because the expansion is an algebraic
identity.  Witness search then finds actual n whose translates hit every
bin (verified by exact factorisation certificates), and the pigeonhole
extraction turns per-M witness rows into one nested sequence.
"""

from twosquares import (
    AdmissibleTuple,
    BinPartition,
    SieveParams,
    build_factor_table,
    jakobson_tuple,
    lambda_from_F,
    pigeonhole_extract,
    second_moment_lhs,
    witness_search,
)
from twosquares.bins import default_mu_t, feasibility_condition, theorem_constants, verify_witness

tc = theorem_constants(1 / 40, 1 / 40)
print(f"certificate constants at theta1 = theta2 = 1/40:")
print(f"  Delta = {tc['Delta']:.4f}, c = {tc['c']:.4f}, least first-bin size = {tc['k1_min']}")
sizes = (max(tc["k1_min"], 129), 2**14 + 1, 2**21 + 1)
fc = feasibility_condition(sizes, 1 / 40, 1 / 40)
print(f"  feasibility for bins {sizes}: lhs {fc['lhs']:.3f} < rhs {fc['rhs']:.3f}: {fc['feasible']}")

params = SieveParams(N=10**4, theta1=0.12, theta2=1.0, D0=10, strict=False)
tup = AdmissibleTuple((0, 4, 16))
part = BinPartition(sizes=(1, 2), mu=(1.5, 2.5), t=(1.0, 2.0))
table = lambda_from_F(params, part.spec())
ftab = build_factor_table(2 * 10**4 + 32)
res = second_moment_lhs(params, tup, part, table, ftab)
print("\nsecond-moment LHS, two evaluators:")
print(f"  direct   {res.lhs_direct:.6f}")
print(f"  assembled {res.lhs_assembled:.6f}")
print(f"  relative difference {res.rel_difference:.2e}; rho<0 encountered: {res.rho_negative_count}")

records = witness_search(params, tup, BinPartition(sizes=(1, 2)), 2 * 10**4, ftab)
print(f"\nwitnesses for bins {{0}},{{4,16}} in [10^4, 2*10^4): {len(records)}")
w = records[0]
print(f"  first: n = {w.n}, accepted shifts {w.accepted}, verified: {verify_witness(w, ftab)}")
for h, pairs, (x, y) in w.certificates:
    print(f"    n+{h} = {w.n + h} = {x}^2 + {y}^2, factorisation {pairs}")

rows = [records[0].accepted[:1], records[0].accepted, records[1].accepted]
ext = pigeonhole_extract([tuple(r) for r in rows])
print(f"\npigeonhole over rows {rows}: a = {list(ext.a)}, depth {ext.depth}")

jt = jakobson_tuple(2)
print(f"\nnegative-shift tuple {jt.h}: witnesses in the same window:")
recs = witness_search(params, jt, BinPartition(sizes=(1, 1)), 2 * 10**4, ftab)
print(f"  {len(recs)} found; first n = {recs[0].n} with shifts {recs[0].accepted}")
