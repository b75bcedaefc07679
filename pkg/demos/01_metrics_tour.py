"""Walk through every S-box metric on three very different tables."""

import numpy as np

import sboxkit as sk

aes = sk.SBox(8, np.array(sk.AES_SBOX))
identity = sk.SBox(8, np.arange(256))
random_box = sk.random_permutation(np.random.default_rng(1), 256)

print(sk.metrics.CSV_HEADER)
for name, box in [("aes", aes), ("identity", identity), ("random", random_box)]:
    print(sk.full_report(box).csv_row(name))

# the summary row hides a lot of structure; look at the AES tables directly
ddt = sk.compute_ddt(aes)
lat = sk.compute_lat(aes)
print()
print("AES DDT corner:")
print(ddt.counts[:4, :4])
print("row 0 is the trivial difference; every other row max is", sk.differential_uniformity(ddt))
print("and that maximum shows up in", sk.du_max_count(ddt), "cells")

print()
print("AES LAT corner (raw Walsh sums, always even):")
print(lat.sums[:4, :4])
print("max bias over nontrivial masks:", sk.max_bias(lat))

nl = sk.nonlinearity(aes)
print("nonlinearity: min", nl.nl, "max", nl.component_max, "avg", nl.component_avg)

# avalanche-flavoured distances: 0 is perfect, identity is as bad as it gets
for name, box in [("aes", aes), ("identity", identity)]:
    sac = sk.dsac(box)
    bic = sk.dbic(box)
    print(f"{name}: DSAC max {sac.max_norm} mean {sac.mean_norm}  DBIC max {bic.max_norm}")

# degree and algebraic immunity cost more, so they are opt-in
rep = sk.full_report(aes, with_degree=True, with_ai=True)
print("AES algebraic degree", rep.degree, "and immunity", rep.ai, "over", rep.ai_scope)

cs = sk.cycle_decomposition(aes)
print("AES cycle lengths", cs.lengths, "fixed points", cs.fixed_points)
