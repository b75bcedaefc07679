"""Power maps x^e over GF(2^n): which families reach differential uniformity 2."""

import numpy as np

import sboxkit as sk

# the classic exponent families, tried on every width where their condition holds
for n in range(3, 9):
    ctx = sk.default_context(n)
    row = [f"n={n}"]
    for family, kwargs in [
        ("gold", {"i": 1}),
        ("kasami", {"i": 1}),
        ("welch", {}),
        ("niho", {}),
        ("inverse", {}),
    ]:
        try:
            s = sk.build_monomial_sbox(ctx, family, **kwargs)
        except sk.MonomialConditionError:
            row.append(f"{family}: -")
            continue
        du = sk.differential_uniformity(sk.compute_ddt(s))
        bij = "perm" if sk.is_bijective(s) else "2:1 "
        row.append(f"{family}: DU={du} {bij}")
    print("  ".join(row))

# odd n gives APN permutations for free; even n is the hard case
print()
print("gold x^3 on n=8 is APN but two-to-one, not a permutation:")
gold8 = sk.build_monomial_sbox(sk.default_context(8), "gold", i=1)
print("  DU =", sk.differential_uniformity(sk.compute_ddt(gold8)), "bijective =", sk.is_bijective(gold8))

# a famous exception at n=6: an APN *permutation* in even dimension
dillon = sk.SBox(6, np.array(sk.DILLON_PERMUTATION))
print("bundled 6-bit permutation: DU =", sk.differential_uniformity(sk.compute_ddt(dillon)),
      "bijective =", sk.is_bijective(dillon))
print("its nonlinearity:", sk.nonlinearity(dillon).nl,
      "(the covering-radius bound at n=6 is 28)")

# raw exponents let you probe anything, e.g. the n=8 field inverse map
inv = sk.build_monomial_sbox(sk.default_context(8), "raw", e=254)
print("x^254 on n=8 (the AES core): DU =", sk.differential_uniformity(sk.compute_ddt(inv)))
