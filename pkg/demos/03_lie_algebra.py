"""Positive part of the Kac-Moody algebra, built by ad f descent."""

from kmlab.gcm import gcm_from_rank2
from kmlab.liealg import ad_f, bracket, build_positive_algebra, lemma54_witness, real_root_vector, s_star


def ints(x):
    return [int(c) for c in x.coords()]


a = gcm_from_rank2(3, 3)
L = build_positive_algebra(a, 8, "ZZ")
print({w: d for w, d in L.dimension_table().items() if d and sum(w) <= 5})

e1, e2 = L.generator(1), L.generator(2)
x = bracket(L, e1, e2)
print("[e1,e2] =", ints(x), "  ad f_1 [e1,e2] =", ints(ad_f(L, 1, x)))

# s_2^* carries e_1 to a root vector of weight s_2(alpha_1)
print(s_star(L, 2, e1).weight(), ints(real_root_vector(L, (1, 3))))

for m, n, p in [(3, 3, 5), (3, 3, 3), (6, 5, 3)]:
    rep = lemma54_witness(m, n, p)
    print((m, n, p), rep["branch"], "delta", rep["delta"], "coeff", rep["coefficient"], rep["ok"])
