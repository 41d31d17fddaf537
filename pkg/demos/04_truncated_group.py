"""The truncated unipotent group over F_3: products, factorization, contraction."""

from kmlab.dynamics import partition_psi
from kmlab.gcm import parse_gcm
from kmlab.prounip import (
    Subgroup,
    TruncatedEnvelope,
    contract_experiment,
    factor,
    inverse,
    multiply,
    single_factor,
)

a = parse_gcm("2,-3;-3,2")
E = TruncatedEnvelope(a, 3, 3)
print(len(E.basis), "basis vectors:", [(b.weight, b.index) for b in E.basis])

g = single_factor(E, 1, 1)  # exp(e_2)
h = single_factor(E, 0, 2)  # exp(2 e_1)
print("e2 * e1 ->", multiply(E, g, h).to_json())
print("inverse ok:", multiply(E, g, inverse(E, g)).is_identity())

part = partition_psi(a, 3, 20)
U, V = Subgroup(E, part.psi), Subgroup(E, part.complement)
print("|U_psi| =", U.order, " |U_complement| =", V.order)
g1, g2 = factor(E, multiply(E, g, h), U, V)
print(g1.to_json(), g2.to_json())

# conjugating by powers of s_1 s_2 pushes exp(e_1) past the truncation
E10 = TruncatedEnvelope(a, 10, 3)
rec = contract_experiment(E10, (1, 2), single_factor(E10, 0, 1), 3)
print(rec.to_csv())
