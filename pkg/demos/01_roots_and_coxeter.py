"""Hyperbolic rank 2: classify, list roots, and watch the Coxeter element act."""

from kmlab.gcm import classify_type, parse_gcm
from kmlab.rootsys import classify_root, positive_roots_up_to_height, root_multiplicity
from kmlab.weyl import coxeter_element, coxeter_matrix_closed_form, check_power_reduced, inversion_set

a = parse_gcm("2,-3;-3,2")
print("type:", classify_type(a).value)

# roots up to height 6, with multiplicities
for r in positive_roots_up_to_height(a, 6):
    print(r, classify_root(a, r).tag.value, root_multiplicity(a, r))

w = coxeter_element(a)  # s_1 s_2
print("closed form:", coxeter_matrix_closed_form(a))
print("composed:   ", w.matrix)

# powers stay reduced: l(w^k) = 2k
print(check_power_reduced(a, 6).table)
print("inversions of w:", sorted(inversion_set(a, w).as_set()))
