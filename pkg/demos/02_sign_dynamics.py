"""Sign traces and the split of the positive roots under a Coxeter element."""

from kmlab.dynamics import check_monotone, height_schedule, partition_psi, sign_orbit
from kmlab.gcm import parse_gcm
from kmlab.weyl import coxeter_element

aff = parse_gcm("2,-2;-2,2")
tr = sign_orbit(aff, coxeter_element(aff), (1, 0), 3)
print("affine alpha_1:", tr.sequence(), "monotone:", bool(check_monotone(tr)))

a = parse_gcm("2,-3;-3,2")
w = coxeter_element(a)
print(height_schedule(a, w, (1, 0), 4).heights)  # 1, 11, 76, 521, ...

part = partition_psi(a, 10, 60)
print("psi:", len(part.psi), "complement:", sorted(part.complement))
print("closed:", part.closedness)
for r in sorted(part.complement):
    print(r, part.certificates[r])
