import pytest

from kmlab.errors import PreconditionError
from kmlab.fields import GF, factor_prime_power, least_primitive_polynomial


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 25, 27])
def test_field_axioms(q):
    F = GF(q)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
    # distributivity on a sample
    for a in els[:5]:
        for b in els[:5]:
            for c in els[:5]:
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    g = F.generator()
    assert len({F.pow(g, k) for k in range(q - 1)}) == q - 1


def test_moduli_and_display():
    assert least_primitive_polynomial(2, 2) == (1, 1, 1)
    assert least_primitive_polynomial(3, 2) == (2, 1, 1)
    F = GF(9)
    x = F.parse("x")
    assert F.to_str(x) == "x"
    assert F.parse(F.to_str(F.mul(x, x))) == F.mul(x, x)
    assert GF(5).to_str(3) == "3"


def test_prime_power_factoring():
    assert factor_prime_power(27) == (3, 3)
    with pytest.raises(PreconditionError):
        factor_prime_power(12)
