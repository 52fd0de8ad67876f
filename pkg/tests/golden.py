"""Element values quoted from the worked examples, kept in factored form."""

from qtetra.qpoly import ONE, LaurentPoly


def _p(*terms):
    # _p((e, c), ...) -> sum c q^e
    return LaurentPoly(dict(terms))


def _om(e):
    return ONE - LaurentPoly.monomial(e)


def _q(e, c=1):
    return LaurentPoly.monomial(e, c)


R_314 = {
    (0, 4, 1): _q(2, -1) * _om(4) * _om(6) * _om(8),
    (1, 3, 2): _om(6) * _om(8) * _p((0, 1), (4, -1), (6, -1), (8, -1), (10, -1)),
    (2, 2, 3): _q(2) * _p((0, 1), (2, 1)) * _p((0, 1), (4, 1)) * _om(6) * _p((0, 1), (6, -1), (10, -1)),
    (3, 1, 4): _q(6) * _p((0, 1), (2, 1), (4, 1), (8, -1), (10, -1), (12, -1), (14, -1)),
    (4, 0, 5): _q(12),
}

K_2110 = {
    (1, 3, 0, 0): _q(8) * _om(8),
    (2, 1, 1, 0): _q(4, -1) * _p((0, 1), (8, -1), (14, 1)),
    (2, 2, 0, 1): _q(6, -1) * _p((0, 1), (2, 1)) * _p((0, 1), (2, -1), (4, 1), (6, -1), (10, -1)),
    (3, 0, 1, 1): _p((0, 1), (8, -1), (14, 1)),
    (3, 1, 0, 2): _q(10, -1) * _p((0, 1), (1, -1), (2, 1)) * _p((0, 1), (1, 1), (2, 1)),
    (4, 0, 0, 3): _q(4),
}
