import csv
import io

import numpy as np
import pytest

from conftest import M, power_map
from valdist.currents import (
    DECAY_COLUMNS,
    CurrentSample,
    ExactForm,
    TestFormBasis,
    exactness_decay,
    limit_points,
    normalized_pairings,
    positivity_check,
    sample_sequence,
)
from valdist.errors import BasePointOnDivisor, DegenerateNormalizer, InsufficientSamples, NormalizerNotDiverging
from valdist.nevanlinna import fmt_check
from valdist.projective import MetricizedDivisor, ProjPoint

BASIS = TestFormBasis.standard(1)
X0 = MetricizedDivisor.hyperplane(1, 0)
X1 = MetricizedDivisor.hyperplane(1, 1)


def test_normalizer_closed_form():
    for n in (3, 10, 25):
        s = normalized_pairings(power_map(n, scale=2), 0.75, BASIS, n=n)
        assert s.normalizer == pytest.approx(0.5 * np.log1p(1.5 ** (2 * n)), rel=1e-10)
        assert s.normalizer / (n * np.log(1.5)) == pytest.approx(1, abs=0.5 / n)


def test_self_pairing_is_exactly_one():
    for n in (2, 7, 19):
        assert normalized_pairings(power_map(n, scale=2, shift=1), 0.6, BASIS).pairings[0] == 1.0


def test_exact_form_pairing_within_jensen_bound():
    for n in (1, 4, 12):
        s = normalized_pairings(power_map(n, scale=2, shift=1), 0.75, BASIS)
        assert abs(s.pairings[-1]) <= 2 * 1.0 / s.normalizer + 1e-12


def test_degenerate_normalizer():
    with pytest.raises(DegenerateNormalizer):
        normalized_pairings(M("1|3"), 0.5, BASIS)
    with pytest.raises(DegenerateNormalizer):
        CurrentSample(1, 0.5, 0.0, (1.0,))


def test_limit_points_constant_samples():
    samples = [CurrentSample(n, 0.5, 2.0, (1.0, 0.25)) for n in range(10)]
    rep = limit_points(samples)
    assert rep.certified(0.5, 0) and rep.certified(0.5, 1)
    assert rep.clusters[0.5][1][0].diameter == 0.0


def test_limit_points_needs_samples():
    with pytest.raises(InsufficientSamples):
        limit_points([CurrentSample(n, 0.5, 2.0, (1.0,)) for n in range(7)])


def test_limit_of_hyperplane_pairings():
    ns = list(range(4, 36, 4))
    seq = [power_map(n, scale=2, shift=1) for n in ns]
    samples = sample_sequence(seq, [0.75], BASIS, ns)
    rep = limit_points(samples)
    assert rep.certified(0.75, 0)
    assert rep.clusters[0.75][0][0].centre == 1.0
    # the x1 pairing against the arithmetic side of the first main theorem
    for n, f, s in zip(ns, seq, samples):
        ratio = fmt_check(f, X1, 0.75).T_arith / fmt_check(f, X0, 0.75).T_arith
        assert s.pairings[1] == pytest.approx(ratio, abs=1e-6)
    assert rep.certified(0.75, 1)


def test_positivity_self_divisor():
    ns = [5, 10, 20]
    rows = positivity_check([power_map(n, scale=2, shift=1) for n in ns], [0.6], [X0], ns)
    assert all(r.pairing == 1.0 and r.margin >= 1 for r in rows)


def test_positivity_base_point_guard():
    with pytest.raises(BasePointOnDivisor):
        positivity_check([power_map(5, scale=2)], [0.6], [X1])


def test_positivity_margins_against_fmt_bound():
    ns = [4, 8, 16, 32]
    seq = [power_map(n, scale=2, shift=1) for n in ns]
    F = X1
    rows = positivity_check(seq, [0.6, 0.75], [F], ns)
    for row, (n, f, r) in zip(rows, [(n, f, r) for n, f in zip(ns, seq) for r in (0.6, 0.75)]):
        fmt = fmt_check(f, F, r)
        assert fmt.T_arith >= F.weil_floor - 10.0
        assert row.margin >= -1e-9
        assert row.pairing >= -1.0 / n


def test_decay_table_bound():
    ns = list(range(5, 45, 5))
    seq = [power_map(n, scale=2) for n in ns]
    form = ExactForm.chordal_squared(ProjPoint.of(1, 0))
    table = exactness_decay(seq, form, [0.75], ns)
    assert table.ok
    for row, n in zip(table.rows, ns):
        assert row.bound == pytest.approx(2 / (0.5 * np.log1p(1.5 ** (2 * n))), rel=1e-9)
        assert abs(row.pairing) * n < 2 / np.log(1.5) + 0.5  # decays like c / n
    rows = list(csv.reader(io.StringIO(table.to_csv())))
    assert tuple(rows[0]) == DECAY_COLUMNS == ("n", "r", "pairing", "bound", "margin")


def test_decay_needs_diverging_normalizers():
    with pytest.raises(NormalizerNotDiverging):
        exactness_decay([M("1|0,1")] * 6, BASIS.exact_forms[0], [0.5])


def test_basis_validation():
    with pytest.raises(ValueError):
        TestFormBasis(())
    with pytest.raises(ValueError):
        TestFormBasis(((X0, "x0"), (MetricizedDivisor.hyperplane(2, 0), "y0")))
    with pytest.raises(ValueError):
        ExactForm("bad", lambda x: x[0].real, np.inf)
