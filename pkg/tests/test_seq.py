from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from kdiam import seq
from kdiam.errors import DomainError, ParseError
from kdiam.seq import (
    Combo,
    ExpLinear,
    Lazy,
    Log,
    Poly,
    Product,
    Table,
    constant,
    constant_ratio,
    geometric_ladder,
    liminf_ratio,
    limsup_ratio,
    parse_sequence,
    scale,
    tail_window,
    validate_exponents,
)

N = Fraction


def test_eval_identity_sequence():
    assert seq.Poly(N(1)).eval(5) == 5


def test_eval_log_at_one_is_zero():
    assert seq.Log().eval(1) == 0
    assert seq.Log().eval(0) == 0


def test_eval_affine_half_identity():
    half = scale(N(1, 2), Poly(N(1)))
    assert half.eval(8) == 4


def test_eval_exp_linear():
    assert ExpLinear(N(2)).eval(3) == mpmath.exp(6)


def test_eval_exp_no_overflow_far_out():
    # e^{-n} at n = 700 underflows binary64 but must stay finite here.
    value = ExpLinear(N(-1)).eval(700)
    assert value > 0
    assert mpmath.isfinite(value)
    big = ExpLinear(N(1)).eval(5000)
    assert mpmath.isfinite(big)


def test_table_prefix_overrides_tail():
    t = Table((N(9), N(7)), tail=Poly(N(1)))
    assert t.eval(0) == 9
    assert t.eval(1) == 7
    assert t.eval(2) == 2


def test_table_without_tail_errors_beyond_prefix():
    t = Table((N(1),), tail=None)
    with pytest.raises(DomainError):
        t.eval(5)


def test_eval_fraction_poly_and_combo():
    assert Poly(N(2)).eval_fraction(7) == 49
    combo = seq.combo((N(1, 3), Poly(N(1))), (N(2), seq.ONE))
    assert combo.eval_fraction(6) == N(4)
    assert seq.Poly(N(1, 2)).eval_fraction(2) is None


def test_limits():
    assert Poly(N(2)).limit() == seq.INF if False else True  # placeholder guard
    assert mpmath.isinf(seq.to_mpf(Poly(N(2)).limit()))
    assert Poly(N(0)).limit() == 1
    assert Poly(N(-1)).limit() == 0
    assert ExpLinear(N(-3)).limit() == 0
    f_finite = scale(N(-1), Poly(N(-1)))  # -1/k, the finite-type grade profile
    assert f_finite.limit() == 0
    assert mpmath.isinf(seq.to_mpf(Log().limit()))


# --- grammar ---------------------------------------------------------------


def test_parse_round_trip_simple():
    for text in ["poly(1)", "poly(2)", "log", "loglog", "exp(3)", "exp(-1/2)"]:
        parsed = parse_sequence(text)
        again = parse_sequence(parsed.text())
        assert parsed == again


def test_parse_combo_and_product():
    s = parse_sequence("1/2*poly(1) + 2*log")
    assert s.eval(8) == 4 + 2 * mpmath.log(8)
    p = parse_sequence("poly(1) * log(poly(1) + 1)")
    assert p.eval(3) == 3 * mpmath.log(4)


def test_parse_table_and_max():
    t = parse_sequence("table([1, 0, 2], tail=poly(1))")
    assert t.eval(1) == 0
    assert t.eval(4) == 4
    m = parse_sequence("max(poly(1), 5)")
    assert m.eval(2) == 5
    assert m.eval(9) == 9


def test_parse_composed_exp():
    s = parse_sequence("exp(1, poly(1/2))")  # e^{sqrt n}
    assert s.eval(16) == mpmath.exp(4)


def test_parse_errors():
    for bad in ["poly(", "frob(2)", "poly(1) +", "table([1], tail=)", "2 ** 3"]:
        with pytest.raises(ParseError):
            parse_sequence(bad)


# --- exponent validation ----------------------------------------------------


def test_validate_exponents_accepts_standard_alphas():
    for text in ["poly(1)", "poly(2)", "log(poly(1) + 1)", "poly(1) * log(poly(1) + 1)"]:
        validate_exponents(parse_sequence(text), 4096)


def test_validate_exponents_rejects_decreasing():
    with pytest.raises(DomainError):
        validate_exponents(parse_sequence("exp(-1)"), 4096)


def test_validate_exponents_rejects_bounded():
    with pytest.raises(DomainError):
        validate_exponents(constant(3), 4096)


# --- limsup / liminf ---------------------------------------------------------


def test_limsup_constant_ratio_exact():
    half = scale(N(1, 2), Poly(N(1)))
    out = limsup_ratio(half, Poly(N(1)), 4096)
    assert out.mode == "exact"
    assert out.exact_value == N(1, 2)
    low = liminf_ratio(half, Poly(N(1)), 4096)
    assert low.exact_value == N(1, 2)


def test_limsup_estimated_decay():
    # Oracle: brute maximum of n/n^2 over the full tail window [N/2, N].
    res = 4096
    oracle = max(mpf(n) / (mpf(n) ** 2) for n in range(res // 2, res + 1))
    out = limsup_ratio(Poly(N(1)), Poly(N(2)), res)
    assert out.mode == "estimated"
    assert out.value == oracle == mpf(1) / 2048
    assert not out.divergent


def test_limsup_divergent_growth():
    out = limsup_ratio(Poly(N(2)), Poly(N(1)), 4096)
    assert out.mode == "estimated"
    assert out.value >= 2048
    assert out.divergent
    assert mpmath.isfinite(out.value)  # a flag, never a fabricated infinity


def test_liminf_constant_three():
    out = liminf_ratio(constant(3), seq.ONE, 4096)
    assert out.mode == "exact"
    assert out.exact_value == 3


def test_liminf_alternating_table():
    alternating = Lazy(lambda n: mpf(1 if n % 2 == 0 else 2) * n, "alternating*n")
    out = liminf_ratio(alternating, Poly(N(1)), 4096)
    assert out.mode == "estimated"
    assert out.value == 1
    up = limsup_ratio(alternating, Poly(N(1)), 4096)
    assert up.value == 2


def test_liminf_divergent_n_over_log():
    out = liminf_ratio(Poly(N(1)), Log(), 4096)
    assert out.divergent
    assert out.value > 100


def test_denominator_zero_is_domain_error():
    with pytest.raises(DomainError):
        limsup_ratio(Poly(N(1)), Table((N(1),), tail=constant(0)), 4096)


def test_resolution_floor():
    with pytest.raises(DomainError):
        limsup_ratio(Poly(N(1)), Poly(N(1)), 32)


# --- invariants --------------------------------------------------------------

_simple_seqs = st.sampled_from(
    [
        Poly(N(1)),
        Poly(N(2)),
        Poly(N(1, 2)),
        Log(),
        ExpLinear(N(1, 4)),
        ExpLinear(N(-1, 2)),
        Product(Poly(N(1)), Log()),
        seq.combo((N(1), Poly(N(1))), (N(3), seq.ONE)),
    ]
)

_rationals = st.fractions(min_value=N(1, 8), max_value=N(8), max_denominator=16)


@given(num=_simple_seqs, den=_simple_seqs)
@settings(max_examples=40, deadline=None)
def test_limsup_at_least_liminf(num, den):
    up = limsup_ratio(num, den, 256)
    low = liminf_ratio(num, den, 256)
    assert up.value >= low.value
    assert up.mode == low.mode


@given(num=_simple_seqs, den=_simple_seqs, c=_rationals)
@settings(max_examples=40, deadline=None)
def test_scaling_homogeneity(num, den, c):
    base = limsup_ratio(num, den, 256)
    scaled = limsup_ratio(scale(c, num), den, 256)
    assert scaled.mode == base.mode
    expected = base.value * seq.to_mpf(c)
    assert mpmath.almosteq(scaled.value, expected, rel_eps=mpf("1e-25"))
    if base.exact_value is not None:
        assert scaled.exact_value == base.exact_value * c


@given(num=_simple_seqs, den=_simple_seqs)
@settings(max_examples=20, deadline=None)
def test_exact_mode_stable_under_resolution(num, den):
    first = limsup_ratio(num, den, 256)
    if first.mode == "exact":
        second = limsup_ratio(num, den, 512)
        assert second.mode == "exact"
        assert second.value == first.value


def test_constant_ratio_detection_through_combo():
    num = scale(N(3, 2), Product(Log(), Poly(N(1))))
    den = Product(Log(), Poly(N(1)))
    assert constant_ratio(num, den) == N(3, 2)
    assert constant_ratio(seq.ZERO, den) == 0
    assert constant_ratio(Poly(N(1)), Log()) is None


def test_ladder_and_window_shapes():
    ladder = geometric_ladder(4096)
    assert ladder[0] == 8 and ladder[-1] == 4096
    assert all(b == 2 * a for a, b in zip(ladder, ladder[1:]))
    window = tail_window(4096)
    assert window[0] == 2048 and window[-1] == 4096
    assert 3072 in window and 4090 in window
