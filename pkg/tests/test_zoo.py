from __future__ import annotations

import numpy as np
import pytest

from annuli import Annulus, parse_function
from annuli.errors import ConfigError

A = Annulus(3.0)


@pytest.mark.parametrize("spec, z, expect", [
    ("z", 2.0, 2.0),
    ("2.5", 1.2, 2.5),
    ("-1.5+2i", 1.2, -1.5 + 2j),
    ("i", 1.2, 1j),
    ("3*z", 1.5, 4.5),
    ("1/(R0-z)", 2.0, 1.0),
    ("2/(R0-z)^2", 1.0, 0.5),
    ("rational([(1.5,2)];[(-0.6,1)];1;0)", 1.0, 0.25 / 1.6),
    ("rational([];[];2;-1)", 2.0, 1.0),
    ("exp(z)", 1.0, np.e),
    ("exp(z)-1", 1.0, np.e - 1),
    ("poly(1,0,1)", 2.0, 5.0),
    ("zpow(2)", 1.5, 2.25),
    ("shift(z;0.5)", 2.0, 1.5),
    ("add(z;z)", 1.5, 3.0),
    ("mul(z;z)", 1.5, 2.25),
    ("div(z;poly(0,0,1))", 2.0, 0.5),
    ("deriv(poly(0,0,1))", 2.0, 4.0),
    ("logderiv(poly(0,0,1))", 2.0, 1.0),
    (" exp ( z ) ", 1.0, np.e),
])
def test_parse_and_evaluate(spec, z, expect):
    f = parse_function(spec, A)
    assert complex(f.value(np.array([z], dtype=complex))[0]) == pytest.approx(expect, rel=1e-13)


def test_spec_is_recorded():
    assert parse_function("exp(1/(R0-z)^2)", A).spec == "exp(1/(R0-z)^2)"


@pytest.mark.parametrize("spec, column", [
    ("exp(z", 6),
    ("foo(z)", 1),
    ("rational([(1.5,2)];[];1)", 24),
    ("z z", 3),
    ("zpow(1+2i)", 1),
])
def test_errors_carry_column(spec, column):
    with pytest.raises(ConfigError) as exc:
        parse_function(spec, A)
    assert exc.value.position == f"column {column}"


def test_domain_errors_become_config_errors():
    with pytest.raises(ConfigError) as exc:
        parse_function("exp(rational([];[(1.5,1)];1;0))", A)
    assert "column 1" in str(exc.value)
