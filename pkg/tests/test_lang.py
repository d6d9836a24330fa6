import random
import warnings

import pytest

from m11pi.freelie import ZeroTermWarning, expand
from m11pi.identities import cm, cp, pp
from m11pi.lang import IdentityFileError, ParseError, format_poly, parse, parse_identity_text
from m11pi.scalars import GF, QQ
from treegen import random_poly
from m11pi.freelie import rename


def test_cm_and_cp():
    assert parse("[x,y,[z,t],u]") == rename(cm(), {"u": "z", "v": "t", "z": "u"})
    assert parse("[x,y,z^(3),t]", GF(3)) == rename(cp(3, GF(3)), {"z": "y", "u": "z", "v": "t"})


def test_square_warns_and_vanishes():
    with pytest.warns(ZeroTermWarning):
        f = parse("[x,x]")
    assert f.is_zero()


def test_power_on_bracket():
    assert parse("[x,[y,z]^(2),t]") == parse("[x,[y,z],[y,z],t]")


def test_errors():
    for bad in ["[x,y", "[x,,y]", "[x,y] −[y,x]", "x y", "[x,y^(0)]"]:
        with pytest.raises(ParseError):
            parse(bad)


def test_identity_files():
    text = "cm: [x,y,[u,v],z] = 0\ncp: [x,z,u^(3),v] = 0\npp: [x,y,x^(2),y^(2),v]\n"
    out = parse_identity_text(text, GF(3))
    assert list(out) == ["cm", "cp", "pp"]
    assert out["pp"] == pp(3, GF(3))
    with pytest.raises(IdentityFileError):
        parse_identity_text("cm: [x,y]\ncm: [x,z]\n")
    assert parse_identity_text("") == {}


@pytest.mark.parametrize("F", [QQ, GF(5)])
def test_round_trip_1000_trees(F):
    rng = random.Random(1234)
    for _ in range(1000):
        f = random_poly(rng, F)
        s = format_poly(f)
        g = parse(s, F)
        assert format_poly(g) == s
        assert expand(g) == expand(f)
