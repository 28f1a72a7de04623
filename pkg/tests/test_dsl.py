import pytest

from preproj import dsl
from preproj.field import GF, QQ
from preproj.freealg import DSLSyntaxError
from preproj.quotient import build_quotient

DOC = """# a custom quiver
presentation K;
field gf3;
quiver {
  vertices 0, 1;
  arrow a: 0 -> 1;
  arrow b: 1 -> 0;
  bar a = b;
}
param s;
let x = a*b;
relation x*a + s*a*b*a;
relation b*x;
"""


def test_parse_custom_quiver():
    P = dsl.parse_presentation(DOC, None, {"s": 1})
    assert P.field == GF(3)
    assert P.name == "K"
    assert [a.name for a in P.quiver.arrows] == ["a", "b"]
    A = build_quotient(P)
    # a*b*a = 0 once s = 1 and 2 = -1; basis e0, e1, a, b, ab, ba
    assert A.dimension == 6


def test_caller_field_wins():
    P = dsl.parse_presentation(DOC, QQ, {"s": 1})
    assert P.field == QQ


def test_undeclared_param_rejected():
    with pytest.raises(DSLSyntaxError):
        dsl.parse_presentation(DOC, GF(3), {"s": 1, "u": 2})


@pytest.mark.parametrize("bad,line", [
    ("presentation X;\nquiver dynkin D4;\nrelation a0*abar0 + ) ;\n", 3),
    ("presentation X;\nrelation a0*abar0;\n", 2),
    ("presentation X;\nquiver dynkin D4;\nfrobnicate;\n", 3),
    ("presentation X;\nquiver dynkin D4;\nrelation a0*abar0\n", 3),
])
def test_errors_carry_positions(bad, line):
    with pytest.raises(DSLSyntaxError) as e:
        dsl.parse_presentation(bad, GF(2))
    assert e.value.line == line
    assert e.value.col >= 1


def test_comments_do_not_shift_positions():
    text = "# c\npresentation X; # trailing\nquiver dynkin A2;\nrelation a0*q;\n"
    with pytest.raises(Exception) as e:
        dsl.parse_presentation(text, GF(2))
    assert getattr(e.value, "line", 4) == 4


def test_morphism_blocks():
    text = "morphism f : P -> Q {\n  vertex 0 -> 0;\n  a -> a + a*b*a;\n}\n"
    blocks = dsl.parse_morphism_blocks(text)
    assert list(blocks) == ["f"]
    assert blocks["f"][:2] == ("P", "Q")
    P = dsl.parse_presentation(DOC, GF(3), {"s": 0})
    vmap, images, _ = dsl.morphism_images(blocks["f"][2], P.quiver, P.quiver, GF(3))
    assert vmap == {0: 0, 1: 1}
    assert str(images["b"]) == "b"


def test_identity_suite_parse():
    from preproj.quiver import build_dynkin_quiver
    text = 'identities T {\n  let x = abar0*a0;\n  identity "(1)": x^2 = 0;\n}\n'
    ids = dsl.parse_identities(text, build_dynkin_quiver("D4"), GF(2))
    assert [label for label, _, _ in ids] == ["(1)"]
