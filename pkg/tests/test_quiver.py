import pytest

from preproj.quiver import (DynkinType, InvalidRank, Quiver, QuiverError, build_dynkin_quiver,
                            exceptional_vertex)


@pytest.mark.parametrize("t,arrows", [("A2", 2), ("A5", 8), ("D4", 6), ("E6", 10), ("E8", 14),
                                      ("L1", 1), ("L3", 5)])
def test_double_quiver_sizes(t, arrows):
    q = build_dynkin_quiver(t)
    assert q.num_arrows == arrows
    q.check()


def test_arrow_order_and_bar():
    q = build_dynkin_quiver("L3")
    assert [a.name for a in q.arrows] == ["eps", "a0", "a1", "abar0", "abar1"]
    assert q.bar[q.arrow("eps")] == q.arrow("eps")
    assert q.bar[q.arrow("a1")] == q.arrow("abar1")
    d = build_dynkin_quiver("D4")
    assert (d.source(d.arrow("a1")), d.target(d.arrow("a1"))) == (1, 2)
    e = build_dynkin_quiver("E6")
    assert (e.source(e.arrow("a0")), e.target(e.arrow("a0"))) == (0, 3)


@pytest.mark.parametrize("fam,n", [("E", 5), ("E", 9), ("D", 3), ("A", 0), ("B", 3)])
def test_invalid_rank(fam, n):
    with pytest.raises(InvalidRank):
        DynkinType(fam, n)


def test_exceptional_vertex():
    assert [exceptional_vertex(t) for t in ("A3", "D5", "E7", "L2")] == [0, 2, 3, 0]


def test_quiver_errors():
    q = Quiver([0, 1])
    q.add_arrow("a", 0, 1)
    with pytest.raises(QuiverError):
        q.add_arrow("a", 1, 0)
    with pytest.raises(QuiverError):
        q.add_arrow("b", 0, 2)
    q.add_arrow("b", 0, 1)
    with pytest.raises(QuiverError):
        q.set_bar(0, 1)


def test_quiver_equality():
    assert build_dynkin_quiver("D5") == build_dynkin_quiver(DynkinType("D", 5))
    assert build_dynkin_quiver("D5") != build_dynkin_quiver("A5")
