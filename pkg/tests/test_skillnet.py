import pytest

from ckspace.errors import CycleError, UnknownSkillError, ValidationError
from ckspace.knowledge import (
    NumberRange,
    RepresentationStep,
    load_sample_skill_net,
    load_skill_net,
    precursors,
    successors,
)

from conftest import make_net, random_dag


class TestLoad:
    def test_chain_order(self, chain):
        assert chain.order == ("A", "B", "C")

    def test_declaration_order_breaks_ties(self):
        net = make_net(["C", "A", "B"], [("C", "B")])
        assert net.order == ("C", "A", "B")

    def test_cycle(self):
        with pytest.raises(CycleError) as info:
            make_net(["A", "B"], [("A", "B"), ("B", "A")])

        assert set(info.value.cycle) == {"A", "B"}
        assert info.value.cycle[0] == info.value.cycle[-1]

    def test_self_loop(self):
        with pytest.raises(CycleError):
            make_net(["A"], [("A", "A")])

    def test_dangling_edge(self):
        with pytest.raises(ValidationError, match="unknown skill 'Z'"):
            make_net(["A"], [("A", "Z")])

    def test_duplicate_id(self):
        with pytest.raises(ValidationError, match="duplicate"):
            make_net(["A", "A"])

    def test_game_without_skills(self):
        with pytest.raises(ValidationError, match="binds no skill"):
            make_net(["A"], games={"landing": []})

    def test_empty(self):
        net = make_net([])
        assert len(net) == 0
        assert net.order == ()

    def test_sample(self):
        net = load_sample_skill_net()

        assert len(net) == 100
        assert {s.number_range for s in net.skills.values()} == set(NumberRange)
        assert {s.step for s in net.skills.values() if s.step} == set(RepresentationStep)
        assert all(net.games.values())
        assert net.remediation_skills("ten-crossing")

    def test_round_trip_document(self):
        net = load_sample_skill_net()
        again = load_skill_net(net.to_dict())

        assert again.order == net.order
        assert set(again.edges) == set(net.edges)


class TestNeighbours:
    def test_root(self, chain):
        assert precursors(chain, "A") == []

    def test_chain(self, chain):
        assert successors(chain, "B") == ["C"]

    def test_diamond(self, diamond):
        assert precursors(diamond, "D") == ["B", "C"]
        assert successors(diamond, "A") == ["B", "C"]

    def test_unknown(self, chain):
        with pytest.raises(UnknownSkillError):
            precursors(chain, "Z")

    def test_consistent_with_edges(self, rng):
        for _ in range(20):
            net = random_dag(rng)

            for s in net:
                assert set(precursors(net, s)) == {a for (a, b) in net.edges if b == s}
                assert set(successors(net, s)) == {b for (a, b) in net.edges if a == s}

            for (a, b) in net.edges:
                assert net.index(a) < net.index(b)
