import random

import pytest

from observement import core
from observement.core import (
    Classification,
    FixtureFormatError,
    ObjectSystem,
    ObservationAlgorithm,
    ObservationSystem,
    SystemDefinitionError,
    SystemFixture,
    TranslationSearchError,
)


def identity_fixture():
    members = frozenset({"a", "b", "c"})
    relation = {("a", "b"), ("b", "c")}
    system = ObjectSystem(members, {"r": relation})
    obs = ObservationSystem(members, {"p": relation})
    alg = ObservationAlgorithm("id", {m: m for m in members}, {"r": "p"})
    return system, obs, alg


def height_fixture():
    """Two coarse height labelings that cannot be translated into each other.

    System A buckets 152 and 180 together (both medium); system B splits them
    (small vs tall), so any translation would need two values at medium.
    """
    heights = ("140", "152", "180", "190")

    def label(h, small_below, tall_above):
        h = int(h)
        if h < small_below:
            return "small"
        if h > tall_above:
            return "tall"
        return "medium"

    system = ObjectSystem(
        frozenset(heights),
        {"comparable": {(x, y) for x in heights for y in heights}},
    )
    labels = frozenset({"small", "medium", "tall"})
    obs = ObservationSystem(labels, {"comparable_obs": {(x, y) for x in labels for y in labels}})
    alg_a = ObservationAlgorithm(
        "system_a", {h: label(h, 150, 183) for h in heights}, {"comparable": "comparable_obs"}
    )
    alg_b = ObservationAlgorithm(
        "system_b", {h: label(h, 155, 178) for h in heights}, {"comparable": "comparable_obs"}
    )
    return system, obs, alg_a, alg_b


def mass_fixture():
    """The same four objects weighed in kilograms and in pounds."""
    objects = ("o1", "o2", "o3", "o4")
    kg = {"o1": "0.453592", "o2": "0.907184", "o3": "1.360776", "o4": "1.814368"}
    lb = {"o1": "1", "o2": "2", "o3": "3", "o4": "4"}
    heavier = {(objects[i], objects[j]) for i in range(4) for j in range(4) if i > j}
    system = ObjectSystem(frozenset(objects), {"heavier": heavier})
    obs_kg = ObservationSystem(
        frozenset(kg.values()), {"gt": {(kg[a], kg[b]) for a, b in heavier}}
    )
    obs_lb = ObservationSystem(
        frozenset(lb.values()), {"gt": {(lb[a], lb[b]) for a, b in heavier}}
    )
    alg_kg = ObservationAlgorithm("kilograms", kg, {"heavier": "gt"})
    alg_lb = ObservationAlgorithm("pounds", lb, {"heavier": "gt"})
    return system, obs_kg, obs_lb, alg_kg, alg_lb


def food_web_fixture():
    """A small predation digraph observed as a graph with an edge relation."""
    species = ("frog", "insect", "plant", "spider", "bird")
    eats = {
        ("frog", "insect"),
        ("spider", "insect"),
        ("insect", "plant"),
        ("bird", "frog"),
        ("bird", "spider"),
    }
    vertex = {name: f"v{i}" for i, name in enumerate(sorted(species))}
    system = ObjectSystem(frozenset(species), {"eats": eats})
    obs = ObservationSystem(
        frozenset(vertex.values()),
        {"edge": {(vertex[a], vertex[b]) for a, b in eats}},
    )
    alg = ObservationAlgorithm("adjacency", vertex, {"eats": "edge"})
    return system, obs, alg


class TestVerifyRepresentation:
    def test_identity_mapping_holds(self):
        system, obs, alg = identity_fixture()
        report = core.verify_representation(system, obs, alg)
        assert report.holds
        assert report.counterexamples == ()

    def test_food_web_holds(self):
        system, obs, alg = food_web_fixture()
        assert core.verify_representation(system, obs, alg).holds

    def test_merging_objects_breaks_backward_direction(self):
        # Hand enumeration: objects {a,b,c}, r={(a,c)}, m maps a and b to the
        # same observation x.  Images: (a,c)->(x,y) ok; (b,c)->(x,y) lies in p
        # although (b,c) is not in r.  No other pair maps into p.
        system = ObjectSystem(frozenset({"a", "b", "c"}), {"r": {("a", "c")}})
        obs = ObservationSystem(frozenset({"x", "y"}), {"p": {("x", "y")}})
        alg = ObservationAlgorithm("merge", {"a": "x", "b": "x", "c": "y"}, {"r": "p"})
        report = core.verify_representation(system, obs, alg)
        assert not report.holds
        assert len(report.counterexamples) == 1
        ce = report.counterexamples[0]
        assert ce.relation == "r"
        assert ce.members == ("b", "c")
        assert ce.direction == "backward"

    def test_forward_direction_counterexample(self):
        system = ObjectSystem(frozenset({"a", "b"}), {"r": {("a", "b")}})
        obs = ObservationSystem(frozenset({"x", "y"}), {"p": set()}, {"p": 2})
        alg = ObservationAlgorithm("drop", {"a": "x", "b": "y"}, {"r": "p"})
        report = core.verify_representation(system, obs, alg)
        assert [c.direction for c in report.counterexamples] == ["forward"]

    def test_partial_mapping_rejected(self):
        system, obs, alg = identity_fixture()
        broken = ObservationAlgorithm("partial", {"a": "a"}, {"r": "p"})
        with pytest.raises(SystemDefinitionError, match="not total"):
            core.verify_representation(system, obs, broken)

    def test_arity_mismatch_rejected(self):
        system = ObjectSystem(frozenset({"a"}), {"r": {("a",)}})
        obs = ObservationSystem(frozenset({"x"}), {"p": {("x", "x")}})
        alg = ObservationAlgorithm("m", {"a": "x"}, {"r": "p"})
        with pytest.raises(SystemDefinitionError, match="arity"):
            core.verify_representation(system, obs, alg)

    def test_unpaired_relation_rejected(self):
        system, obs, _ = identity_fixture()
        alg = ObservationAlgorithm("m", {m: m for m in system.objects}, {})
        with pytest.raises(SystemDefinitionError, match="pair every object relation"):
            core.verify_representation(system, obs, alg)


class TestVerifyExistence:
    def test_empty_list_is_false(self):
        system, obs, _ = identity_fixture()
        assert core.verify_existence([], system, obs) is False

    def test_identity_algorithm_is_true(self):
        system, obs, alg = identity_fixture()
        assert core.verify_existence([alg], system, obs) is True

    def test_one_failing_one_passing(self):
        system, obs, alg = identity_fixture()
        failing = ObservationAlgorithm(
            "collapse", {"a": "a", "b": "a", "c": "c"}, {"r": "p"}
        )
        assert not core.verify_representation(system, obs, failing).holds
        assert core.verify_existence([failing, alg], system, obs) is True

    def test_malformed_algorithm_counts_as_failing(self):
        system, obs, _ = identity_fixture()
        broken = ObservationAlgorithm("partial", {"a": "a"}, {"r": "p"})
        assert core.verify_existence([broken], system, obs) is False


class TestFindTranslation:
    def test_same_algorithm_yields_identity(self):
        system, obs, alg = identity_fixture()
        witness = core.find_translation(alg, alg, system, obs, obs)
        assert witness.mapping == {m: m for m in system.objects}

    def test_height_systems_have_no_translation(self):
        system, obs, alg_a, alg_b = height_fixture()
        witness = core.find_translation(alg_a, alg_b, system, obs, obs)
        assert witness.mapping is None
        assert not witness.found

    def test_mass_units_translate_linearly(self):
        system, obs_kg, obs_lb, alg_kg, alg_lb = mass_fixture()
        witness = core.find_translation(alg_kg, alg_lb, system, obs_kg, obs_lb)
        assert witness.mapping == {
            "0.453592": "1",
            "0.907184": "2",
            "1.360776": "3",
            "1.814368": "4",
        }

    def test_round_trip_witnesses_compose_to_identity(self):
        system, obs_kg, obs_lb, alg_kg, alg_lb = mass_fixture()
        forward = core.find_translation(alg_kg, alg_lb, system, obs_kg, obs_lb).mapping
        backward = core.find_translation(alg_lb, alg_kg, system, obs_lb, obs_kg).mapping
        for value in alg_kg.image():
            assert backward[forward[value]] == value
        for value in alg_lb.image():
            assert forward[backward[value]] == value

    def test_cap_raises_search_exhausted(self):
        system, obs, alg = identity_fixture()
        with pytest.raises(TranslationSearchError, match="search exhausted"):
            core.find_translation(alg, alg, system, obs, obs, cap=3)

    def test_invalid_algorithm_rejected(self):
        system, obs, alg = identity_fixture()
        failing = ObservationAlgorithm(
            "collapse", {"a": "a", "b": "a", "c": "c"}, {"r": "p"}
        )
        with pytest.raises(SystemDefinitionError, match="representation"):
            core.find_translation(failing, alg, system, obs, obs)


class TestClassify:
    def test_single_valid_algorithm_is_strong(self):
        system, obs, alg = identity_fixture()
        assert core.classify(system, [obs], [alg]) is Classification.STRONG

    def test_height_fixture_is_weak(self):
        system, obs, alg_a, alg_b = height_fixture()
        assert core.classify(system, [obs, obs], [alg_a, alg_b]) is Classification.WEAK

    def test_mass_fixture_is_strong(self):
        system, obs_kg, obs_lb, alg_kg, alg_lb = mass_fixture()
        verdict = core.classify(system, [obs_kg, obs_lb], [alg_kg, alg_lb])
        assert verdict is Classification.STRONG

    def test_no_algorithms_is_not_observement(self):
        system, obs, _ = identity_fixture()
        assert core.classify(system, [], []) is Classification.NOT_OBSERVEMENT

    def test_only_invalid_algorithms_is_not_observement(self):
        system, obs, _ = identity_fixture()
        failing = ObservationAlgorithm(
            "collapse", {"a": "a", "b": "a", "c": "c"}, {"r": "p"}
        )
        assert core.classify(system, [obs], [failing]) is Classification.NOT_OBSERVEMENT

    def test_verdict_is_permutation_invariant(self):
        system, obs, alg_a, alg_b = height_fixture()
        rng = random.Random(11)
        baseline = core.classify(system, [obs, obs], [alg_a, alg_b])
        for _ in range(5):
            algs = [alg_a, alg_b]
            rng.shuffle(algs)
            assert core.classify(system, [obs] * 2, algs) == baseline
        # Rebuilding the system from shuffled input data changes nothing:
        # everything is sets underneath.
        rebuilt = ObjectSystem(
            frozenset(reversed(sorted(system.objects))),
            {name: set(tuples) for name, tuples in system.relations.items()},
        )
        assert core.classify(rebuilt, [obs, obs], [alg_a, alg_b]) == baseline

    def test_length_mismatch_rejected(self):
        system, obs, alg = identity_fixture()
        with pytest.raises(SystemDefinitionError):
            core.classify(system, [obs, obs], [alg])


class TestSystemInvariants:
    def test_relation_tuple_outside_members_rejected(self):
        with pytest.raises(SystemDefinitionError, match="references"):
            ObjectSystem(frozenset({"a"}), {"r": {("a", "b")}})

    def test_mixed_arity_rejected(self):
        with pytest.raises(SystemDefinitionError, match="mixes arities"):
            ObjectSystem(frozenset({"a", "b"}), {"r": {("a",), ("a", "b")}})

    def test_empty_relation_needs_declared_arity(self):
        with pytest.raises(SystemDefinitionError, match="arity"):
            ObjectSystem(frozenset({"a"}), {"r": set()})
        system = ObjectSystem(frozenset({"a"}), {"r": set()}, {"r": 2})
        assert system.arities["r"] == 2


class TestFixtureFile:
    def round_trip(self, fixture):
        text = core.format_system_file(fixture)
        assert core.parse_system_file(text) == fixture

    def test_height_fixture_round_trips(self):
        system, obs, alg_a, alg_b = height_fixture()
        self.round_trip(SystemFixture(system, obs, (alg_a, alg_b)))

    def test_food_web_round_trips(self):
        system, obs, alg = food_web_fixture()
        self.round_trip(SystemFixture(system, obs, (alg,)))

    def test_empty_relations_round_trip(self):
        system = ObjectSystem(frozenset({"a", "b"}), {"r": set()}, {"r": 3})
        obs = ObservationSystem(frozenset({"x"}), {"p": set()}, {"p": 3})
        alg = ObservationAlgorithm("m", {"a": "x", "b": "x"}, {"r": "p"})
        self.round_trip(SystemFixture(system, obs, (alg,)))

    def test_parse_reports_bad_arity_line(self):
        text = "OBJECTS\na b\nRELATION r/2\na\n"
        with pytest.raises(FixtureFormatError, match="line 4"):
            core.parse_system_file(text)

    def test_parse_rejects_data_before_section(self):
        with pytest.raises(FixtureFormatError, match="line 1"):
            core.parse_system_file("a b c\n")

    def test_parse_rejects_unknown_member_in_map(self):
        text = "OBJECTS\na\nOBSERVATIONS\nx\nMAP m\nb x\n"
        with pytest.raises(FixtureFormatError, match="unknown"):
            core.parse_system_file(text)

    def test_parse_rejects_pair_without_map(self):
        with pytest.raises(FixtureFormatError, match="PAIR before"):
            core.parse_system_file("OBJECTS\na\nPAIR\nr p\n")

    def test_comments_and_blank_lines_ignored(self):
        system, obs, alg = identity_fixture()
        fixture = SystemFixture(system, obs, (alg,))
        text = core.format_system_file(fixture)
        noisy = "# header comment\n\n" + text.replace("OBSERVATIONS", "\n# note\nOBSERVATIONS")
        assert core.parse_system_file(noisy) == fixture
