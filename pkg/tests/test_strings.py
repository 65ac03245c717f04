import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from observement import strings
from observement.errors import CapExceeded
from observement.strings import (
    EventSemantics,
    GrammarError,
    NonTerminal,
    OneOrMore,
    SemanticsError,
    Terminal,
)

TURTLE = """\
<path>
<path> -> F <path>
<path> -> L <path>
<path> -> R <path>
<path> -> T
"""

ARTHROPOD = """\
<body> -> <HEAD> <SEGMENT>+ <TAIL>
<HEAD> -> h
<SEGMENT> -> s
<TAIL> -> t
"""


@pytest.fixture(scope="module")
def turtle():
    return strings.parse_grammar(TURTLE)


class TestParseGrammar:
    def test_turtle_grammar_shape(self, turtle):
        assert sorted(turtle.terminals) == ["F", "L", "R", "T"]
        assert turtle.nonterminals == frozenset({"path"})
        assert turtle.start == "path"
        assert len(turtle.rules["path"]) == 4

    def test_compact_and_spaced_syntax_agree(self):
        compact = strings.parse_grammar("<path> -> F<path> | L<path> | R<path> | T\n")
        spaced = strings.parse_grammar(TURTLE)
        assert compact.rules == spaced.rules

    def test_one_or_more_template(self):
        grammar = strings.parse_grammar(ARTHROPOD)
        body = grammar.rules["body"][0]
        assert body == (
            NonTerminal("HEAD"),
            OneOrMore(NonTerminal("SEGMENT")),
            NonTerminal("TAIL"),
        )

    def test_undefined_nonterminal_named_in_error(self):
        with pytest.raises(GrammarError, match="<foo>"):
            strings.parse_grammar("<a> -> x <foo>\n")

    def test_terminal_nonterminal_clash_rejected(self):
        with pytest.raises(GrammarError, match="both terminal and nonterminal"):
            strings.parse_grammar("<a> -> x <F>\n<F> -> F\n")

    def test_empty_alternative_rejected(self):
        with pytest.raises(GrammarError, match="empty alternative"):
            strings.parse_grammar("<a> -> x | | y\n")
        with pytest.raises(GrammarError, match="empty alternative"):
            strings.parse_grammar("<a> -> x |\n")

    def test_left_recursion_rejected(self):
        with pytest.raises(GrammarError, match="left recursion"):
            strings.parse_grammar("<a> -> <a> x | y\n")
        with pytest.raises(GrammarError, match="left recursion"):
            strings.parse_grammar("<a> -> <b> x | z\n<b> -> <a> y | z\n")

    def test_plus_without_item_rejected(self):
        with pytest.raises(GrammarError, match=r"\+"):
            strings.parse_grammar("<a> -> + x\n")

    def test_quoted_terminals(self):
        grammar = strings.parse_grammar("<a> -> 'x' \"y\"\n")
        assert grammar.rules["a"][0] == (Terminal("x"), Terminal("y"))

    def test_error_carries_line_and_column(self):
        with pytest.raises(GrammarError, match="line 2"):
            strings.parse_grammar("<a> -> x\n<b -> y\n")


class TestMembership:
    def test_example_path_accepted(self, turtle):
        assert strings.membership(turtle, "FFLFFFRFT")

    def test_empty_string_rejected(self, turtle):
        # Every path ends with the terminate symbol, so the empty string is out.
        assert not strings.membership(turtle, "")

    def test_nothing_follows_terminate(self, turtle):
        # Oracle: generate(turtle, 3) enumerates all members of length <= 3;
        # FTF is absent from that list.
        assert "FTF" not in strings.generate(turtle, 3)
        assert not strings.membership(turtle, "FTF")

    def test_symbols_outside_alphabet_mean_nonmember(self, turtle):
        assert not strings.membership(turtle, "FXT")

    def test_agrees_with_generate_oracle(self, turtle):
        members = set(strings.generate(turtle, 5))
        rng = random.Random(4)
        alphabet = sorted(turtle.terminals)
        for _ in range(300):
            s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 5)))
            assert strings.membership(turtle, s) == (s in members)

    def test_one_or_more_consumes_at_least_one(self):
        grammar = strings.parse_grammar(ARTHROPOD)
        assert strings.membership(grammar, "hst")
        assert strings.membership(grammar, "hssssst")
        assert not strings.membership(grammar, "ht")
        assert not strings.membership(grammar, "hstt")


class TestGenerate:
    def test_turtle_up_to_one(self, turtle):
        assert strings.generate(turtle, 1) == ["T"]

    def test_turtle_up_to_two(self, turtle):
        assert strings.generate(turtle, 2) == ["T", "FT", "LT", "RT"]

    def test_max_len_zero(self, turtle):
        assert strings.generate(turtle, 0) == []

    def test_counts_follow_branching(self, turtle):
        # Members of length k are exactly the {F,L,R}^(k-1) prefixes plus T.
        for k in range(1, 7):
            of_length = [s for s in strings.generate(turtle, k) if len(s) == k]
            assert len(of_length) == 3 ** (k - 1)

    def test_cap_enforced(self, turtle):
        with pytest.raises(CapExceeded):
            strings.generate(turtle, 9, cap=10)

    def test_nonterminating_rule_defines_empty_language(self):
        grammar = strings.parse_grammar("<a> -> x <a>\n")
        assert strings.generate(grammar, 6) == []


class TestRecordBehavior:
    semantics = EventSemantics({"feed": "F", "groom": "G", "rest": "R"})

    def test_empty_events(self):
        assert strings.record_behavior([], self.semantics) == ""

    def test_three_events_in_order(self):
        assert strings.record_behavior(["feed", "rest", "groom"], self.semantics) == "FRG"

    def test_unknown_key_reports_index(self):
        with pytest.raises(SemanticsError, match="index 2"):
            strings.record_behavior(["feed", "rest", "swim"], self.semantics)

    def test_non_bijective_semantics_rejected(self):
        with pytest.raises(SemanticsError, match="bijection"):
            EventSemantics({"feed": "F", "eat": "F"})

    @given(
        st.lists(st.sampled_from(["feed", "groom", "rest"])),
        st.lists(st.sampled_from(["feed", "groom", "rest"])),
    )
    def test_recording_commutes_with_concatenation(self, left, right):
        sem = self.semantics
        assert strings.record_behavior(left + right, sem) == (
            strings.record_behavior(left, sem) + strings.record_behavior(right, sem)
        )


class TestRelabeling:
    @settings(max_examples=25, deadline=None)
    @given(st.permutations(["F", "L", "R", "T"]))
    def test_relabeling_commutes_with_generate_and_membership(self, image):
        turtle = strings.parse_grammar(TURTLE)
        mapping = dict(zip(sorted(turtle.terminals), image))
        relabeled = strings.relabel_terminals(turtle, mapping)
        originals = strings.generate(turtle, 4)
        translated = sorted(
            ("".join(mapping[c] for c in s) for s in originals), key=lambda t: (len(t), t)
        )
        assert strings.generate(relabeled, 4) == translated
        for s in originals:
            assert strings.membership(relabeled, "".join(mapping[c] for c in s))

    def test_non_bijection_rejected(self, turtle):
        with pytest.raises(GrammarError, match="bijection"):
            strings.relabel_terminals(turtle, {"F": "x", "L": "x", "R": "y", "T": "z"})
