import pytest
from click.testing import CliRunner

from observement.cli import cli

TURTLE = "<path>\n<path> -> F <path> | L <path> | R <path> | T\n"

WEAK_FIXTURE = """\
OBJECTS
140 152 180 190
OBSERVATIONS
small medium tall
MAP system_a
140 small
152 medium
180 medium
190 tall
MAP system_b
140 small
152 small
180 tall
190 tall
"""

KINSHIP = """\
alice -> carol
bob -> carol
alice -> dave
bob -> dave
alice <-> bob
carol -> frank
dave -> grace
"""


@pytest.fixture()
def runner():
    return CliRunner()


def write(path, text):
    path.write_text(text)
    return str(path)


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self, runner):
        result = runner.invoke(cli, ["frobnicate"])
        assert result.exit_code == 2

    def test_missing_file_is_domain_error(self, runner):
        result = runner.invoke(cli, ["translate", "missing.fa"])
        assert result.exit_code == 1

    def test_format_violation_is_domain_error(self, runner, tmp_path):
        path = write(tmp_path / "bad.g", "graph x\n")
        result = runner.invoke(cli, ["graph", "convert", path, "--to", "edges"])
        assert result.exit_code == 1
        assert "vertex count" in result.output

    def test_version_flag(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "observe" in result.output


class TestSystem:
    def test_classify_weak_fixture(self, runner, tmp_path):
        path = write(tmp_path / "heights.obs", WEAK_FIXTURE)
        result = runner.invoke(cli, ["system", "classify", path])
        assert result.exit_code == 0
        assert result.output.strip() == "Weak"

    def test_verify_lists_each_algorithm(self, runner, tmp_path):
        path = write(tmp_path / "heights.obs", WEAK_FIXTURE)
        result = runner.invoke(cli, ["system", "verify", path])
        assert result.exit_code == 0
        assert "system_a: holds" in result.output
        assert "system_b: holds" in result.output

    def test_verify_single_algorithm(self, runner, tmp_path):
        path = write(tmp_path / "heights.obs", WEAK_FIXTURE)
        result = runner.invoke(cli, ["system", "verify", path, "--alg", "system_a"])
        assert result.output.strip() == "system_a: holds"


class TestGrammar:
    def test_check_member(self, runner, tmp_path):
        path = write(tmp_path / "turtle.g", TURTLE)
        assert runner.invoke(cli, ["grammar", "check", path, "FFLFFFRFT"]).output.strip() == "true"
        assert runner.invoke(cli, ["grammar", "check", path, "FTF"]).output.strip() == "false"

    def test_gen_orders_by_length(self, runner, tmp_path):
        path = write(tmp_path / "turtle.g", TURTLE)
        result = runner.invoke(cli, ["grammar", "gen", path, "--max-len", "2"])
        assert result.output.splitlines() == ["T", "FT", "LT", "RT"]


class TestTranslate:
    def test_minimal_gene(self, runner, tmp_path):
        path = write(tmp_path / "gene.fa", ">minimal\natgtag\n")
        result = runner.invoke(cli, ["translate", path])
        assert result.exit_code == 0
        assert result.output.strip() == "M"

    def test_frame_mode(self, runner, tmp_path):
        path = write(tmp_path / "frame.fa", "tcttcatcgtaa\n")
        result = runner.invoke(cli, ["translate", path, "--frame"])
        assert result.output.strip() == "SSS*"

    def test_custom_table(self, runner, tmp_path):
        from observement.genetics import standard_table
        table_path = write(tmp_path / "table.tsv", standard_table().to_text())
        gene_path = write(tmp_path / "gene.fa", "atgatctag\n")
        result = runner.invoke(cli, ["translate", gene_path, "--table", table_path])
        assert result.output.strip() == "MI"

    def test_malformed_gene_is_domain_error(self, runner, tmp_path):
        path = write(tmp_path / "gene.fa", "atgta\n")
        result = runner.invoke(cli, ["translate", path])
        assert result.exit_code == 1
        assert "divisible" in result.output


class TestMotif:
    def test_match_search_offsets(self, runner, tmp_path):
        path = write(tmp_path / "seqs.txt", "BABA\n")
        result = runner.invoke(cli, ["motif", "match", "A", path])
        assert result.output.strip() == "0\t1 3"

    def test_match_anchored(self, runner, tmp_path):
        path = write(tmp_path / "seqs.fa", ">s1\nAXYD\n>s2\nBAXYD\n")
        result = runner.invoke(cli, ["motif", "match", "A x(2) D", path, "--anchored"])
        assert result.output.splitlines() == ["s1\t0", "s2\t"]

    def test_derive(self, runner, tmp_path):
        path = write(tmp_path / "family.txt", "AB\nAC\n")
        result = runner.invoke(cli, ["motif", "derive", path, "--class-cap", "2"])
        assert result.output.strip() == "A {B,C}"


class TestGraph:
    def test_convert_round_trip_through_g6(self, runner, tmp_path):
        edges = "graph 3\n0 1\n1 2\n0 2\n"
        path = write(tmp_path / "k3.edges", edges)
        g6 = runner.invoke(cli, ["graph", "convert", path, "--to", "g6"])
        assert g6.output.strip() == "Bw"
        g6_path = write(tmp_path / "k3.g6", g6.output)
        back = runner.invoke(cli, ["graph", "convert", g6_path, "--to", "edges"])
        lines = back.output.splitlines()
        assert lines[0] == "graph 3"
        assert set(lines[1:]) == {"0 1", "1 2", "0 2"}

    def test_convert_matrix(self, runner, tmp_path):
        path = write(tmp_path / "p2.edges", "graph 2\n0 1\n")
        result = runner.invoke(cli, ["graph", "convert", path, "--to", "matrix"])
        assert result.output == "matrix 2\n01\n10\n"

    def test_iso_witness_and_none(self, runner, tmp_path):
        a = write(tmp_path / "a.g", "graph 3\n0 1\n1 2\n")
        b = write(tmp_path / "b.g", "graph 3\n1 0\n0 2\n")
        result = runner.invoke(cli, ["graph", "iso", a, b])
        assert result.exit_code == 0
        assert len(result.output.splitlines()) == 3
        c = write(tmp_path / "c.g", "graph 3\n0 1\n1 2\n0 2\n")
        assert runner.invoke(cli, ["graph", "iso", a, c]).output.strip() == "none"

    def test_sub(self, runner, tmp_path):
        small = write(tmp_path / "k3.g", "graph 3\n0 1\n1 2\n0 2\n")
        big = write(tmp_path / "k4.g", "graph 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
        result = runner.invoke(cli, ["graph", "sub", small, big])
        assert result.exit_code == 0
        assert len(result.output.splitlines()) == 3

    def test_motif_census_tsv(self, runner, tmp_path):
        path = write(tmp_path / "k3.g", "graph 3\n0 1\n1 2\n0 2\n")
        result = runner.invoke(cli, ["graph", "motifs", path, "-k", "3"])
        assert result.output.strip() == "Bw\t1\tNA"

    def test_motif_census_with_significance_is_deterministic(self, runner, tmp_path):
        path = write(tmp_path / "ring.g", "graph 5\n0 1\n1 2\n2 3\n3 4\n0 4\n")
        args = ["graph", "motifs", path, "-k", "3", "--significance", "4", "--seed", "9"]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.output == second.output
        assert "NA" not in first.output


class TestAutomaton:
    def test_state_space(self, runner, tmp_path):
        path = write(tmp_path / "m.aut", "s0 -> s1\ns1 -> s2\ns2 -> s0\n")
        result = runner.invoke(cli, ["automaton", "graph", path])
        lines = result.output.splitlines()
        assert lines[:3] == ["# 0 s0", "# 1 s1", "# 2 s2"]
        assert lines[3] == "digraph 3"
        assert set(lines[4:]) == {"0 1", "1 2", "2 0"}


class TestPercolate:
    def test_byte_identical_runs(self, runner):
        args = ["percolate", "-n", "40", "--p-from", "0.01", "--p-to", "0.1",
                "--steps", "3", "--trials", "4", "--seed", "7"]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0
        assert first.output == second.output
        assert first.output.splitlines()[0] == "p,mean_fraction"
        assert len(first.output.splitlines()) == 4

    def test_env_seed_matches_flag(self, runner):
        args = ["percolate", "-n", "30", "--p-from", "0.05", "--p-to", "0.05",
                "--steps", "1", "--trials", "3"]
        via_env = runner.invoke(cli, args, env={"OBSERVE_SEED": "11"})
        via_flag = runner.invoke(cli, args + ["--seed", "11"])
        assert via_env.output == via_flag.output
        other = runner.invoke(cli, args + ["--seed", "12"])
        assert other.output != via_flag.output


class TestTree:
    def test_query(self, runner, tmp_path):
        path = write(tmp_path / "fam.kin", KINSHIP)
        out = runner.invoke(cli, ["tree", "query", path, "is_descendant_of", "frank", "alice"])
        assert out.output.strip() == "true"
        out = runner.invoke(cli, ["tree", "query", path, "partnered", "alice", "carol"])
        assert out.output.strip() == "false"

    def test_descendants(self, runner, tmp_path):
        path = write(tmp_path / "fam.kin", KINSHIP)
        result = runner.invoke(cli, ["tree", "descendants", path, "alice"])
        assert result.output.splitlines() == ["carol", "dave", "frank", "grace"]

    def test_unknown_relation_is_domain_error(self, runner, tmp_path):
        path = write(tmp_path / "fam.kin", KINSHIP)
        result = runner.invoke(cli, ["tree", "query", path, "sibling", "alice", "bob"])
        assert result.exit_code == 1


class TestComplexityAndLzw:
    def test_complexity_of_graph_file(self, runner, tmp_path):
        path = write(tmp_path / "k3.g", "graph 3\n0 1\n1 2\n0 2\n")
        result = runner.invoke(cli, ["complexity", path])
        total, primary, secondary = result.output.split()
        assert total == "2"

    def test_complexity_canonical_flag(self, runner, tmp_path):
        path = write(tmp_path / "g.g", "graph 4\n2 3\n")
        plain = runner.invoke(cli, ["complexity", path]).output
        canonical = runner.invoke(cli, ["complexity", path, "--canonical"]).output
        assert plain.split()[0] == canonical.split()[0] == "2"

    def test_complexity_of_sequence_file(self, runner, tmp_path):
        path = write(tmp_path / "seq.fa", ">s\naaaaaaaa\n")
        result = runner.invoke(cli, ["complexity", path])
        assert result.output.split() == ["8", "9", "4"]

    def test_lzw_round_trip(self, runner, tmp_path):
        data = write(tmp_path / "data.txt", "ababab")
        compressed = runner.invoke(cli, ["lzw", "compress", data, "--alphabet", "ab"])
        assert compressed.output.strip() == "0 1 2 2"
        codes = write(tmp_path / "codes.txt", compressed.output)
        result = runner.invoke(cli, ["lzw", "decompress", codes, "--alphabet", "ab"])
        assert result.output.strip() == "ababab"

    def test_lzw_symbol_outside_alphabet(self, runner, tmp_path):
        data = write(tmp_path / "data.txt", "abc")
        result = runner.invoke(cli, ["lzw", "compress", data, "--alphabet", "ab"])
        assert result.exit_code == 1
