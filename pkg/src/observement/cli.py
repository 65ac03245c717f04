"""The ``observe`` command line tool.

One subcommand per subsystem operation, all reading and writing line-oriented
plain text.  Exit codes: 0 on success, 1 on a domain error (bad file content,
violated invariants, missing files), 2 on a usage error.  Randomized commands
take ``--seed`` and fall back to the OBSERVE_SEED environment variable, so
every run is reproducible.
"""

from __future__ import annotations

import functools

import click

from . import __version__, complexity, core, familytree, genetics, graphs, motifs, strings
from .errors import ObservementError


def _run(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ObservementError as exc:
            raise click.ClickException(str(exc)) from exc
    return wrapper


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise click.ClickException(str(exc)) from exc


_seed_option = click.option(
    "--seed", type=int, default=0, show_default=True, envvar="OBSERVE_SEED",
    help="Random seed (or set OBSERVE_SEED).",
)


@click.group()
@click.version_option(version=__version__, prog_name="observe")
def cli():
    """Work with observement systems: grammars, genes, motifs, graphs, kinship."""


def main():
    cli()


# --- observement systems ------------------------------------------------------


@cli.group()
def system():
    """Check observement-system fixture files."""


@system.command("classify")
@click.argument("fixture_file")
@_run
def system_classify(fixture_file):
    """Print Strong, Weak, or NotObservement for a fixture file."""
    fixture = core.parse_system_file(_read(fixture_file))
    shared = [fixture.observations] * len(fixture.algorithms)
    verdict = core.classify(fixture.system, shared, list(fixture.algorithms))
    click.echo(verdict.value)


@system.command("verify")
@click.argument("fixture_file")
@click.option("--alg", "algorithm_name", default=None, help="Check one algorithm only.")
@_run
def system_verify(fixture_file, algorithm_name):
    """Run the representation check for each algorithm in a fixture file."""
    fixture = core.parse_system_file(_read(fixture_file))
    selected = [
        a for a in fixture.algorithms
        if algorithm_name is None or a.name == algorithm_name
    ]
    if not selected:
        raise click.ClickException(f"no algorithm named {algorithm_name!r} in fixture")
    for algorithm in selected:
        report = core.verify_representation(fixture.system, fixture.observations, algorithm)
        if report.holds:
            click.echo(f"{algorithm.name}: holds")
        else:
            click.echo(f"{algorithm.name}: fails ({len(report.counterexamples)} counterexamples)")
            for ce in report.counterexamples:
                click.echo(f"  {ce}")


# --- grammars -------------------------------------------------------------------


@cli.group()
def grammar():
    """Parse grammars, test membership, generate strings."""


@grammar.command("check")
@click.argument("grammar_file")
@click.argument("string")
@_run
def grammar_check(grammar_file, string):
    """Print true/false: is STRING derivable in the grammar?"""
    g = strings.parse_grammar(_read(grammar_file))
    click.echo("true" if strings.membership(g, string) else "false")


@grammar.command("gen")
@click.argument("grammar_file")
@click.option("--max-len", type=int, required=True, help="Largest string length to derive.")
@_run
def grammar_gen(grammar_file, max_len):
    """Print every derivable string up to MAX_LEN, shortest first."""
    g = strings.parse_grammar(_read(grammar_file))
    for derived in strings.generate(g, max_len):
        click.echo(derived)


# --- genetics -------------------------------------------------------------------


@cli.command("translate")
@click.argument("seq_file")
@click.option("--table", "table_file", default=None, help="Codon table file (default: standard code).")
@click.option("--frame", is_flag=True, help="Raw frame translation, no gene checks.")
@_run
def translate(seq_file, table_file, frame):
    """Translate each DNA record of SEQ_FILE to its protein string."""
    table = genetics.CodonTable.from_text(_read(table_file)) if table_file else None
    records = genetics.read_sequence_records(_read(seq_file))
    if not records:
        raise click.ClickException("no sequence records in file")
    for _, dna in records:
        if frame:
            click.echo("".join(genetics.translate_frame(dna, table)))
        else:
            click.echo(genetics.translate_gene(dna, table))


# --- motifs ---------------------------------------------------------------------


def _read_sequences(path: str) -> list:
    text = _read(path)
    records = genetics.read_sequence_records(text)
    if records and any(name != "-" for name, _ in records):
        return records
    # Headerless: each nonempty line is its own sequence.
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    return [(str(i), line) for i, line in enumerate(lines)]


@cli.group()
def motif():
    """Match and derive string motif patterns."""


@motif.command("match")
@click.argument("pattern")
@click.argument("seq_file")
@click.option("--anchored", is_flag=True, help="Match at offset 0 only.")
@_run
def motif_match(pattern, seq_file, anchored):
    """Print match offsets of PATTERN in each sequence of SEQ_FILE."""
    parsed = motifs.parse_motif(pattern)
    for name, sequence in _read_sequences(seq_file):
        offsets = motifs.match_motif(parsed, sequence, anchored=anchored)
        click.echo(f"{name}\t{' '.join(map(str, offsets))}")


@motif.command("derive")
@click.argument("seqs_file")
@click.option("--class-cap", type=int, required=True,
              help="Largest symbol class before a column becomes a wildcard.")
@_run
def motif_derive(seqs_file, class_cap):
    """Print the motif shared by the equal-length sequences in SEQS_FILE."""
    sequences = [sequence for _, sequence in _read_sequences(seqs_file)]
    click.echo(motifs.format_motif(motifs.derive_motif(sequences, class_cap)))


# --- graphs ---------------------------------------------------------------------


@cli.group()
def graph():
    """Convert, compare, and census graphs."""


@graph.command("convert")
@click.argument("graph_file")
@click.option("--to", "target", required=True,
              type=click.Choice(["edges", "adjlist", "matrix", "g6"]))
@_run
def graph_convert(graph_file, target):
    """Re-express a graph file as edges, adjlist, matrix, or g6 text."""
    g = graphs.parse_graph_text(_read(graph_file))
    if target == "edges":
        click.echo(graphs.format_graph_file(g), nl=False)
    elif target == "adjlist":
        click.echo(graphs.format_adjacency_text(g), nl=False)
    elif target == "matrix":
        click.echo(graphs.format_matrix_text(g), nl=False)
    else:
        if not isinstance(g, graphs.Graph):
            raise click.ClickException("graph6 encodes undirected graphs only")
        click.echo(graphs.encode_graph6(g))


def _echo_mapping(mapping):
    if mapping is None:
        click.echo("none")
    else:
        for v in sorted(mapping):
            click.echo(f"{v} {mapping[v]}")


@graph.command("iso")
@click.argument("file_a")
@click.argument("file_b")
@_run
def graph_iso(file_a, file_b):
    """Print a vertex bijection between two graphs, or 'none'."""
    g1 = graphs.parse_graph_text(_read(file_a))
    g2 = graphs.parse_graph_text(_read(file_b))
    _echo_mapping(graphs.are_isomorphic(g1, g2))


@graph.command("sub")
@click.argument("small_file")
@click.argument("big_file")
@_run
def graph_sub(small_file, big_file):
    """Print an embedding of the first graph into the second, or 'none'."""
    small = graphs.parse_graph_text(_read(small_file))
    big = graphs.parse_graph_text(_read(big_file))
    _echo_mapping(graphs.is_subgraph(small, big))


@graph.command("motifs")
@click.argument("graph_file")
@click.option("-k", type=click.Choice(["3", "4"]), default="3", show_default=True)
@click.option("--significance", type=int, default=0, show_default=True,
              help="Number of rewired null-model samples (0 = none).")
@_seed_option
@_run
def graph_motifs(graph_file, k, significance, seed):
    """Print the k-vertex motif census as TSV: id, count, background."""
    g = graphs.parse_graph_text(_read(graph_file))
    if significance > 0:
        census = motifs.motif_significance(g, int(k), significance, seed)
    else:
        census = motifs.count_network_motifs(g, int(k))
    for identifier in sorted(census.counts):
        background = "NA"
        if census.background is not None:
            background = f"{census.background.get(identifier, 0.0):.6f}"
        click.echo(f"{identifier}\t{census.counts[identifier]}\t{background}")


@cli.group()
def automaton():
    """Work with finite automata."""


@automaton.command("graph")
@click.argument("automaton_file")
@_run
def automaton_graph(automaton_file):
    """Print the state-space digraph of an automaton file."""
    machine = graphs.parse_automaton_file(_read(automaton_file))
    for index, state in enumerate(graphs.state_order(machine)):
        click.echo(f"# {index} {state}")
    click.echo(graphs.format_graph_file(graphs.state_space_graph(machine)), nl=False)


@cli.command("percolate")
@click.option("-n", "n", type=int, required=True, help="Vertex count.")
@click.option("--p-from", type=float, required=True)
@click.option("--p-to", type=float, required=True)
@click.option("--steps", type=int, required=True, help="Number of probe points.")
@click.option("--trials", type=int, required=True, help="Random graphs per probe point.")
@_seed_option
@_run
def percolate(n, p_from, p_to, steps, trials, seed):
    """Print CSV of mean largest-component fraction across edge probabilities."""
    if steps < 1:
        raise click.ClickException("--steps must be >= 1")
    if steps == 1:
        p_values = [p_from]
    else:
        p_values = [p_from + i * (p_to - p_from) / (steps - 1) for i in range(steps)]
    click.echo("p,mean_fraction")
    for p, fraction in graphs.percolation_sweep(n, p_values, trials, seed):
        click.echo(f"{p:.6g},{fraction:.6f}")


# --- family trees ----------------------------------------------------------------


@cli.group()
def tree():
    """Query kinship files."""


@tree.command("query")
@click.argument("kinship_file")
@click.argument("relation")
@click.argument("u")
@click.argument("v")
@_run
def tree_query(kinship_file, relation, u, v):
    """Print true/false for one of the six kinship relations."""
    g = familytree.parse_kinship_file(_read(kinship_file))
    click.echo("true" if familytree.query(g, relation, u, v) else "false")


@tree.command("descendants")
@click.argument("kinship_file")
@click.argument("person")
@_run
def tree_descendants(kinship_file, person):
    """Print every descendant of PERSON, one per line."""
    g = familytree.parse_kinship_file(_read(kinship_file))
    for name in sorted(familytree.descendants(g, person)):
        click.echo(name)


# --- complexity -------------------------------------------------------------------


def _looks_like_graph(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()[0]
        return head in ("graph", "digraph", "matrix", "dmatrix", "adjlist", "dadjlist")
    return False


@cli.command("complexity")
@click.argument("input_file")
@click.option("--canonical", is_flag=True,
              help="Minimize the graph code over vertex permutations first.")
@_run
def complexity_command(input_file, canonical):
    """Print TSV 'total primary secondary' for a graph file or a sequence file."""
    text = _read(input_file)
    if _looks_like_graph(text):
        value = graphs.parse_graph_text(text)
        if not isinstance(value, graphs.Graph):
            raise click.ClickException("complexity is defined for undirected graph files")
        report = complexity.relative_complexity(value, canonical=canonical)
    else:
        records = genetics.read_sequence_records(text)
        if not records:
            raise click.ClickException("no sequence records in file")
        report = complexity.relative_complexity("".join(seq for _, seq in records))
    click.echo(f"{report.total}\t{report.primary_order}\t{report.secondary_order}")


@cli.group()
def lzw():
    """Dictionary compression of symbol strings."""


@lzw.command("compress")
@click.argument("input_file")
@click.option("--alphabet", required=True, help="Dictionary seed symbols, in order.")
@_run
def lzw_compress_command(input_file, alphabet):
    """Print the LZW code stream of the file's text (one line, space-separated)."""
    text = _read(input_file).rstrip("\n")
    output = complexity.lzw_compress(text, alphabet)
    click.echo(" ".join(map(str, output.codes)))


@lzw.command("decompress")
@click.argument("input_file")
@click.option("--alphabet", required=True, help="Dictionary seed symbols, in order.")
@_run
def lzw_decompress_command(input_file, alphabet):
    """Print the string for a whitespace-separated code stream file."""
    tokens = _read(input_file).split()
    try:
        codes = [int(t) for t in tokens]
    except ValueError as exc:
        raise click.ClickException(f"bad code in input: {exc}") from exc
    click.echo(complexity.lzw_decompress(codes, alphabet))
