"""Finite observement systems and mechanical checks of their defining conditions.

An observement system couples a finite set of objects (with named relations)
to a finite set of observation values (with named relations) through one or
more observation algorithms.  Because everything is finite and explicit, the
three defining conditions are decidable by plain enumeration:

* representation: the algorithm's mapping is a homomorphism, meaning each
  object relation holds on a tuple exactly when the paired observation
  relation holds on the mapped tuple (both directions of the biconditional);
* existence: at least one of the supplied algorithms satisfies representation;
* uniqueness: for every ordered pair of valid algorithms there is a
  translation function between their observation values that commutes with
  both mappings and preserves the paired relations.

A system meeting all three conditions classifies as strong; one that passes
representation and existence but lacks some translation is weak.  Numeric
measurement is the special case where observation values happen to be
numbers.

All types here are immutable values and all operations are pure functions,
so concurrent use needs no coordination.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, ObservementError

DEFAULT_FUNCTION_CAP = 10**6

_SECTION_KEYWORDS = frozenset({"OBJECTS", "OBSERVATIONS", "RELATION", "MAP", "PAIR"})


class SystemDefinitionError(ObservementError):
    """An object system, observation system, or algorithm violates its invariants."""


class TranslationSearchError(CapExceeded):
    """The translation search space exceeds the configured candidate cap."""


class FixtureFormatError(ObservementError):
    """A system fixture file is malformed."""


def _normalise(kind: str, members, relations, arities) -> tuple:
    members = frozenset(members)
    for m in members:
        if not isinstance(m, str) or not m:
            raise SystemDefinitionError(f"{kind} identifiers must be non-empty strings, got {m!r}")
    out_relations: dict[str, frozenset] = {}
    out_arities: dict[str, int] = {}
    for name, tuples in relations.items():
        tuples = frozenset(tuple(t) for t in tuples)
        declared = arities.get(name)
        seen = {len(t) for t in tuples}
        if len(seen) > 1:
            raise SystemDefinitionError(f"relation {name!r} mixes arities {sorted(seen)}")
        if seen:
            arity = seen.pop()
            if declared is not None and declared != arity:
                raise SystemDefinitionError(
                    f"relation {name!r} declared with arity {declared} but holds {arity}-tuples"
                )
        elif declared is not None:
            arity = declared
        else:
            raise SystemDefinitionError(
                f"relation {name!r} is empty; declare its arity explicitly"
            )
        if arity < 1:
            raise SystemDefinitionError(f"relation {name!r} must have arity >= 1")
        for t in tuples:
            for x in t:
                if x not in members:
                    raise SystemDefinitionError(
                        f"relation {name!r} references {x!r}, not a declared {kind}"
                    )
        out_relations[name] = tuples
        out_arities[name] = arity
    for name in arities:
        if name not in relations:
            raise SystemDefinitionError(f"arity declared for unknown relation {name!r}")
    return members, out_relations, out_arities


@dataclass(frozen=True)
class ObjectSystem:
    """A finite set of object identifiers with named, fixed-arity relations."""

    objects: frozenset
    relations: dict = field(default_factory=dict)
    arities: dict = field(default_factory=dict)

    def __post_init__(self):
        members, relations, arities = _normalise("object", self.objects, self.relations, self.arities)
        object.__setattr__(self, "objects", members)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "arities", arities)


@dataclass(frozen=True)
class ObservationSystem:
    """A finite set of observation values with named, fixed-arity relations."""

    observations: frozenset
    relations: dict = field(default_factory=dict)
    arities: dict = field(default_factory=dict)

    def __post_init__(self):
        members, relations, arities = _normalise(
            "observation", self.observations, self.relations, self.arities
        )
        object.__setattr__(self, "observations", members)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "arities", arities)


@dataclass(frozen=True)
class ObservationAlgorithm:
    """A named total mapping from objects to observations.

    ``relation_pairing`` says which observation relation mirrors each object
    relation; it must cover every object relation exactly once.
    """

    name: str
    mapping: dict
    relation_pairing: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        object.__setattr__(self, "relation_pairing", dict(self.relation_pairing))

    def image(self) -> frozenset:
        """Observation values this algorithm can actually produce."""
        return frozenset(self.mapping.values())


@dataclass(frozen=True)
class Counterexample:
    relation: str
    members: tuple
    direction: str  # "forward": tuple related, images not; "backward": images related, tuple not

    def __str__(self):
        arrow = "=>" if self.direction == "forward" else "<="
        return f"{self.relation}({', '.join(self.members)}) fails {arrow}"


@dataclass(frozen=True)
class HomomorphismReport:
    """Outcome of the representation check; holds iff no counterexamples."""

    holds: bool
    counterexamples: tuple = ()

    def __post_init__(self):
        if self.holds != (not self.counterexamples):
            raise SystemDefinitionError("holds flag contradicts counterexample list")


@dataclass(frozen=True)
class TranslationWitness:
    """A function table between observation values, or absence of one.

    ``mapping is None`` means the exhaustive search proved no translation
    exists (distinct from the search being capped, which raises).
    """

    mapping: dict | None

    @property
    def found(self) -> bool:
        return self.mapping is not None


class Classification(enum.Enum):
    STRONG = "Strong"
    WEAK = "Weak"
    NOT_OBSERVEMENT = "NotObservement"


def _check_algorithm(system: ObjectSystem, observations: ObservationSystem,
                     algorithm: ObservationAlgorithm) -> None:
    missing = sorted(system.objects - set(algorithm.mapping))
    if missing:
        raise SystemDefinitionError(
            f"algorithm {algorithm.name!r} is not total: no observation for {missing}"
        )
    stray = sorted(set(algorithm.mapping) - system.objects)
    if stray:
        raise SystemDefinitionError(
            f"algorithm {algorithm.name!r} maps unknown objects {stray}"
        )
    bad_values = sorted({v for v in algorithm.mapping.values() if v not in observations.observations})
    if bad_values:
        raise SystemDefinitionError(
            f"algorithm {algorithm.name!r} maps into unknown observations {bad_values}"
        )
    if set(algorithm.relation_pairing) != set(system.relations):
        raise SystemDefinitionError(
            f"algorithm {algorithm.name!r} must pair every object relation exactly once; "
            f"expected {sorted(system.relations)}, got {sorted(algorithm.relation_pairing)}"
        )
    for r_name, p_name in algorithm.relation_pairing.items():
        if p_name not in observations.relations:
            raise SystemDefinitionError(
                f"algorithm {algorithm.name!r} pairs {r_name!r} with unknown relation {p_name!r}"
            )
        if system.arities[r_name] != observations.arities[p_name]:
            raise SystemDefinitionError(
                f"paired relations {r_name!r}/{p_name!r} disagree on arity "
                f"({system.arities[r_name]} vs {observations.arities[p_name]})"
            )


def verify_representation(system: ObjectSystem, observations: ObservationSystem,
                          algorithm: ObservationAlgorithm) -> HomomorphismReport:
    """Check the representation condition for one algorithm, exhaustively.

    Every tuple over the object set is checked in both directions: a related
    tuple must map to a related image, and an unrelated tuple must not map
    into the paired observation relation.
    """
    _check_algorithm(system, observations, algorithm)
    h = algorithm.mapping
    counterexamples = []
    for r_name in sorted(algorithm.relation_pairing):
        p_name = algorithm.relation_pairing[r_name]
        r = system.relations[r_name]
        p = observations.relations[p_name]
        k = system.arities[r_name]
        for members in itertools.product(sorted(system.objects), repeat=k):
            in_r = members in r
            in_p = tuple(h[x] for x in members) in p
            if in_r and not in_p:
                counterexamples.append(Counterexample(r_name, members, "forward"))
            elif in_p and not in_r:
                counterexamples.append(Counterexample(r_name, members, "backward"))
    return HomomorphismReport(not counterexamples, tuple(counterexamples))


def verify_existence(algorithms: Iterable[ObservationAlgorithm], system: ObjectSystem,
                     observations: ObservationSystem) -> bool:
    """True iff at least one listed algorithm passes the representation check.

    Malformed algorithms count as failing rather than raising, so an empty or
    entirely broken list simply yields False.
    """
    for algorithm in algorithms:
        try:
            if verify_representation(system, observations, algorithm).holds:
                return True
        except SystemDefinitionError:
            continue
    return False


def _is_translation(f: dict, alg_a: ObservationAlgorithm, alg_b: ObservationAlgorithm,
                    system: ObjectSystem, obs_a: ObservationSystem,
                    obs_b: ObservationSystem) -> bool:
    for x in system.objects:
        if f[alg_a.mapping[x]] != alg_b.mapping[x]:
            return False
    for r_name in system.relations:
        p_a = obs_a.relations[alg_a.relation_pairing[r_name]]
        p_b = obs_b.relations[alg_b.relation_pairing[r_name]]
        k = system.arities[r_name]
        for members in itertools.product(system.objects, repeat=k):
            image_a = tuple(alg_a.mapping[x] for x in members)
            image_b = tuple(f[alg_a.mapping[x]] for x in members)
            if (image_a in p_a) != (image_b in p_b):
                return False
    return True


def find_translation(alg_a: ObservationAlgorithm, alg_b: ObservationAlgorithm,
                     system: ObjectSystem, obs_a: ObservationSystem,
                     obs_b: ObservationSystem, cap: int = DEFAULT_FUNCTION_CAP) -> TranslationWitness:
    """Search for a translation from ``alg_a``'s observations to ``alg_b``'s.

    Candidates are all functions from the image of ``alg_a`` into the
    observation set of ``obs_b``, enumerated in lexicographic order over the
    sorted identifiers; the first one that commutes with both mappings and
    preserves every paired relation is returned.  Exhausting the space proves
    absence.  A space larger than ``cap`` raises TranslationSearchError so
    that "proved absent" is never conflated with "gave up".
    """
    for alg, obs in ((alg_a, obs_a), (alg_b, obs_b)):
        report = verify_representation(system, obs, alg)
        if not report.holds:
            raise SystemDefinitionError(
                f"algorithm {alg.name!r} fails the representation condition; "
                "translations are only defined between valid algorithms"
            )
    domain = sorted(alg_a.image())
    codomain = sorted(obs_b.observations)
    if domain and not codomain:
        return TranslationWitness(None)
    space = len(codomain) ** len(domain)
    if space > cap:
        raise TranslationSearchError(
            f"search exhausted: {space} candidate functions exceed the cap of {cap}"
        )
    for values in itertools.product(codomain, repeat=len(domain)):
        f = dict(zip(domain, values))
        if _is_translation(f, alg_a, alg_b, system, obs_a, obs_b):
            return TranslationWitness(f)
    return TranslationWitness(None)


def classify(system: ObjectSystem, observation_systems: Sequence[ObservationSystem],
             algorithms: Sequence[ObservationAlgorithm],
             cap: int = DEFAULT_FUNCTION_CAP) -> Classification:
    """Classify a system as Strong, Weak, or NotObservement.

    ``algorithms[i]`` is read against ``observation_systems[i]``.  The verdict
    depends only on set contents, never on the ordering of objects,
    observations, or the algorithm list.
    """
    if len(observation_systems) != len(algorithms):
        raise SystemDefinitionError(
            f"{len(algorithms)} algorithms but {len(observation_systems)} observation systems"
        )
    valid = []
    for alg, obs in zip(algorithms, observation_systems):
        try:
            if verify_representation(system, obs, alg).holds:
                valid.append((alg, obs))
        except SystemDefinitionError:
            continue
    if not valid:
        return Classification.NOT_OBSERVEMENT
    for (alg_a, obs_a), (alg_b, obs_b) in itertools.permutations(valid, 2):
        if not find_translation(alg_a, alg_b, system, obs_a, obs_b, cap=cap).found:
            return Classification.WEAK
    return Classification.STRONG


# ---------------------------------------------------------------------------
# Fixture file format
#
# Plain text, whitespace-separated tokens, '#' comment lines.  Sections:
#   OBJECTS                  one or more lines of object identifiers
#   OBSERVATIONS             one or more lines of observation identifiers
#   RELATION <name>/<arity>  one tuple per line; attaches to whichever of
#                            OBJECTS / OBSERVATIONS appeared most recently
#   MAP <algorithm-name>     lines of "object observation" pairs
#   PAIR                     lines of "object-relation observation-relation";
#                            attaches to the most recent MAP
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemFixture:
    system: ObjectSystem
    observations: ObservationSystem
    algorithms: tuple

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))


def parse_system_file(text: str) -> SystemFixture:
    """Parse the fixture file format into a system, observations, and algorithms."""
    objects: list[str] = []
    observations: list[str] = []
    obj_relations: dict[str, set] = {}
    obs_relations: dict[str, set] = {}
    obj_arities: dict[str, int] = {}
    obs_arities: dict[str, int] = {}
    algorithms: list[dict] = []

    section = None        # ("OBJECTS",) / ("OBSERVATIONS",) / ("RELATION", side, name) /
    universe = None       # "OBJECTS" or "OBSERVATIONS"; where RELATION attaches
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "OBJECTS":
            if len(tokens) > 1:
                raise FixtureFormatError(f"line {lineno}: OBJECTS takes no arguments")
            section = ("OBJECTS",)
            universe = "OBJECTS"
            continue
        if head == "OBSERVATIONS":
            if len(tokens) > 1:
                raise FixtureFormatError(f"line {lineno}: OBSERVATIONS takes no arguments")
            section = ("OBSERVATIONS",)
            universe = "OBSERVATIONS"
            continue
        if head == "RELATION":
            if len(tokens) != 2 or "/" not in tokens[1]:
                raise FixtureFormatError(f"line {lineno}: expected RELATION <name>/<arity>")
            name, _, arity_text = tokens[1].rpartition("/")
            if not name:
                raise FixtureFormatError(f"line {lineno}: relation name is empty")
            try:
                arity = int(arity_text)
            except ValueError:
                raise FixtureFormatError(f"line {lineno}: bad arity {arity_text!r}") from None
            if universe is None:
                raise FixtureFormatError(
                    f"line {lineno}: RELATION before any OBJECTS or OBSERVATIONS section"
                )
            target = obj_relations if universe == "OBJECTS" else obs_relations
            arities = obj_arities if universe == "OBJECTS" else obs_arities
            if name in target:
                raise FixtureFormatError(f"line {lineno}: duplicate relation {name!r}")
            target[name] = set()
            arities[name] = arity
            section = ("RELATION", universe, name)
            continue
        if head == "MAP":
            if len(tokens) != 2:
                raise FixtureFormatError(f"line {lineno}: expected MAP <algorithm-name>")
            algorithms.append({"name": tokens[1], "mapping": {}, "pairing": {}})
            section = ("MAP",)
            continue
        if head == "PAIR":
            if len(tokens) > 1:
                raise FixtureFormatError(f"line {lineno}: PAIR takes no arguments")
            if not algorithms:
                raise FixtureFormatError(f"line {lineno}: PAIR before any MAP section")
            section = ("PAIR",)
            continue

        # Data line inside the current section.
        if section is None:
            raise FixtureFormatError(f"line {lineno}: data before any section header")
        kind = section[0]
        if kind == "OBJECTS":
            objects.extend(tokens)
        elif kind == "OBSERVATIONS":
            observations.extend(tokens)
        elif kind == "RELATION":
            _, side, name = section
            arities = obj_arities if side == "OBJECTS" else obs_arities
            if len(tokens) != arities[name]:
                raise FixtureFormatError(
                    f"line {lineno}: relation {name!r} has arity {arities[name]}, "
                    f"got {len(tokens)} tokens"
                )
            target = obj_relations if side == "OBJECTS" else obs_relations
            target[name].add(tuple(tokens))
        elif kind == "MAP":
            if len(tokens) != 2:
                raise FixtureFormatError(f"line {lineno}: expected 'object observation'")
            alg = algorithms[-1]
            if tokens[0] in alg["mapping"]:
                raise FixtureFormatError(f"line {lineno}: object {tokens[0]!r} mapped twice")
            alg["mapping"][tokens[0]] = tokens[1]
        elif kind == "PAIR":
            if len(tokens) != 2:
                raise FixtureFormatError(
                    f"line {lineno}: expected 'object-relation observation-relation'"
                )
            alg = algorithms[-1]
            if tokens[0] in alg["pairing"]:
                raise FixtureFormatError(f"line {lineno}: relation {tokens[0]!r} paired twice")
            alg["pairing"][tokens[0]] = tokens[1]

    try:
        system = ObjectSystem(frozenset(objects), obj_relations, obj_arities)
        obs_system = ObservationSystem(frozenset(observations), obs_relations, obs_arities)
        algs = tuple(
            ObservationAlgorithm(a["name"], a["mapping"], a["pairing"]) for a in algorithms
        )
    except SystemDefinitionError as exc:
        raise FixtureFormatError(str(exc)) from exc
    for alg in algs:
        for obj, value in alg.mapping.items():
            if obj not in system.objects:
                raise FixtureFormatError(f"MAP {alg.name}: unknown object {obj!r}")
            if value not in obs_system.observations:
                raise FixtureFormatError(f"MAP {alg.name}: unknown observation {value!r}")
        for r_name, p_name in alg.relation_pairing.items():
            if r_name not in system.relations:
                raise FixtureFormatError(f"PAIR in {alg.name}: unknown object relation {r_name!r}")
            if p_name not in obs_system.relations:
                raise FixtureFormatError(
                    f"PAIR in {alg.name}: unknown observation relation {p_name!r}"
                )
    return SystemFixture(system, obs_system, algs)


def _check_token(token: str, what: str) -> str:
    if not token or token != token.strip() or any(c.isspace() for c in token):
        raise FixtureFormatError(f"{what} {token!r} cannot be written as a file token")
    if token in _SECTION_KEYWORDS:
        raise FixtureFormatError(f"{what} {token!r} collides with a section keyword")
    return token


def format_system_file(fixture: SystemFixture) -> str:
    """Serialize a fixture in canonical order; parse_system_file inverts this."""
    lines: list[str] = []

    def emit_members(header: str, members):
        lines.append(header)
        for m in sorted(members):
            lines.append(_check_token(m, "identifier"))

    def emit_relations(relations, arities):
        for name in sorted(relations):
            _check_token(name, "relation name")
            if "/" in name:
                raise FixtureFormatError(f"relation name {name!r} may not contain '/'")
            lines.append(f"RELATION {name}/{arities[name]}")
            for t in sorted(relations[name]):
                lines.append(" ".join(_check_token(x, "identifier") for x in t))

    emit_members("OBJECTS", fixture.system.objects)
    emit_relations(fixture.system.relations, fixture.system.arities)
    emit_members("OBSERVATIONS", fixture.observations.observations)
    emit_relations(fixture.observations.relations, fixture.observations.arities)
    for alg in fixture.algorithms:
        lines.append(f"MAP {_check_token(alg.name, 'algorithm name')}")
        for obj in sorted(alg.mapping):
            lines.append(f"{_check_token(obj, 'identifier')} "
                         f"{_check_token(alg.mapping[obj], 'identifier')}")
        if alg.relation_pairing:
            lines.append("PAIR")
            for r_name in sorted(alg.relation_pairing):
                lines.append(f"{_check_token(r_name, 'relation name')} "
                             f"{_check_token(alg.relation_pairing[r_name], 'relation name')}")
    return "\n".join(lines) + "\n"
