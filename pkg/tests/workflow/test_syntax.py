import pytest

from encbench.calculus import ccs, csp
from encbench.calculus.errors import SourceSyntaxError
from encbench.calculus.names import source_name
from encbench.workflow.syntax import parse_source, parse_target, print_source, print_target

a, b, c = (source_name(n) for n in "abc")


def test_parse_example(term_e):
    assert isinstance(term_e, csp.Par)
    assert term_e.sync == frozenset({source_name("o"), source_name("p")})
    assert [str(x) for x, _ in term_e.right.branches] == ["o", "p", "q"]
    assert print_source(term_e) == (
        "o -> STOP [] p -> STOP |[o, p]| o -> STOP [] p -> STOP [] q -> STOP"
    )


def test_binding_strength():
    p = parse_source("a -> STOP [] b -> STOP |~| c -> STOP / c")
    assert isinstance(p, csp.IntChoice)
    assert isinstance(p.left, csp.ExtSum) and len(p.left.branches) == 2
    assert isinstance(p.right, csp.Conceal)


def test_comments_and_newlines():
    p = parse_source("-- a choice\na -> STOP\n[] b -> TICK")
    assert p == parse_source("a -> STOP [] b -> TICK")


@pytest.mark.parametrize(
    "text",
    [
        "a -> STOP [] b -> TICK",
        "a -> b -> STOP",
        "(a -> STOP |~| b -> STOP) |[a]| a -> TICK",
        "a -> (mu X . a -> X)",
        "mu X . a -> X [] b -> STOP",
        "rn {a -> b, b -> a} a -> STOP",
        "(a -> b -> STOP) / a / b",
        "DIV |[]| TICK",
    ],
)
def test_source_round_trip(text):
    p = parse_source(text)
    assert parse_source(print_source(p)) == p


def test_definitions_use_earlier_ones():
    p = parse_source("a -> Q", {"P": "TICK", "Q": "b -> P"})
    assert p == parse_source("a -> b -> TICK")


def test_definition_names_are_uppercase():
    with pytest.raises(ValueError, match="uppercase"):
        parse_source("a -> STOP", {"p": "STOP"})


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("a -> ", 1, 6),
        ("a -> STOP [] STOP", 1, 14),
        ("a -> STOP\n  [] (b -> STOP |~| c -> STOP)", 2, 6),
        ("a -> STOP )", 1, 11),
        ("a -> STOP $", 1, 11),
        ("mu x . a -> x", 1, 4),
    ],
)
def test_source_syntax_errors(text, line, column):
    with pytest.raises(SourceSyntaxError) as err:
        parse_source(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_unbound_variable():
    with pytest.raises(SourceSyntaxError, match="Unbound process variable P"):
        parse_source("a -> P")


def test_parse_target():
    t = parse_target("(new x) a<x> | a(y).[y=x]TICK | !b(z).z<>")
    assert isinstance(t, ccs.Par)
    assert isinstance(t.left, ccs.Res)
    assert isinstance(t.right, ccs.Par)
    assert isinstance(t.right.right, ccs.RepInput)


@pytest.mark.parametrize(
    "text",
    [
        "a<b> | c(x).x<> | 0",
        "(new x,y) (x<y> | x(z).z<>)",
        "(a<> | b<>) | c<>",
        "!a(x,y).[x=y]TICK",
        "a().b().0",
    ],
)
def test_target_round_trip(text):
    t = parse_target(text)
    assert parse_target(print_target(t)) == t


def test_target_repeated_parameter():
    with pytest.raises(ValueError, match="Repeated parameter"):
        parse_target("a(x,x).0")


def test_target_syntax_error():
    with pytest.raises(SourceSyntaxError) as err:
        parse_target("(new ) a<>")
    assert err.value.line == 1
