import random

from encbench.calculus import ccs
from encbench.calculus.names import source_name

# Nullary channels may be sent; unary channels carry one nullary name and are never sent.
NULLARY = tuple(source_name(n) for n in "abc")
UNARY = tuple(source_name(n) for n in "de")


class TermGenerator:
    """Seeded random target terms whose channels always agree on arity.

    Replicated inputs never output, so every generated term has a finite
    reduction graph.
    """

    def __init__(self, seed: int, depth: int = 3, width: int = 4):
        self.rng = random.Random(seed)
        self.depth = depth
        self.width = width
        self.counter = 0

    def fresh(self, prefix: str):
        self.counter += 1
        return source_name(f"{prefix}{self.counter}")

    def term(self) -> ccs.TargetProcess:
        bound = [self.fresh("n") for _ in range(self.rng.randint(0, 2))]
        pool = list(NULLARY) + bound
        parts = [self.component(pool, self.depth, True) for _ in range(self.rng.randint(1, self.width))]
        return ccs.res(bound, ccs.par(*parts))

    def component(self, pool, depth: int, may_output: bool) -> ccs.TargetProcess:
        rng = self.rng
        choices = ["nil", "success", "input"]
        if may_output:
            choices += ["output", "output", "send"]
        if depth > 0:
            choices += ["input", "receive", "match"]
            if may_output:
                choices += ["replicate"]
        match rng.choice(choices):
            case "nil":
                return ccs.Nil()
            case "success":
                return ccs.Success()
            case "output":
                return ccs.out(rng.choice(pool))
            case "send":
                return ccs.out(rng.choice(UNARY), rng.choice(pool))
            case "input":
                return ccs.inp(rng.choice(pool), (), self.body(pool, depth - 1, may_output))
            case "receive":
                param = self.fresh("p")
                return ccs.inp(rng.choice(UNARY), (param,), self.body(pool + [param], depth - 1, may_output))
            case "match":
                return ccs.Match(rng.choice(pool), rng.choice(pool), self.body(pool, depth - 1, may_output))
            case _:
                return ccs.rep(rng.choice(pool), (), self.body(pool, depth - 1, False))

    def body(self, pool, depth: int, may_output: bool) -> ccs.TargetProcess:
        if depth < 0:
            return ccs.Nil()
        parts = [self.component(pool, depth, may_output) for _ in range(self.rng.randint(1, 2))]
        return ccs.par(*parts)


def random_terms(seed: int, count: int) -> list[ccs.TargetProcess]:
    generator = TermGenerator(seed)
    return [generator.term() for _ in range(count)]
