from __future__ import annotations

from typing import Iterable, Mapping

from encbench.calculus import ccs, csp
from encbench.calculus.canonical import canonicalize
from encbench.calculus.names import Name, source_name
from encbench.encoder.coordinators import Coordinator, encode
from encbench.encoder.policy import RenamingPolicy, make_renaming_policy
from encbench.equivalence.verdict import Verdict, combine

SourceRenaming = Mapping[Name, Name]


def check_injective(sigma: SourceRenaming, names: Iterable[Name]) -> None:
    names = set(names)
    images = [sigma.get(n, n) for n in names]
    if len(set(images)) != len(images):
        raise ValueError(f"Renaming is not injective on {sorted(map(str, names))}")


def induced_renaming(
    sigma: SourceRenaming, policy: RenamingPolicy, renamed_policy: RenamingPolicy
) -> dict[Name, Name]:
    """σ′ applied triple-wise: φ(a)ᵢ ↦ φ(σ(a))ᵢ."""
    induced = {}
    for a in policy.order:
        for before, after in zip(policy.triple(a), renamed_policy.triple(sigma.get(a, a))):
            if before != after:
                induced[before] = after
    return induced


def check_name_invariance(
    p: csp.SourceProcess,
    sigma: SourceRenaming,
    coordinator: Coordinator = Coordinator.CENTRAL,
) -> Verdict:
    """⟦σ(p)⟧ and σ′(⟦p⟧) have the same canonical form."""
    names = csp.source_names(p)
    check_injective(sigma, names)
    renamed = csp.rename_source(p, sigma)
    policy = make_renaming_policy(names)
    renamed_policy = make_renaming_policy(csp.source_names(renamed))
    left = canonicalize(encode(renamed, coordinator, renamed_policy))
    right = canonicalize(
        ccs.substitute(encode(p, coordinator, policy), induced_renaming(sigma, policy, renamed_policy))
    )
    if left != right:
        return Verdict.fails(
            "canonical-form",
            renaming={str(k): str(v) for k, v in sigma.items()},
            atoms=[len(left.atoms), len(right.atoms)],
        )
    return Verdict.holds(renaming={str(k): str(v) for k, v in sigma.items()})


def default_renamings(p: csp.SourceProcess) -> list[dict[Name, Name]]:
    """Identity, a swap of the first two names, and a fresh name for the first."""
    names = csp.source_names(p)
    renamings: list[dict[Name, Name]] = [{}]
    if len(names) >= 2:
        renamings.append({names[0]: names[1], names[1]: names[0]})
    if names:
        taken = {n.ident for n in names}
        fresh = names[0].ident + "_renamed"
        while fresh in taken:
            fresh += "_"
        renamings.append({names[0]: source_name(fresh)})
    return renamings


def check_name_invariance_all(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    renamings: Iterable[SourceRenaming] | None = None,
) -> Verdict:
    renamings = list(renamings) if renamings is not None else default_renamings(p)
    verdicts = [check_name_invariance(p, sigma, coordinator) for sigma in renamings]
    result = combine(verdicts)
    if result.is_true:
        return Verdict.holds(renamings=len(verdicts))
    return result
