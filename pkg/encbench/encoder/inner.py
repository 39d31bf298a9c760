"""Inner encoding of source terms into target terms.

Every encoded component announces its attempts on a channel `act` as
act⟨c, req, lock, simu⟩: the reference name of the action, a request channel,
the lock to test and the channel receiving the coordinator's verdict.
Operators that change or synchronise actions intercept their children's
announcements on a private act channel and forward them upwards.
"""

from __future__ import annotations

from typing import Mapping

from encbench.calculus import ccs, csp
from encbench.calculus.names import Name
from encbench.encoder.abbreviations import (
    expand_bool,
    expand_if,
    expand_match_set,
    expand_replicated_if,
)
from encbench.encoder.policy import RenamingPolicy, ReservedNames


class InnerEncoder:
    """Translate one source term; names come from one `ReservedNames` counter."""

    def __init__(self, policy: RenamingPolicy, reserved: ReservedNames):
        self.policy = policy
        self.reserved = reserved

    def encode(
        self,
        p: csp.SourceProcess,
        act: Name,
        variables: Mapping[str, Name] | None = None,
    ) -> ccs.TargetProcess:
        variables = variables or {}
        match p:
            case csp.Stop():
                return ccs.Nil()
            case csp.Success():
                return ccs.Success()
            case csp.Div():
                return self._divergence()
            case csp.Var(var):
                return ccs.out(variables[var])
            case csp.Mu(var, body):
                x = self.reserved.fresh("x")
                inner = self.encode(body, act, {**variables, var: x})
                return ccs.res((x,), ccs.par(ccs.out(x), ccs.rep(x, (), inner)))
            case csp.IntChoice(left, right):
                mu = self.reserved.fresh("mu")
                return ccs.res(
                    (mu,),
                    ccs.par(
                        ccs.inp(mu, (), self.encode(left, act, variables)),
                        ccs.inp(mu, (), self.encode(right, act, variables)),
                        ccs.out(mu),
                    ),
                )
            case csp.ExtSum(branches):
                return self._sum(branches, act, variables)
            case csp.Conceal(body, hidden):
                redirect = {self.policy.ref(hidden): self.policy.tau}
                passed = self.policy.sort(csp.alphabet(body) - {hidden})
                return self._wrapper(body, act, variables, redirect, passed, (self.policy.ref(hidden),))
            case csp.Rename(body, mapping):
                redirect = {self.policy.ref(x): self.policy.ref(fx) for x, fx in mapping}
                passed = self.policy.sort(csp.alphabet(body) - set(p.domain))
                return self._wrapper(body, act, variables, redirect, passed, ())
            case csp.Par(left, right, sync):
                return self._parallel(left, right, sync, act, variables)
        raise TypeError(f"Not a source process: {p!r}")

    # -- leaves -------------------------------------------------------------

    def _divergence(self) -> ccs.TargetProcess:
        rep = self.reserved.fresh("rep")
        return ccs.res((rep,), ccs.par(ccs.out(rep), ccs.rep(rep, (), ccs.out(rep))))

    def _release(self, req: Name, lock: Name) -> ccs.RepInput:
        """!req().lock⟨⊥⟩"""
        return ccs.rep(req, (), expand_bool(lock, False, self.reserved))

    def _sum(self, branches, act: Name, variables: Mapping[str, Name]) -> ccs.TargetProcess:
        req, lock = self.reserved.fresh("r"), self.reserved.fresh("l")
        simus = self.reserved.fresh_many("s", len(branches))
        components: list[ccs.TargetProcess] = [
            ccs.inp(req, (), expand_bool(lock, True, self.reserved))
        ]
        for (action, continuation), simu in zip(branches, simus):
            components.append(ccs.out(act, self.policy.ref(action), req, lock, simu))
            components.append(
                expand_replicated_if(
                    simu,
                    ccs.par(self.encode(continuation, act, variables), self._release(req, lock)),
                    ccs.inp(req, (), expand_bool(lock, True, self.reserved)),
                    self.reserved,
                )
            )
        return ccs.res((req, lock, *simus), ccs.par(*components))

    # -- forwarding -----------------------------------------------------------

    def _bridge(self, bridge: Name, act: Name) -> ccs.RepInput:
        """!act'(c, x̃).act⟨c, x̃⟩"""
        c = self.reserved.fresh("c")
        data = self.reserved.fresh_many("y", 3)
        return ccs.rep(bridge, (c, *data), ccs.out(act, c, *data))

    def _wrapper(
        self,
        body: csp.SourceProcess,
        act: Name,
        variables: Mapping[str, Name],
        redirect: dict[Name, Name],
        passed: list[Name],
        hidden_refs: tuple[Name, ...],
    ) -> ccs.TargetProcess:
        """Concealment and renaming: relabel intercepted announcements.

        Announcements on a key of `redirect` are forwarded with the mapped
        reference name; the names in `passed` and τ go through unchanged.
        """
        inner_act, bridge = self.reserved.fresh("act"), self.reserved.fresh("act'")
        c = self.reserved.fresh("c")
        data = self.reserved.fresh_many("y", 3)
        forwards = [
            ccs.Match(c, source, ccs.out(bridge, target, *data))
            for source, target in redirect.items()
        ]
        unchanged = [self.policy.ref(n) for n in passed] + [self.policy.tau]
        forwarder = ccs.rep(
            inner_act,
            (c, *data),
            ccs.par(*forwards, expand_match_set(c, unchanged, ccs.out(bridge, c, *data))),
        )
        return ccs.res(
            (bridge,),
            ccs.par(
                ccs.res(
                    (inner_act, *hidden_refs),
                    ccs.par(self.encode(body, inner_act, variables), forwarder),
                ),
                self._bridge(bridge, act),
            ),
        )

    # -- parallel composition -------------------------------------------------

    def _parallel(
        self,
        left: csp.SourceProcess,
        right: csp.SourceProcess,
        sync: frozenset[Name],
        act: Name,
        variables: Mapping[str, Name],
    ) -> ccs.TargetProcess:
        shared = self.policy.sort(sync)
        bridge = self.reserved.fresh("act'")
        sides = []
        for component, sync_channel in ((left, self.policy.left), (right, self.policy.right)):
            side_act = self.reserved.fresh("act")
            c = self.reserved.fresh("c")
            data = self.reserved.fresh_many("y", 3)
            to_sync = [
                ccs.Match(c, self.policy.ref(a), ccs.out(sync_channel(a), *data)) for a in shared
            ]
            passed = [self.policy.ref(n) for n in self.policy.sort(csp.alphabet(component) - sync)]
            forwarder = ccs.rep(
                side_act,
                (c, *data),
                ccs.par(
                    *to_sync,
                    expand_match_set(c, passed + [self.policy.tau], ccs.out(bridge, c, *data)),
                ),
            )
            sides.append(
                ccs.res((side_act,), ccs.par(self.encode(component, side_act, variables), forwarder))
            )
        restricted = [bridge]
        for a in shared:
            restricted += [self.policy.left(a), self.policy.right(a)]
        return ccs.res(
            restricted,
            ccs.par(*sides, *(self._synch(a, act) for a in shared), self._bridge(bridge, act)),
        )

    def _synch(self, a: Name, act: Name) -> ccs.TargetProcess:
        """Pair every left announcement of `a` with every right announcement.

        Each consumed left announcement opens a new level; right announcements
        are replayed to the current level and passed down to the next one.
        """
        reserved = self.reserved
        nxt, syn = reserved.fresh("mt"), reserved.fresh("syn")
        lreq, llock, lsimu = reserved.fresh("r"), reserved.fresh("l"), reserved.fresh("s")
        rreq, rlock, rsimu = reserved.fresh("r"), reserved.fresh("l"), reserved.fresh("s")
        syn_bridge, next_syn = reserved.fresh("syn'"), reserved.fresh("syn")
        relay = reserved.fresh_many("y", 3)
        req, lock, simu = reserved.fresh("r"), reserved.fresh("l"), reserved.fresh("s")

        attempt = ccs.res(
            (req, lock, simu),
            ccs.par(
                ccs.out(act, self.policy.ref(a), req, lock, simu),
                self._sim(lreq, llock, lsimu, rreq, rlock, rsimu, req, lock, simu),
            ),
        )
        level = ccs.res(
            (syn_bridge,),
            ccs.par(
                ccs.rep(
                    syn,
                    (rreq, rlock, rsimu),
                    ccs.par(attempt, ccs.out(syn_bridge, rreq, rlock, rsimu)),
                ),
                ccs.res(
                    (next_syn,),
                    ccs.par(
                        ccs.out(nxt, next_syn),
                        ccs.rep(syn_bridge, relay, ccs.out(next_syn, *relay)),
                    ),
                ),
            ),
        )
        return ccs.res(
            (nxt,),
            ccs.par(
                ccs.out(nxt, self.policy.right(a)),
                ccs.rep(nxt, (syn,), ccs.inp(self.policy.left(a), (lreq, llock, lsimu), level)),
            ),
        )

    def _sim(
        self,
        lreq: Name,
        llock: Name,
        lsimu: Name,
        rreq: Name,
        rlock: Name,
        rsimu: Name,
        req: Name,
        lock: Name,
        simu: Name,
    ) -> ccs.TargetProcess:
        """Combine the locks of two announcements into the lock of their pair."""
        reserved = self.reserved
        guard = reserved.fresh("l'")

        def value(chan: Name, v: bool) -> ccs.Input:
            return expand_bool(chan, v, reserved)

        reply = expand_if(
            simu,
            ccs.par(value(lsimu, True), value(rsimu, True), self._release(req, lock)),
            ccs.par(value(lsimu, False), value(rsimu, False), ccs.out(guard)),
            reserved,
        )
        right_test = expand_if(
            rlock,
            ccs.par(value(lock, True), reply),
            ccs.par(value(lock, False), value(lsimu, False), self._release(req, lock)),
            reserved,
        )
        left_test = expand_if(
            llock,
            ccs.par(ccs.out(rreq), right_test),
            ccs.par(value(lock, False), self._release(req, lock)),
            reserved,
        )
        return ccs.res(
            (guard,),
            ccs.par(
                ccs.out(guard),
                ccs.rep(guard, (), ccs.inp(req, (), ccs.par(ccs.out(lreq), left_test))),
            ),
        )


def encode_inner(
    p: csp.SourceProcess,
    policy: RenamingPolicy,
    reserved: ReservedNames | None = None,
    act: Name | None = None,
) -> ccs.TargetProcess:
    csp.check_well_formed(p)
    reserved = reserved or ReservedNames()
    return InnerEncoder(policy, reserved).encode(p, act or reserved.act)
