"""Equational rewriting for bordism terms.

The rule tables present the algebra of the three-holed sphere: a commutative
Frobenius structure (CF), optionally extended with prime-label mobility
(legs) and the derivable two-sided forms (waist, colegs, cowaist,
primecomm). Every rule preserves the connectivity invariant, so rewriting
never changes the bordism a term denotes.

Rewrites act on the canonical layered form of a term through the kernel:
a rule side is a diagram window, located anywhere in a state up to the
structural congruence. find_path searches for an equational derivation
between two terms by bidirectional breadth-first search over these one-step
rewrites and returns a replayable trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cospan import cospan_of_term, terms_equal
from .kernel import (
    apply_insertion,
    apply_match,
    find_insertions,
    find_matches,
    nf,
    side_hull,
    successors,
)
from .layers import (
    GEN_CODES,
    intern_label,
    slice_path,
    state_to_term,
    term_to_state,
)
from .terms import (
    ArityMismatch,
    Compose,
    Gen,
    Tensor,
    Term,
    id_n,
    parse,
    permutation_term,
    print_term,
    replace_at,
    subterm_at,
    typecheck,
)

__all__ = [
    "Rule",
    "RULES",
    "RULE_SETS",
    "UnknownRuleSet",
    "NoMatch",
    "ruleset",
    "apply_rule",
    "find_path",
    "replay",
    "RewriteTrace",
    "NotFoundWithinBound",
    "normalize_G1",
    "normalize_G2",
    "verify_ruleset_soundness",
]


class UnknownRuleSet(KeyError):
    """Requested rule set name is not one of CF, CF_LEGS, G2_FULL."""

    def __str__(self) -> str:  # KeyError would wrap the message in quotes
        return self.args[0] if self.args else "unknown rule set"


class NoMatch(ValueError):
    """A rule does not apply at the requested position."""


@dataclass(frozen=True)
class Rule:
    """A bidirectional equation between two diagram windows."""

    name: str
    lhs: Term
    rhs: Term
    metavars: tuple[str, ...]


def _side(text: str) -> Term:
    """Parse a rule side; ?x metavariables are smuggled past the tokenizer."""
    term = parse(text.replace("?", "__mv_"))

    def walk(t: Term) -> Term:
        if isinstance(t, Gen):
            if t.label and t.label.startswith("__mv_"):
                return Gen(t.name, "?" + t.label[5:])
            return t
        if isinstance(t, Compose):
            return Compose(walk(t.f), walk(t.g))
        return Tensor(walk(t.l), walk(t.r))

    return walk(term)


def _rule(name: str, lhs: str, rhs: str) -> Rule:
    left, right = _side(lhs), _side(rhs)
    mvs: list[str] = []

    def collect(t: Term):
        if isinstance(t, Gen):
            if t.label and t.label.startswith("?") and t.label not in mvs:
                mvs.append(t.label)
        elif isinstance(t, Compose):
            collect(t.f)
            collect(t.g)
        elif isinstance(t, Tensor):
            collect(t.l)
            collect(t.r)

    collect(left)
    collect(right)
    if typecheck(left) != typecheck(right):
        raise ArityMismatch(f"rule {name} relates differently-typed sides")
    return Rule(name, left, right, tuple(sorted(mvs)))


_RULE_DEFS = [
    ("assoc", "m . (m * id)", "m . (id * m)"),
    ("comm", "m . swap", "m"),
    ("unit_l", "m . (unit * id)", "id"),
    ("unit_r", "m . (id * unit)", "id"),
    ("coassoc", "(comul * id) . comul", "(id * comul) . comul"),
    ("cocomm", "swap . comul", "comul"),
    ("counit_l", "(tr * id) . comul", "id"),
    ("counit_r", "(id * tr) . comul", "id"),
    ("frobenius_l", "comul . m", "(m * id) . (id * comul)"),
    ("frobenius_r", "comul . m", "(id * m) . (comul * id)"),
    ("swap_inv", "swap . swap", "id * id"),
    ("nat_swap_m_l", "swap . (m * id)", "(id * m) . (swap * id) . (id * swap)"),
    ("nat_swap_m_r", "swap . (id * m)", "(m * id) . (id * swap) . (swap * id)"),
    (
        "nat_swap_comul_l",
        "(swap * id) . (id * swap) . (comul * id)",
        "(id * comul) . swap",
    ),
    (
        "nat_swap_comul_r",
        "(id * swap) . (swap * id) . (id * comul)",
        "(comul * id) . swap",
    ),
    ("nat_swap_unit_l", "swap . (unit * id)", "id * unit"),
    ("nat_swap_unit_r", "swap . (id * unit)", "unit * id"),
    ("nat_swap_tr_l", "(tr * id) . swap", "id * tr"),
    ("nat_swap_tr_r", "(id * tr) . swap", "tr * id"),
    ("nat_swap_pe_l", "swap . (pe(?p) * id)", "(id * pe(?p)) . swap"),
    ("nat_swap_pe_r", "swap . (id * pe(?p))", "(pe(?p) * id) . swap"),
    ("nat_swap_pu_l", "swap . (pu(?p) * id)", "id * pu(?p)"),
    ("nat_swap_pu_r", "swap . (id * pu(?p))", "pu(?p) * id"),
    ("legs", "m . (pe(?p) * id)", "m . (id * pe(?p))"),
    ("waist", "pe(?p) . m", "m . (pe(?p) * id)"),
    ("colegs", "(pe(?p) * id) . comul", "(id * pe(?p)) . comul"),
    ("cowaist", "comul . pe(?p)", "(pe(?p) * id) . comul"),
    ("primecomm", "pe(?p) . pe(?q)", "pe(?q) . pe(?p)"),
]

#: All rules by name; each is a bidirectional equation.
RULES: dict[str, Rule] = {n: _rule(n, l, r) for n, l, r in _RULE_DEFS}

_CF = tuple(n for n, _, _ in _RULE_DEFS[:23])

#: Rule set names to member rule names, smallest presentation first.
RULE_SETS: dict[str, tuple[str, ...]] = {
    "CF": _CF,
    "CF_LEGS": _CF + ("legs",),
    "G2_FULL": _CF + ("legs", "waist", "colegs", "cowaist", "primecomm"),
}


def ruleset(name: str) -> tuple[Rule, ...]:
    try:
        return tuple(RULES[rn] for rn in RULE_SETS[name])
    except KeyError:
        raise UnknownRuleSet(
            f"unknown rule set {name!r}; choose from {', '.join(RULE_SETS)}"
        ) from None


# ---------------------------------------------------------------------------
# compilation to kernel entries

def _compile_side(term: Term, mvs: tuple[str, ...]) -> tuple[int, ...]:
    state = term_to_state(term)
    if not mvs:
        return state
    slot_of = {intern_label(mv): -2 - i for i, mv in enumerate(mvs)}
    out = list(state)
    for p in range(3, len(out), 3):
        if out[p] in slot_of and out[p - 1] in (GEN_CODES["pe"], GEN_CODES["pu"]):
            out[p] = slot_of[out[p]]
    return tuple(out)


_ENTRY_CACHE: dict[str, tuple] = {}


def _entries(rules_name: str):
    """Kernel entries + (rule, direction) legend, in tie-break order."""
    cached = _ENTRY_CACHE.get(rules_name)
    if cached is not None:
        return cached
    entries = []
    legend = []
    for rule in sorted(ruleset(rules_name), key=lambda r: r.name):
        lhs = _compile_side(rule.lhs, rule.metavars)
        rhs = _compile_side(rule.rhs, rule.metavars)
        for direction in ("fwd", "rev"):
            pat, rep = (lhs, rhs) if direction == "fwd" else (rhs, lhs)
            entries.append((pat, rep, len(rule.metavars)))
            legend.append((rule.name, direction))
    result = (tuple(entries), tuple(legend))
    _ENTRY_CACHE[rules_name] = result
    return result


def _n_layers(state) -> int:
    return (len(state) - 1) // 3


def _position_dict(n_layers: int, bottom: int, col: int, k: int) -> dict:
    if k == 0:
        path = [1] * (n_layers - bottom)
    else:
        path = slice_path(n_layers, bottom)
    return {"path": path, "layers": k, "offset": col}


def _position_bottom(n_layers: int, position: dict) -> int:
    path = list(position["path"])
    if int(position["layers"]) == 0:
        return n_layers - len(path)
    if path and path[-1] == 0:
        return n_layers - len(path)
    return 0


# ---------------------------------------------------------------------------
# single-step application

def apply_rule(term: Term, rule_name: str, direction: str = "fwd", position=None) -> Term:
    """Apply one rule to a term and return the rewritten term.

    position selects where:
      * None: the first window in the kernel's deterministic order;
      * a child-index path (list of 0/1): the addressed subterm must itself
        be an instance of the matched side, and is replaced in the tree;
      * a dict {"path", "layers", "offset"}: a window of the canonical
        layered form, as reported in traces.
    Raises NoMatch when the rule does not apply there.
    """
    if rule_name not in RULES:
        raise UnknownRuleSet(f"unknown rule {rule_name!r}")
    if direction not in ("fwd", "rev"):
        raise ValueError(f"direction must be 'fwd' or 'rev', not {direction!r}")
    rule = RULES[rule_name]
    lhs = _compile_side(rule.lhs, rule.metavars)
    rhs = _compile_side(rule.rhs, rule.metavars)
    pat, rep = (lhs, rhs) if direction == "fwd" else (rhs, lhs)
    n_meta = len(rule.metavars)

    if isinstance(position, (list, tuple)):
        return _apply_at_subtree(term, list(position), pat, rep, n_meta, rule_name)

    state = nf(term_to_state(term))
    n = _n_layers(state)
    k = (len(pat) - 1) // 3
    if position is None:
        want = None
    else:
        want = (_position_bottom(n, position), int(position["offset"]))
        if int(position["layers"]) != k:
            raise NoMatch(
                f"{rule_name} {direction} spans {k} layers, position says "
                f"{position['layers']}"
            )
    if k == 0:
        hull = side_hull(rep)
        for lvl, col in find_insertions(state, pat[0], hull):
            if want is None or (lvl, col) == want:
                return state_to_term(apply_insertion(state, lvl, col, rep))
    else:
        for match in find_matches(state, pat, n_meta):
            if want is None or (match[0], match[1]) == want:
                return state_to_term(apply_match(state, match, rep))
    raise NoMatch(f"{rule_name} ({direction}) does not apply at {position!r}")


def _apply_at_subtree(term, path, pat, rep, n_meta, rule_name) -> Term:
    sub = subterm_at(term, path)
    sub_state = nf(term_to_state(sub))
    n = _n_layers(sub_state)
    k = (len(pat) - 1) // 3
    if k == 0:
        if sub_state != pat:
            raise NoMatch(
                f"subterm at {path!r} is not the identity window {rule_name} needs"
            )
        new_state = apply_insertion(sub_state, 0, 0, rep)
        return replace_at(term, path, state_to_term(new_state))
    for match in find_matches(sub_state, pat, n_meta):
        bottom, delta, idxs, below, above, _b = match
        if bottom == 0 and delta == 0 and len(idxs) == n and not below and not above:
            new_state = apply_match(sub_state, match, rep)
            return replace_at(term, path, state_to_term(new_state))
    raise NoMatch(f"subterm at {path!r} is not an instance of {rule_name}")


# ---------------------------------------------------------------------------
# path search

@dataclass(frozen=True)
class TraceStep:
    rule: str
    direction: str
    position: dict
    result: str  # canonical text of the state after this step


@dataclass(frozen=True)
class RewriteTrace:
    """A successful derivation: start rewrites to goal via steps."""

    start: str
    goal: str
    rules: str
    steps: tuple[TraceStep, ...]
    found: bool = True
    explored: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "found": True,
                "start": self.start,
                "goal": self.goal,
                "rules": self.rules,
                "explored": self.explored,
                "steps": [
                    {
                        "step": i,
                        "rule": s.rule,
                        "direction": s.direction,
                        "position": s.position,
                        "result": s.result,
                    }
                    for i, s in enumerate(self.steps)
                ],
            },
            indent=2,
        )


@dataclass(frozen=True)
class NotFoundWithinBound:
    """Search result when no derivation exists within the given bounds."""

    start: str
    goal: str
    rules: str
    reason: str  # "max_steps", "budget", or "exhausted"
    max_steps: int
    budget: int
    explored: int
    found: bool = False

    def to_json(self) -> str:
        return json.dumps(
            {
                "found": False,
                "start": self.start,
                "goal": self.goal,
                "rules": self.rules,
                "reason": self.reason,
                "max_steps": self.max_steps,
                "budget": self.budget,
                "explored": self.explored,
            },
            indent=2,
        )


def find_path(
    start,
    goal,
    rules: str = "CF_LEGS",
    max_steps: int = 16,
    budget: int = 200_000,
    max_extra_layers: int = 6,
):
    """Search for a derivation start -> goal inside one rule set.

    Bidirectional breadth-first search over one-step rewrites of canonical
    states, alternating strictly between the two ends. States are deduped by
    canonical form; ties break by rule name, direction, then window position.
    budget caps the total number of states stored; max_extra_layers caps how
    far intermediate diagrams may grow beyond the larger endpoint, keeping
    the space finite. Returns a RewriteTrace or a NotFoundWithinBound value.
    """
    if isinstance(start, str):
        start = parse(start)
    if isinstance(goal, str):
        goal = parse(goal)
    if typecheck(start) != typecheck(goal):
        raise ArityMismatch(
            "cannot search: endpoints have different interface widths"
        )
    entries, legend = _entries(rules)
    s0 = nf(term_to_state(start))
    g0 = nf(term_to_state(goal))
    start_text = print_term(start)
    goal_text = print_term(goal)

    def not_found(reason: str, explored: int):
        return NotFoundWithinBound(
            start_text, goal_text, rules, reason, max_steps, budget, explored
        )

    if s0 == g0:
        return RewriteTrace(start_text, goal_text, rules, (), explored=0)

    layer_cap = max(_n_layers(s0), _n_layers(g0)) + max_extra_layers
    # parents[side][state] = (prev_state, entry_index, bottom, col, k)
    parents = ({s0: None}, {g0: None})
    frontiers = ([s0], [g0])
    depths = [0, 0]
    explored = 0

    def rebuild(meet, side_new):
        """Stitch the two half-paths at the meet state into one trace."""
        fwd_chain = []
        st = meet
        while parents[0].get(st) is not None:
            prev, e, b, c, k = parents[0][st]
            fwd_chain.append((prev, e, b, c, k, st))
            st = prev
        fwd_chain.reverse()
        steps = []
        for prev, e, b, c, k, st in fwd_chain:
            rn, d = legend[e]
            steps.append(
                TraceStep(
                    rn,
                    d,
                    _position_dict(_n_layers(prev), b, c, k),
                    print_term(state_to_term(st)) if _n_layers(st) or st[0] else "",
                )
            )
        st = meet
        while parents[1].get(st) is not None:
            prev, e, b, c, k = parents[1][st]
            # The recorded edge runs prev -> st away from the goal; the
            # final path traverses st -> prev, so invert the entry and
            # recover its window by re-matching.
            inv = e ^ 1
            pos = None
            for (ee, bb, cc, kk, ns) in successors(st, entries):
                if ee == inv and ns == prev:
                    pos = (bb, cc, kk)
                    break
            if pos is None:  # pragma: no cover - inverses always re-match
                raise RuntimeError("could not invert a search edge")
            rn, d = legend[inv]
            steps.append(
                TraceStep(
                    rn,
                    d,
                    _position_dict(_n_layers(st), pos[0], pos[1], pos[2]),
                    print_term(state_to_term(prev)) if _n_layers(prev) or prev[0] else "",
                )
            )
            st = prev
        return RewriteTrace(
            start_text, goal_text, rules, tuple(steps), explored=explored
        )

    while True:
        # Pick the side to deepen: strict alternation, but an exhausted or
        # step-capped side cedes its turn.
        order = (0, 1) if depths[0] <= depths[1] else (1, 0)
        side = None
        for s in order:
            if frontiers[s] and depths[0] + depths[1] < max_steps:
                side = s
                break
        if side is None:
            reason = (
                "exhausted"
                if not frontiers[0] and not frontiers[1]
                else "max_steps"
            )
            return not_found(reason, explored)
        mine, other = parents[side], parents[1 - side]
        new_frontier = []
        for state in frontiers[side]:
            explored += 1
            for (e, b, c, k, ns) in successors(state, entries):
                if _n_layers(ns) > layer_cap:
                    continue
                if ns in mine:
                    continue
                mine[ns] = (state, e, b, c, k)
                if ns in other:
                    return rebuild(ns, side)
                if len(parents[0]) + len(parents[1]) > budget:
                    return not_found("budget", explored)
                new_frontier.append(ns)
        frontiers[side][:] = new_frontier
        depths[side] += 1


def replay(trace: RewriteTrace) -> Term:
    """Re-run a trace step by step, checking every invariant on the way.

    Each step must apply where the trace says, every intermediate must
    typecheck, and the connectivity invariant must never change. Returns the
    final term, which denotes the same bordism as the goal.
    """
    term = parse(trace.start)
    goal = parse(trace.goal)
    want = cospan_of_term(term)
    if want != cospan_of_term(goal):
        raise ValueError("trace endpoints denote different bordisms")
    for step in trace.steps:
        term = apply_rule(term, step.rule, step.direction, step.position)
        typecheck(term)
        if cospan_of_term(term) != want:
            raise ValueError(f"step {step.rule} changed the bordism")
    from .layers import diagram_equal

    if not diagram_equal(term, goal):
        raise ValueError("replay did not reach the goal diagram")
    return term


# ---------------------------------------------------------------------------
# normalization

def _lay(box: Term, off: int, width: int, arity: int) -> Term:
    """box placed on wires [off, off+arity) of a width-wide interface."""
    t = box
    if width - off - arity > 0:
        t = Tensor(t, id_n(width - off - arity))
    if off > 0:
        t = Tensor(id_n(off), t)
    return t


def _stack(parts: list[Term], width_in: int) -> Term:
    if not parts:
        return id_n(width_in)
    term = parts[0]
    for p in parts[1:]:
        term = Compose(p, term)
    return term


def _is_id_stack(term: Term) -> bool:
    if isinstance(term, Gen):
        return term.name == "id"
    if isinstance(term, Tensor):
        return _is_id_stack(term.l) and _is_id_stack(term.r)
    return False


def _comp(f: Term, g: Term) -> Term:
    """Compose, absorbing identity factors so normal forms stay minimal."""
    if _is_id_stack(f):
        return g
    if _is_id_stack(g):
        return f
    return Compose(f, g)


def _component_core(n_in: int, genus: int, n_out: int) -> Term:
    """Canonical one-piece bordism: n_in spheres -> n_out, given genus."""
    parts: list[Term] = []
    w = n_in
    if w == 0:
        parts.append(Gen("unit"))
        w = 1
    while w > 1:
        parts.append(_lay(Gen("m"), 0, w, 2))
        w -= 1
    for _ in range(genus):
        parts.append(Gen("comul"))
        parts.append(_lay(Gen("m"), 0, 2, 2))
    if n_out == 0:
        parts.append(Gen("tr"))
    else:
        while w < n_out:
            parts.append(_lay(Gen("comul"), 0, w, 1))
            w += 1
    return _stack(parts, n_in)


def normalize_G1(term: Term) -> Term:
    """Semantic normal form: rebuild the term from its invariant.

    The result is a composition of punctured-prime feeds, an input routing,
    one canonical core per connected piece, and an output routing. It
    depends only on the bordism the term denotes, so it is idempotent and
    equal terms normalize identically.
    """
    cos = cospan_of_term(term)
    comps = cos.components
    if not comps:
        raise ValueError("the empty bordism has no term")

    prime_feeds: list[tuple[str, int]] = []  # (label, component index)
    for ci, c in enumerate(comps):
        for p in c.primes:
            prime_feeds.append((p, ci))
    prime_feeds.sort(key=lambda lp: (lp[0], lp[1]))
    feed_pos = {}  # (component, occurrence) -> bottom wire index
    occ_count: dict[int, int] = {}
    for rank, (label, ci) in enumerate(prime_feeds):
        k = occ_count.get(ci, 0)
        occ_count[ci] = k + 1
        feed_pos[(ci, k)] = cos.dom + rank

    # Desired bottom order: per component, its real inputs then its feeds.
    concat_in: list[int] = []
    blocks_in: list[int] = []
    for ci, c in enumerate(comps):
        concat_in.extend(c.in_ports)
        concat_in.extend(feed_pos[(ci, k)] for k in range(len(c.primes)))
        blocks_in.append(len(c.in_ports) + len(c.primes))
    total_in = len(concat_in)
    perm_in = [0] * total_in
    for target, src in enumerate(concat_in):
        perm_in[src] = target

    cores = [
        _component_core(blocks_in[ci], c.genus, len(c.out_ports))
        for ci, c in enumerate(comps)
    ]
    core: Term | None = None
    for t in cores:
        core = t if core is None else Tensor(core, t)

    concat_out: list[int] = []
    for c in comps:
        concat_out.extend(c.out_ports)
    perm_out = list(concat_out)

    term_out: Term = core
    if total_in and perm_in != list(range(total_in)):
        term_out = _comp(term_out, permutation_term(perm_in))
    if prime_feeds:
        feeds: Term | None = None
        for label, _ci in prime_feeds:
            nxt = Gen("pu", label)
            feeds = nxt if feeds is None else Tensor(feeds, nxt)
        bottom = feeds if cos.dom == 0 else Tensor(id_n(cos.dom), feeds)
        term_out = _comp(term_out, bottom)
    if perm_out and perm_out != list(range(len(perm_out))):
        term_out = _comp(permutation_term(perm_out), term_out)
    return term_out


def normalize_G2(term: Term) -> Term:
    """Structural normal form: the canonical layered rendering."""
    state = nf(term_to_state(term))
    return state_to_term(state)


# ---------------------------------------------------------------------------
# soundness

def verify_ruleset_soundness(rules: str = "G2_FULL") -> dict:
    """Check every rule in a set preserves the connectivity invariant.

    Metavariables are instantiated with fresh distinct labels and again with
    one shared label; each instance's two sides must denote the same
    bordism. Returns a report dict with per-rule verdicts.
    """
    report = {"rules": rules, "checked": [], "sound": True}
    for rule in ruleset(rules):
        verdict = True
        assignments: list[dict[str, str]] = []
        if rule.metavars:
            fresh = {mv: f"FRESH{i}" for i, mv in enumerate(rule.metavars)}
            assignments.append(fresh)
            if len(rule.metavars) > 1:
                assignments.append({mv: "FRESH0" for mv in rule.metavars})
        else:
            assignments.append({})
        for asg in assignments:
            lhs = _instantiate_term(rule.lhs, asg)
            rhs = _instantiate_term(rule.rhs, asg)
            if not terms_equal(lhs, rhs):
                verdict = False
        report["checked"].append({"rule": rule.name, "sound": verdict})
        report["sound"] = report["sound"] and verdict
    return report


def _instantiate_term(term: Term, assignment: dict[str, str]) -> Term:
    if isinstance(term, Gen):
        if term.label in assignment:
            return Gen(term.name, assignment[term.label])
        return term
    if isinstance(term, Compose):
        return Compose(
            _instantiate_term(term.f, assignment),
            _instantiate_term(term.g, assignment),
        )
    if isinstance(term, Tensor):
        return Tensor(
            _instantiate_term(term.l, assignment),
            _instantiate_term(term.r, assignment),
        )
    return term
