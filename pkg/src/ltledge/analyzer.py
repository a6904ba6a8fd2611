"""Syntactic prover for closure under stuttering.

``analyze`` decides a sound (not complete) one-sided question: a
``Closed`` verdict means the formula's truth value is invariant under
duplicating any state of any trace, and comes with a checkable proof
tree; ``Unknown`` means no rule applied and carries the blocking
subformulas.  The rule set is: atoms and constants are closed; all
boolean and temporal connectives except ``Next`` preserve closure;
three schema rules discharge specific shapes in which edges neutralize
the ``Next`` operators (an eventually-rise, an always-rise-implies, and
an until form); plus bookkeeping rules for edge dualities and the
logical rewrites used to reach those shapes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .formula import (
    Always,
    And,
    AnyEdge,
    Atom,
    ConstFalse,
    ConstTrue,
    Eventually,
    FallEdge,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    RiseEdge,
    Until,
    build_and,
    build_or,
    expand_any_edges,
    flatten_and,
    flatten_or,
    normalize_edge_negations,
    resugar_edges,
    rewrite_logic,
)
from .syntax import parse, render


class Rule(str, Enum):
    VAR = "CUS-VAR"
    CONST = "CUS-CONST"
    NOT = "CUS-NOT"
    AND = "CUS-AND"
    BINOP = "CUS-BINOP"
    ALWAYS = "CUS-ALWAYS"
    EVENT = "CUS-EVENT"
    UNTIL = "CUS-UNTIL"
    THM_MAIN = "THM-MAIN"
    PROP_E = "PROP-E"
    PROP_A = "PROP-A"
    PROP_U = "PROP-U"
    EDGE_DUAL = "EDGE-DUAL"
    LOGIC_REWRITE = "LOGIC-REWRITE"


@dataclass(frozen=True)
class ProofTree:
    rule: Rule
    conclusion: Formula
    premises: tuple[ProofTree, ...] = ()
    note: str | None = None


@dataclass(frozen=True)
class Closed:
    proof: ProofTree


@dataclass(frozen=True)
class Unknown:
    blockers: tuple[Formula, ...]


Verdict = Closed | Unknown

_FALLBACK_TERM_CAP = 64


def normalize(f: Formula) -> Formula:
    """Preprocessing pipeline: resugar edges, rewrite, expand any-edges."""
    for _ in range(50):
        g = expand_any_edges(rewrite_logic(resugar_edges(f)))
        if g == f:
            return f
        f = g
    raise RuntimeError("normalization did not reach a fixpoint")


def analyze(f: Formula) -> Verdict:
    """Prove ``f`` closed under stuttering, or report what blocked."""
    nf = normalize(f)
    verdict = _analyze(nf, {})
    if isinstance(verdict, Closed) and nf != f:
        proof = ProofTree(
            Rule.LOGIC_REWRITE,
            f,
            (verdict.proof,),
            note="normalized with the rewrite set",
        )
        return Closed(proof)
    return verdict


def _merge_blockers(*groups: tuple[Formula, ...]) -> tuple[Formula, ...]:
    out: list[Formula] = []
    for group in groups:
        for g in group:
            if g not in out:
                out.append(g)
    return tuple(out)


def _analyze(f: Formula, memo: dict[Formula, Verdict]) -> Verdict:
    if f in memo:
        return memo[f]
    verdict = _dispatch(f, memo)
    memo[f] = verdict
    return verdict


def _dispatch(f: Formula, memo: dict) -> Verdict:
    if isinstance(f, Atom):
        return Closed(ProofTree(Rule.VAR, f))
    if isinstance(f, (ConstTrue, ConstFalse)):
        return Closed(ProofTree(Rule.CONST, f))
    if isinstance(f, Not):
        inner = _analyze(f.child, memo)
        if isinstance(inner, Closed):
            return Closed(ProofTree(Rule.NOT, f, (inner.proof,)))
        return inner
    if isinstance(f, And):
        return _compositional(f, Rule.AND, (f.left, f.right), memo)
    if isinstance(f, (Or, Implies, Iff)):
        return _compositional(f, Rule.BINOP, (f.left, f.right), memo)
    if isinstance(f, Always):
        attempts = [_compositional(f, Rule.ALWAYS, (f.child,), memo)]
        if isinstance(attempts[0], Closed):
            return attempts[0]
        attempts.append(_try_prop_a(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        attempts.append(_try_fallback(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        return Unknown(_merge_blockers(*[a.blockers for a in attempts]))
    if isinstance(f, Eventually):
        attempts = [_compositional(f, Rule.EVENT, (f.child,), memo)]
        if isinstance(attempts[0], Closed):
            return attempts[0]
        attempts.append(_try_prop_e(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        attempts.append(_try_thm_main(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        attempts.append(_try_fallback(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        return Unknown(_merge_blockers(*[a.blockers for a in attempts]))
    if isinstance(f, Until):
        attempts = [_compositional(f, Rule.UNTIL, (f.left, f.right), memo)]
        if isinstance(attempts[0], Closed):
            return attempts[0]
        attempts.append(_try_prop_u(f, memo))
        if isinstance(attempts[-1], Closed):
            return attempts[-1]
        return Unknown(_merge_blockers(*[a.blockers for a in attempts]))
    if isinstance(f, (Next, RiseEdge, FallEdge, AnyEdge)):
        return Unknown((f,))
    raise TypeError(f"not a formula: {f!r}")


def _compositional(f: Formula, rule: Rule, parts: tuple[Formula, ...],
                   memo: dict) -> Verdict:
    verdicts = [_analyze(p, memo) for p in parts]
    if all(isinstance(v, Closed) for v in verdicts):
        return Closed(ProofTree(rule, f, tuple(v.proof for v in verdicts)))
    return Unknown(
        _merge_blockers(
            *[v.blockers for v in verdicts if isinstance(v, Unknown)]
        )
    )


def _negate(g: Formula) -> Formula:
    return g.child if isinstance(g, Not) else Not(g)


def _replace_nth(t: Formula, spine, n: int, rep: Formula):
    """Replace the n-th leaf of the ``spine``-flattened view of ``t``."""
    if isinstance(t, spine):
        left, used = _replace_nth(t.left, spine, n, rep)
        right, more = _replace_nth(t.right, spine, n - used, rep)
        return type(t)(left, right), used + more
    return (rep if n == 0 else t), 1


# ---------------------------------------------------------------------------
# Schema rules.  Each matcher enumerates candidate partitions; analysis
# takes the first whose pieces all prove closed, the proof checker accepts
# a node iff some candidate reproduces its premises exactly.

def _split_event_rest(rest: list[Formula]):
    """Partition non-candidate conjuncts of an eventually-rise body.

    Next-parts feed the next-state piece B; everything else feeds the
    plain piece C.  A non-candidate edge splits by its definition into a
    current-state conjunct and a next-state conjunct.
    """
    b_parts: list[Formula] = []
    c_parts: list[Formula] = []
    for c in rest:
        if isinstance(c, Next):
            b_parts.append(c.child)
        elif isinstance(c, Not) and isinstance(c.child, Next):
            b_parts.append(_negate(c.child.child))
        elif isinstance(c, RiseEdge):
            c_parts.append(_negate(c.child))
            b_parts.append(c.child)
        elif isinstance(c, FallEdge):
            c_parts.append(c.child)
            b_parts.append(_negate(c.child))
        else:
            c_parts.append(c)
    b = build_and(b_parts) if b_parts else ConstTrue()
    c = build_and(c_parts) if c_parts else ConstTrue()
    return b, c


def _event_candidates(f: Eventually):
    """Candidate (canonical formula, A, B, C) tuples for the eventually rule."""
    conjs = flatten_and(f.child)
    out = []
    for i, c in enumerate(conjs):
        if isinstance(c, RiseEdge):
            a = c.child
            canonical = f
        elif isinstance(c, FallEdge):
            a = Not(c.child)
            body, _ = _replace_nth(f.child, And, i, RiseEdge(a))
            canonical = Eventually(body)
        else:
            continue
        rest = conjs[:i] + conjs[i + 1 :]
        b, cc = _split_event_rest(rest)
        out.append((canonical, a, b, cc))
    return out


def _try_prop_e(f: Eventually, memo: dict) -> Verdict:
    failed: list[tuple[Formula, ...]] = []
    for canonical, a, b, c in _event_candidates(f):
        pa, pb, pc = (_analyze(g, memo) for g in (a, b, c))
        if all(isinstance(v, Closed) for v in (pa, pb, pc)):
            node = ProofTree(
                Rule.PROP_E,
                canonical,
                (pa.proof, pb.proof, pc.proof),
                note=f"A={render(a)}; B={render(b)}; C={render(c)}",
            )
            if canonical != f:
                node = ProofTree(
                    Rule.EDGE_DUAL, f, (node,),
                    note="fall edge read as rise of the negation",
                )
            return Closed(node)
        failed.extend(
            v.blockers for v in (pa, pb, pc) if isinstance(v, Unknown)
        )
    return Unknown(_merge_blockers(*failed))


def _split_disjuncts(rest: list[Formula]):
    """Partition disjuncts into next-parts (B) and plain parts (C).

    A negated edge in a disjunction splits by De Morgan over its
    definition: ``!up z`` is ``z | X !z``, ``!down z`` is ``!z | X z``.
    """
    b_parts: list[Formula] = []
    c_parts: list[Formula] = []
    for d in rest:
        if isinstance(d, Next):
            b_parts.append(d.child)
        elif isinstance(d, Not) and isinstance(d.child, Next):
            b_parts.append(_negate(d.child.child))
        elif isinstance(d, Not) and isinstance(d.child, RiseEdge):
            c_parts.append(d.child.child)
            b_parts.append(_negate(d.child.child))
        elif isinstance(d, Not) and isinstance(d.child, FallEdge):
            c_parts.append(_negate(d.child.child))
            b_parts.append(d.child.child)
        else:
            c_parts.append(d)
    return b_parts, c_parts


def _export_antecedent(rest: list[Formula]):
    """Negations of leftover antecedent conjuncts, as consequent disjuncts.

    ``G(up a & y -> cons)`` is ``G(up a -> cons | !y)``; the negation of
    an edge or next conjunct splits into current- and next-state parts.
    """
    b_parts: list[Formula] = []
    c_parts: list[Formula] = []
    for c in rest:
        if isinstance(c, Next):
            b_parts.append(_negate(c.child))
        elif isinstance(c, Not) and isinstance(c.child, Next):
            b_parts.append(c.child.child)
        elif isinstance(c, RiseEdge):
            c_parts.append(c.child)
            b_parts.append(_negate(c.child))
        elif isinstance(c, FallEdge):
            c_parts.append(_negate(c.child))
            b_parts.append(c.child)
        else:
            c_parts.append(_negate(c))
    return b_parts, c_parts


def _always_candidates(f: Always):
    if not isinstance(f.child, Implies):
        return []
    ante, cons = f.child.left, f.child.right
    conjs = flatten_and(ante)
    disjs = flatten_or(cons)
    out = []
    for i, c in enumerate(conjs):
        if isinstance(c, RiseEdge):
            a = c.child
            canonical = f
        elif isinstance(c, FallEdge):
            a = Not(c.child)
            ante2, _ = _replace_nth(ante, And, i, RiseEdge(a))
            canonical = Always(Implies(ante2, cons))
        else:
            continue
        rest = conjs[:i] + conjs[i + 1 :]
        b_exp, c_exp = _export_antecedent(rest)
        b_dis, c_dis = _split_disjuncts(disjs)
        b_parts = b_exp + b_dis
        c_parts = c_exp + c_dis
        b = build_or(b_parts) if b_parts else ConstFalse()
        cc = build_or(c_parts) if c_parts else ConstFalse()
        out.append((canonical, a, b, cc))
    return out


def _try_prop_a(f: Always, memo: dict) -> Verdict:
    failed: list[tuple[Formula, ...]] = []
    for canonical, a, b, c in _always_candidates(f):
        pa, pb, pc = (_analyze(g, memo) for g in (a, b, c))
        if all(isinstance(v, Closed) for v in (pa, pb, pc)):
            node = ProofTree(
                Rule.PROP_A,
                canonical,
                (pa.proof, pb.proof, pc.proof),
                note=f"A={render(a)}; B={render(b)}; C={render(c)}",
            )
            if canonical != f:
                node = ProofTree(
                    Rule.EDGE_DUAL, f, (node,),
                    note="fall edge read as rise of the negation",
                )
            return Closed(node)
        failed.extend(
            v.blockers for v in (pa, pb, pc) if isinstance(v, Unknown)
        )
    return Unknown(_merge_blockers(*failed))


def _until_candidates(f: Until):
    """Candidate partitions (canonical, A, B, C, D, E, Fpiece) for until.

    The left side must contain a negated-edge disjunct (that disjunct is
    what tolerates duplicated states); the right side needs an edge
    conjunct only when it also has next-parts.  Absent pieces fill with
    the neutral constants.
    """
    left_disjs = flatten_or(f.left)
    right_conjs = flatten_and(f.right)
    out = []
    for i, d in enumerate(left_disjs):
        if isinstance(d, Not) and isinstance(d.child, RiseEdge):
            a = d.child.child
            left2 = f.left
        elif isinstance(d, Not) and isinstance(d.child, FallEdge):
            a = Not(d.child.child)
            left2, _ = _replace_nth(f.left, Or, i, Not(RiseEdge(a)))
        else:
            continue
        b_parts, c_parts = _split_disjuncts(
            left_disjs[:i] + left_disjs[i + 1 :]
        )
        b = build_or(b_parts) if b_parts else ConstFalse()
        c = build_or(c_parts) if c_parts else ConstFalse()

        r_options: list[tuple[int | None, Formula | None]] = []
        for j, rc in enumerate(right_conjs):
            if isinstance(rc, RiseEdge):
                r_options.append((j, rc.child))
            elif isinstance(rc, FallEdge):
                r_options.append((j, Not(rc.child)))
        r_options.append((None, None))

        for j, dd in r_options:
            rest = [rc for jj, rc in enumerate(right_conjs) if jj != j]
            e_acc: list[Formula] = []
            f_acc: list[Formula] = []
            for rc in rest:
                if isinstance(rc, Next):
                    e_acc.append(rc.child)
                elif isinstance(rc, Not) and isinstance(rc.child, Next):
                    e_acc.append(_negate(rc.child.child))
                elif isinstance(rc, RiseEdge):
                    f_acc.append(_negate(rc.child))
                    e_acc.append(rc.child)
                elif isinstance(rc, FallEdge):
                    f_acc.append(rc.child)
                    e_acc.append(_negate(rc.child))
                else:
                    f_acc.append(rc)
            if dd is None and e_acc:
                continue  # a next-part on the right needs the edge anchor
            e = build_and(e_acc) if e_acc else ConstTrue()
            fp = build_and(f_acc) if f_acc else ConstTrue()
            d_formula = dd if dd is not None else ConstTrue()
            right2 = f.right
            if j is not None and isinstance(right_conjs[j], FallEdge):
                right2, _ = _replace_nth(f.right, And, j, RiseEdge(dd))
            canonical = Until(left2, right2)
            out.append((canonical, a, b, c, d_formula, e, fp))
    return out


def _try_prop_u(f: Until, memo: dict) -> Verdict:
    failed: list[tuple[Formula, ...]] = []
    for canonical, *pieces in _until_candidates(f):
        verdicts = [_analyze(g, memo) for g in pieces]
        if all(isinstance(v, Closed) for v in verdicts):
            a, b, c, d, e, fp = pieces
            node = ProofTree(
                Rule.PROP_U,
                canonical,
                tuple(v.proof for v in verdicts),
                note=(
                    f"A={render(a)}; B={render(b)}; C={render(c)}; "
                    f"D={render(d)}; E={render(e)}; F={render(fp)}"
                ),
            )
            if canonical != f:
                node = ProofTree(
                    Rule.EDGE_DUAL, f, (node,),
                    note="fall edge read as rise of the negation",
                )
            return Closed(node)
        failed.extend(
            v.blockers for v in verdicts if isinstance(v, Unknown)
        )
    return Unknown(_merge_blockers(*failed))


def _thm_main_candidates(f: Eventually):
    """Raw shape: a negated conjunct, its next, and other next conjuncts."""
    conjs = flatten_and(f.child)
    out = []
    for i, c in enumerate(conjs):
        if not isinstance(c, Not):
            continue
        a = c.child
        rest = conjs[:i] + conjs[i + 1 :]
        if Next(a) not in rest:
            continue
        j = rest.index(Next(a))
        others = rest[:j] + rest[j + 1 :]
        if not all(isinstance(o, Next) for o in others):
            continue
        b = build_and([o.child for o in others]) if others else ConstTrue()
        out.append((a, b))
    return out


def _try_thm_main(f: Eventually, memo: dict) -> Verdict:
    failed: list[tuple[Formula, ...]] = []
    for a, b in _thm_main_candidates(f):
        pa, pb = _analyze(a, memo), _analyze(b, memo)
        if isinstance(pa, Closed) and isinstance(pb, Closed):
            node = ProofTree(
                Rule.THM_MAIN, f, (pa.proof, pb.proof),
                note=f"A={render(a)}; B={render(b)}",
            )
            return Closed(node)
        failed.extend(
            v.blockers for v in (pa, pb) if isinstance(v, Unknown)
        )
    return Unknown(_merge_blockers(*failed))


# ---------------------------------------------------------------------------
# Last-resort rewrite: distribute an eventually (or the negated dual of an
# always) over a disjunctive normal form of its body, so the schema rules
# can see each product term on its own.

def _nnf(g: Formula, neg: bool) -> Formula:
    if isinstance(g, Not):
        return _nnf(g.child, not neg)
    if isinstance(g, And):
        l, r = _nnf(g.left, neg), _nnf(g.right, neg)
        return Or(l, r) if neg else And(l, r)
    if isinstance(g, Or):
        l, r = _nnf(g.left, neg), _nnf(g.right, neg)
        return And(l, r) if neg else Or(l, r)
    if isinstance(g, Implies):
        if neg:
            return And(_nnf(g.left, False), _nnf(g.right, True))
        return Or(_nnf(g.left, True), _nnf(g.right, False))
    if isinstance(g, Iff):
        l, nl = _nnf(g.left, False), _nnf(g.left, True)
        r, nr = _nnf(g.right, False), _nnf(g.right, True)
        if neg:
            return Or(And(l, nr), And(nl, r))
        return Or(And(l, r), And(nl, nr))
    if isinstance(g, Next):
        return Next(_nnf(g.child, neg))
    if isinstance(g, ConstTrue):
        return ConstFalse() if neg else g
    if isinstance(g, ConstFalse):
        return ConstTrue() if neg else g
    return Not(g) if neg else g


def _dnf_terms(g: Formula) -> list[list[Formula]] | None:
    if isinstance(g, Or):
        left = _dnf_terms(g.left)
        right = _dnf_terms(g.right)
        if left is None or right is None:
            return None
        terms = left + right
    elif isinstance(g, And):
        left = _dnf_terms(g.left)
        right = _dnf_terms(g.right)
        if left is None or right is None:
            return None
        terms = [a + b for a in left for b in right]
    else:
        terms = [[g]]
    if len(terms) > _FALLBACK_TERM_CAP:
        return None
    return terms


def _fallback_rewrite(f: Formula) -> Formula | None:
    """Equivalent form exposing one eventually per product term, or None."""
    if isinstance(f, Eventually):
        body, negated = f.child, False
    elif isinstance(f, Always):
        body, negated = Not(f.child), True
    else:
        return None
    terms = _dnf_terms(_nnf(body, False))
    if terms is None:
        return None
    parts = [
        normalize_edge_negations(resugar_edges(build_and(term)))
        for term in terms
    ]
    spread = build_or([Eventually(p) for p in parts])
    rewritten = Not(spread) if negated else spread
    if rewritten == f or (len(parts) == 1 and parts[0] == f.child):
        return None
    return rewritten


def _try_fallback(f: Formula, memo: dict) -> Verdict:
    rewritten = _fallback_rewrite(f)
    if rewritten is None:
        return Unknown(())
    inner = _analyze(rewritten, memo)
    if isinstance(inner, Closed):
        node = ProofTree(
            Rule.LOGIC_REWRITE, f, (inner.proof,),
            note="distributed over a disjunction of conjunctive terms",
        )
        return Closed(node)
    return inner


# ---------------------------------------------------------------------------
# Proof rendering, parsing and checking.

def proof_to_doc(p: ProofTree) -> dict:
    doc = {
        "rule": p.rule.value,
        "conclusion": render(p.conclusion),
        "premises": [proof_to_doc(q) for q in p.premises],
    }
    if p.note is not None:
        doc["note"] = p.note
    return doc


def proof_from_doc(doc: dict) -> ProofTree:
    try:
        rule = Rule(doc["rule"])
        conclusion = parse(doc["conclusion"])
        premises = tuple(proof_from_doc(q) for q in doc["premises"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed proof document: {exc}") from None
    return ProofTree(rule, conclusion, premises, doc.get("note"))


def render_proof(p: ProofTree, format: str = "text") -> str:
    """Readable derivation (premises first) or the structured document."""
    if format == "structured":
        return json.dumps(proof_to_doc(p), indent=2)
    if format != "text":
        raise ValueError(f"unknown proof format {format!r}")
    lines: list[str] = []

    def walk(node: ProofTree) -> None:
        for q in node.premises:
            walk(q)
        entry = f"[{node.rule.value}] {render(node.conclusion)}"
        if node.premises:
            entry += "  <==  " + ", ".join(
                render(q.conclusion) for q in node.premises
            )
        if node.note:
            entry += f"   ({node.note})"
        lines.append(entry)

    walk(p)
    return "\n".join(lines)


def check_proof(p: ProofTree) -> bool:
    """Re-derive every node from its premises by its named rule."""
    return all(_check_node(q) for q in _proof_nodes(p))


def _proof_nodes(p: ProofTree) -> list[ProofTree]:
    out = [p]
    for q in p.premises:
        out.extend(_proof_nodes(q))
    return out


def _premise_formulas(p: ProofTree) -> tuple[Formula, ...]:
    return tuple(q.conclusion for q in p.premises)


def _check_node(p: ProofTree) -> bool:
    f = p.conclusion
    got = _premise_formulas(p)
    if p.rule is Rule.VAR:
        return isinstance(f, Atom) and not got
    if p.rule is Rule.CONST:
        return isinstance(f, (ConstTrue, ConstFalse)) and not got
    if p.rule is Rule.NOT:
        return isinstance(f, Not) and got == (f.child,)
    if p.rule is Rule.AND:
        return isinstance(f, And) and got == (f.left, f.right)
    if p.rule is Rule.BINOP:
        return isinstance(f, (Or, Implies, Iff)) and got == (f.left, f.right)
    if p.rule is Rule.ALWAYS:
        return isinstance(f, Always) and got == (f.child,)
    if p.rule is Rule.EVENT:
        return isinstance(f, Eventually) and got == (f.child,)
    if p.rule is Rule.UNTIL:
        return isinstance(f, Until) and got == (f.left, f.right)
    if p.rule is Rule.PROP_E:
        if not isinstance(f, Eventually):
            return False
        return any(
            cand == f and (a, b, c) == got
            for cand, a, b, c in _event_candidates(f)
        )
    if p.rule is Rule.PROP_A:
        if not isinstance(f, Always):
            return False
        return any(
            cand == f and (a, b, c) == got
            for cand, a, b, c in _always_candidates(f)
        )
    if p.rule is Rule.PROP_U:
        if not isinstance(f, Until):
            return False
        return any(
            cand == f and tuple(pieces) == got
            for cand, *pieces in _until_candidates(f)
        )
    if p.rule is Rule.THM_MAIN:
        if not isinstance(f, Eventually):
            return False
        return any((a, b) == got for a, b in _thm_main_candidates(f))
    if p.rule is Rule.EDGE_DUAL:
        if len(got) != 1:
            return False
        return normalize_edge_negations(f) == normalize_edge_negations(got[0])
    if p.rule is Rule.LOGIC_REWRITE:
        if len(got) != 1:
            return False
        return got[0] in (normalize(f), _fallback_rewrite(f))
    return False
