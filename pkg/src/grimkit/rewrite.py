"""Database entries used as rewrite rules.

Matching is purely syntactic and one-way. A rewrite fires only when the
entry's assumptions, instantiated with the match, are proved under the
caller's context.
"""

import logging
from dataclasses import dataclass

from .evaluate import EMPTY, Truth, True_, check_truth
from .expr import Call, Symbol, head_name, replace_at, subexpressions, substitute

__all__ = ["match_pattern", "find_matches", "apply_entry", "rewrite_once",
           "search_rewrites", "MatchResult", "RewriteOutcome"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchResult:
    path: tuple
    assignment: dict


@dataclass(frozen=True)
class RewriteOutcome:
    expr: object
    match: object = None  # MatchResult of the rewritten site, if any
    diagnostic: str = ""

    @property
    def changed(self):
        return self.match is not None


def match_pattern(pattern, subject, pattern_vars):
    """Bindings making ``pattern`` equal to ``subject``, or None (no match)."""
    binding = {}
    if _match(pattern, subject, frozenset(pattern_vars), binding):
        return binding
    return None


def _match(p, s, variables, binding):
    if p in variables:
        prev = binding.get(p)
        if prev is None:
            binding[p] = s
            return True
        return prev == s
    if isinstance(p, Call):
        if not isinstance(s, Call) or len(p.args) != len(s.args):
            return False
        if not _match(p.head, s.head, variables, binding):
            return False
        for pa, sa in zip(p.args, s.args):
            if not _match(pa, sa, variables, binding):
                return False
        return True
    return p == s


def find_matches(e, pattern, pattern_vars):
    """All syntactic matches of ``pattern`` in ``e``, pre-order."""
    variables = frozenset(pattern_vars)
    for path, sub in subexpressions(e):
        binding = match_pattern(pattern, sub, variables)
        if binding is not None:
            yield MatchResult(path, binding)


def _sides(entry, reverse):
    f = entry.formula
    if head_name(f) != "Equal" or len(f.args) != 2:
        return None
    lhs, rhs = f.args
    return (rhs, lhs) if reverse else (lhs, rhs)


def _guard_ok(entry, binding, ctx):
    if entry.assumptions == True_:
        return True
    guard = substitute(entry.assumptions, binding)
    return check_truth(guard, ctx) is Truth.TRUE


def rewrite_once(e, entry, ctx=None, reverse=False):
    """Rewrite the first verified match (leftmost-outermost) of ``entry`` in ``e``."""
    ctx = ctx if ctx is not None else EMPTY
    sides = _sides(entry, reverse)
    if sides is None:
        msg = f"entry {entry.id} is not an equality; nothing to rewrite"
        log.warning(msg)
        return RewriteOutcome(e, None, msg)
    lhs, rhs = sides
    variables = frozenset(entry.variables)
    missing = (_free_syms(rhs) & variables) - _free_syms(lhs)
    if missing:
        names = ", ".join(sorted(s.name for s in missing))
        msg = f"entry {entry.id}: {names} cannot be bound from the pattern side"
        return RewriteOutcome(e, None, msg)
    for m in find_matches(e, lhs, variables):
        if _guard_ok(entry, m.assignment, ctx):
            new = replace_at(e, m.path, substitute(rhs, m.assignment))
            return RewriteOutcome(new, m)
    return RewriteOutcome(e, None, "")


def _free_syms(e):
    return {s for _, s in subexpressions(e) if isinstance(s, Symbol)}


def apply_entry(e, entry, ctx=None, reverse=False):
    """``e`` with one verified application of ``entry`` (unchanged if none)."""
    return rewrite_once(e, entry, ctx, reverse).expr


def search_rewrites(e, db, ctx=None, budget=100):
    """All single-step verified rewrites of ``e`` by database entries.

    Returns a list of (entry id, rewritten expression), one item per
    (site, entry) pair, in pre-order site order, truncated to ``budget``.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    ctx = ctx if ctx is not None else EMPTY
    out = []
    for path, sub in subexpressions(e):
        head = sub.head if isinstance(sub, Call) else sub
        if not isinstance(head, Symbol):
            continue
        for entry in db.entries_for_head(head):
            sides = _sides(entry, False)
            if sides is None:
                continue
            lhs, rhs = sides
            binding = match_pattern(lhs, sub, entry.variables)
            if binding is None or not _guard_ok(entry, binding, ctx):
                continue
            if not (_free_syms(rhs) & frozenset(entry.variables)) <= set(binding):
                continue
            out.append((entry.id, replace_at(e, path, substitute(rhs, binding))))
            if len(out) >= budget:
                return out
    return out
