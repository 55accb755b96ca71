"""Exhaustive enumeration of firing sequences.

Sequences are produced by the engine (``enabled_events``/``fire``); every
step is handed to ``visit`` so callers can check it against an independent
predecessor table.  Successor lists are cached per state, which keeps the
walk over ~1.8 million sequences to a few seconds.
"""

from reqcontract.network import EnactmentState, Verdict, enabled_events, fire

# Edge list transcribed directly from the network description, written out
# here so the checks do not reuse the engine's own tables.
SPEC_EDGES = [
    ("E_R", "Exercise_RtR_initial"),
    ("Exercise_RtR_initial", "Accept_OtR"),
    ("Exercise_RtR_initial", "Accept_OtV"),
    ("E_P", "Accept_OtR"),
    ("E_V", "Accept_OtV"),
    ("Accept_OtRS", "Accept_RtRS"),
    ("Accept_RtRS", "Accept_OtR"),
    ("Accept_OtRV", "Accept_RtRV"),
    ("Accept_RtRV", "Accept_OtV"),
    ("E_R", "Accept_RtR"),
    ("Accept_OtR", "Accept_RtR"),
    ("Accept_OtV", "Accept_RtR"),
    ("Accept_RtR", "Exercise_RtR_full"),
    ("Accept_OtR", "Exercise_RtR_full"),
    ("Accept_OtV", "Exercise_RtR_full"),
    ("Exercise_RtR_full", "Produce_KR_RR"),
    ("Produce_KR_RR", "Discharge_OtR"),
    ("Discharge_OtR", "Produce_KP_RP_SP_PP"),
    ("Produce_KP_RP_SP_PP", "Discharge_OtV"),
    ("Discharge_OtV", "Exercise_RtRV"),
    ("Exercise_RtRV", "V_A_OtV"),
    ("Discharge_OtV", "V_PR"),
    ("Discharge_OtV", "Exercise_RtRS"),
    ("Exercise_RtRS", "V_A_OtR"),
]
PASS_GATED = {"V_PR", "Exercise_RtRS"}


def spec_predecessors():
    preds = {}
    for s, t in SPEC_EDGES:
        preds.setdefault(t, set()).add(s)
        preds.setdefault(s, set())
    return {k: frozenset(v) for k, v in preds.items()}


def walk_sequences(net, verdicts, retry, visit_step, visit_end):
    """Depth-first over every maximal firing sequence.

    ``visit_step(history, state, event, verdict, new_state)`` sees each step
    with the events fired so far in this sequence; ``visit_end(history,
    state)`` sees each maximal sequence.  Returns the number of sequences.
    """
    cache = {}

    def successors(st):
        out = cache.get(st)
        if out is None:
            out = []
            for e in sorted(enabled_events(net, st)):
                choices = verdicts if e == net.validation_event else (None,)
                for v in choices:
                    out.append((e, v, fire(net, st, e, v, retry)))
            cache[st] = out
        return out

    count = 0
    history = []

    def dfs(st):
        nonlocal count
        succ = successors(st)
        if not succ:
            count += 1
            visit_end(history, st)
            return
        for e, v, nxt in succ:
            visit_step(history, st, e, v, nxt)
            history.append((e, v))
            dfs(nxt)
            history.pop()

    dfs(EnactmentState())
    return count


PASS_ONLY = (Verdict.PASS,)
PASS_OR_FAIL = (Verdict.PASS, Verdict.FAIL)
