"""Random valid-operation driver for exploration sessions.

Used by both the module tests and the acceptance suite: generates operation
sequences that always respect the status preconditions, records the status
trace, and returns the finished session for replay checks.
"""

from __future__ import annotations

import random

from scenescout.exploration import ExplorationEngine, ExplorationSession, SessionStatus

KEYWORD_POOL = ["parks", "schools", "transit", "cafes", "benches", "parks"]


def random_walk(
    engine: ExplorationEngine,
    rng: random.Random,
    *,
    intent: str,
    start,
    session_id: str,
    max_ops: int = 8,
) -> tuple[ExplorationSession, list[SessionStatus]]:
    session = engine.start_session(intent, start, session_id=session_id)
    trace = [session.status]

    def record() -> None:
        trace.append(session.status)

    for _ in range(max_ops):
        status = session.status
        if status is SessionStatus.ENDED:
            break
        if status is SessionStatus.AWAITING_KEYWORDS:
            additions = rng.sample(KEYWORD_POOL, rng.randint(0, 3))
            engine.add_keywords(session, additions)
            record()
            continue
        if status is SessionStatus.WALKING:
            op = rng.choice(("add_keywords", "describe_block", "step_forward", "step_forward", "end"))
            if op == "add_keywords":
                engine.add_keywords(session, rng.sample(KEYWORD_POOL, rng.randint(0, 2)))
            elif op == "describe_block":
                engine.describe_block(session)
            elif op == "step_forward":
                engine.step_forward(session)
            else:
                engine.end_session(session)
            record()
            continue
        # AT_INTERSECTION
        options = engine.enumerate_directions(session)
        record()
        if len(options) >= 2 and rng.random() < 0.7:
            options = engine.suggest_direction(session, options)
            record()
        if rng.random() < 0.1:
            engine.end_session(session)
        else:
            engine.choose_direction(session, rng.randint(1, len(options)))
        record()
    return session, trace
