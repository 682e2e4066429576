"""Fully dynamic maximal matching in rank-r hypergraphs, and the induced
r-approximate dynamic set cover."""
from .core import ANALYSIS_CONSTANTS, TEST_CONSTANTS, Constants, HypergraphState, Params, PreconditionError, UsageError
from .matcher_r2 import MatcherR2
from .matcher_r3 import MatcherR3
from .oracle import AuditReport, naive_maximal_matching, opt_cover_bruteforce, verify_state
from .replay import RunConfig, replay
from .sampler import OfflineSampler, OnlineSampler
from .setcover import DynamicSetCover, SetSystem, extract_cover, to_hypergraph
from .trace import UpdateTrace, append_teardown, gen_random_trace, parse_trace

__all__ = [
    "ANALYSIS_CONSTANTS",
    "TEST_CONSTANTS",
    "Constants",
    "HypergraphState",
    "Params",
    "PreconditionError",
    "UsageError",
    "MatcherR2",
    "MatcherR3",
    "AuditReport",
    "naive_maximal_matching",
    "opt_cover_bruteforce",
    "verify_state",
    "RunConfig",
    "replay",
    "OfflineSampler",
    "OnlineSampler",
    "DynamicSetCover",
    "SetSystem",
    "extract_cover",
    "to_hypergraph",
    "UpdateTrace",
    "append_teardown",
    "gen_random_trace",
    "parse_trace",
]
